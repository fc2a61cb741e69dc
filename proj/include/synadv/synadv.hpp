#pragma once

#include "synadv/error.hpp"
#include "synadv/rng.hpp"
#include "synadv/core.hpp"
#include "synadv/genetic_code.hpp"
#include "synadv/embedding.hpp"
#include "synadv/synthgen.hpp"
#include "synadv/models.hpp"
#include "synadv/constraints.hpp"
#include "synadv/parallel.hpp"
#include "synadv/attack.hpp"
#include "synadv/theory.hpp"
#include "synadv/experiment.hpp"
