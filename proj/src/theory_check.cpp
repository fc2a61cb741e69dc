// Closed-form quantities for the synthetic text model, plus two Monte Carlo
// checks.
#include <cstdio>

#include "synadv/synadv.hpp"

using namespace synadv;

int main() {
  TheoryParams tp;
  tp.D_docs = 200;
  tp.L = 50;
  tp.V = 2000;
  tp.gamma = 0.5;
  const double D = token_count(tp, TokenCountMode::per_class);
  std::printf("sigma(p)               %.5f\n", sigma_p(tp.p, D));
  std::printf("expected spurious      %.2f of %zu\n", expected_spurious_count(tp.V, tp.gamma, tp.p, D), tp.V);

  for (const auto& r : {mc_verify_spurious(tp, 20, 1), mc_verify_lemma1(5000, 5000, 0.01, 0.01, 2000, 1)}) {
    std::printf("%s: %s\n", r.name.c_str(), r.pass() ? "pass" : "fail");
    for (const auto& c : r.checks)
      std::printf("  %-16s predicted %.5g  empirical %.5g  tolerance %.3g\n", c.name.c_str(), c.predicted, c.empirical,
                  c.tolerance);
  }
}
