#pragma once
// Constrained beam search over discrete neighbourhoods, plus the Greedy-P and
// random baselines, the concatenative attack and a brute-force oracle.
//
// The engine is generic over a search space providing
//   State initial();
//   double objective(const State&);
//   void children(const State&, Emit emit, bool& delta_blocked);
//   std::size_t edit_count(const State&);
//   const Key& key(const State&);
// where children() only emits states that pass the constraint set and the
// edit budget, and sets delta_blocked when some candidate was rejected only
// because it would exceed the budget.
//
// Ordering of states everywhere: J descending, then fewer edits, then key
// ascending. Ranking, truncation and the returned optimum all use it.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "synadv/constraints.hpp"
#include "synadv/core.hpp"
#include "synadv/models.hpp"
#include "synadv/rng.hpp"

namespace synadv {

// ---------------------------------------------------------------------------
// Objective.

enum class ObjectiveMode { targeted, untargeted };

struct ObjectiveSpec {
  ObjectiveMode mode = ObjectiveMode::untargeted;
  std::size_t label = 0;  // target class y' or true class y

  static ObjectiveSpec targeted(std::size_t target) { return {ObjectiveMode::targeted, target}; }
  static ObjectiveSpec untargeted(std::size_t truth) { return {ObjectiveMode::untargeted, truth}; }

  // targeted: P(y'); untargeted: 1 - P(y).
  double score(const ClassScores& s) const {
    if (label >= s.size()) throw Error("objective: label outside model classes");
    const auto p = s.probabilities();
    return mode == ObjectiveMode::targeted ? p[label] : 1.0 - p[label];
  }

  bool flipped(const ClassScores& s) const {
    const std::size_t y = s.argmax();
    return mode == ObjectiveMode::targeted ? y == label : y != label;
  }
};

template <class Model, class Input>
double objective_score(const ObjectiveSpec& spec, const Model& model, const Input& x) {
  return spec.score(model.score(x));
}

// Targeted attacks need y' != y; check once the true label is known.
inline void validate_objective(const ObjectiveSpec& spec, std::size_t true_label) {
  if (spec.mode == ObjectiveMode::targeted && spec.label == true_label)
    throw ConfigError("targeted objective requires target label != true label");
}

struct AttackConfig {
  double tau = 0.9;
  std::size_t beam = 1;
  double delta_max = 0.5;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 0;  // 0 = no limit

  void validate() const {
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("attack: tau must lie in (0,1]");
    if (beam < 1) throw ConfigError("attack: beam must be >= 1");
    if (!(delta_max > 0.0 && delta_max <= 1.0)) throw ConfigError("attack: delta must lie in (0,1]");
  }
};

enum class StopReason { tau, exhausted, delta, max_rounds };

inline std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::tau: return "tau";
    case StopReason::exhausted: return "exhausted";
    case StopReason::delta: return "delta";
    case StopReason::max_rounds: return "max-rounds";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Generic engine.

template <class State>
struct SearchOutcome {
  State best;
  double J = 0.0;
  double J_initial = 0.0;
  std::vector<double> trace;  // best J so far, one entry per round (round 0 = x)
  std::size_t expansions = 0;
  std::size_t rounds = 0;
  StopReason stop = StopReason::exhausted;
};

namespace detail {

template <class Space, class State>
bool better(const Space& space, const State& a, double ja, const State& b, double jb) {
  if (ja != jb) return ja > jb;
  const auto ea = space.edit_count(a), eb = space.edit_count(b);
  if (ea != eb) return ea < eb;
  return space.key(a) < space.key(b);
}

}  // namespace detail

template <class Space>
auto beam_search(const Space& space, const AttackConfig& cfg) {
  using State = typename Space::State;
  cfg.validate();
  struct Node {
    State s;
    double J;
  };
  SearchOutcome<State> out;
  Node start{space.initial(), 0.0};
  start.J = space.objective(start.s);
  out.J_initial = start.J;
  out.best = start.s;
  out.J = start.J;
  out.trace.push_back(start.J);
  if (start.J >= cfg.tau) {
    out.stop = StopReason::tau;
    return out;
  }

  std::vector<Node> beam{std::move(start)};
  std::vector<Node> work;
  while (true) {
    if (cfg.max_rounds && out.rounds >= cfg.max_rounds) {
      out.stop = StopReason::max_rounds;
      break;
    }
    work.clear();
    bool delta_blocked = false;
    for (const auto& node : beam)
      space.children(
          node.s,
          [&](State child) {
            const double J = space.objective(child);
            ++out.expansions;
            work.push_back(Node{std::move(child), J});
          },
          delta_blocked);
    if (work.empty()) {
      out.stop = delta_blocked ? StopReason::delta : StopReason::exhausted;
      break;
    }
    ++out.rounds;
    std::sort(work.begin(), work.end(), [&](const Node& a, const Node& b) {
      return detail::better(space, a.s, a.J, b.s, b.J);
    });
    std::vector<Node> next;
    std::set<std::decay_t<decltype(space.key(work[0].s))>> seen;
    for (auto& node : work) {
      if (next.size() >= cfg.beam) break;
      if (!seen.insert(space.key(node.s)).second) continue;
      next.push_back(std::move(node));
    }
    if (detail::better(space, next[0].s, next[0].J, out.best, out.J)) {
      out.best = next[0].s;
      out.J = next[0].J;
    }
    out.trace.push_back(out.J);
    beam = std::move(next);
    if (beam[0].J >= cfg.tau) {
      out.stop = StopReason::tau;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sequence attacks.

struct Edit {
  std::size_t unit = 0;
  std::size_t position = 0;  // first token of the unit
  std::vector<TokenId> old_tokens;
  std::vector<TokenId> new_tokens;
  friend bool operator==(const Edit&, const Edit&) = default;
};

struct AttackResult {
  TokenSequence x;
  TokenSequence x_adv;
  bool succeeded = false;    // prediction moved to the attack outcome
  bool reached_tau = false;  // J_final >= tau
  double J_initial = 0.0;
  double J_final = 0.0;
  std::vector<Edit> edits;
  double fraction_replaced = 0.0;
  std::size_t expansions_evaluated = 0;
  std::size_t rounds = 0;
  std::vector<double> trace;
  StopReason stop = StopReason::exhausted;
  std::size_t label_before = 0;
  std::size_t label_after = 0;
};

inline std::vector<Edit> diff_units(const TokenSequence& x, const TokenSequence& x_adv, std::size_t width) {
  std::vector<Edit> edits;
  for (std::size_t u = 0; u * width < x.size(); ++u) {
    const std::size_t p = u * width;
    const std::size_t end = std::min(p + width, x.size());
    if (std::equal(x.ids.begin() + static_cast<std::ptrdiff_t>(p), x.ids.begin() + static_cast<std::ptrdiff_t>(end),
                   x_adv.ids.begin() + static_cast<std::ptrdiff_t>(p)))
      continue;
    Edit e{u, p, {}, {}};
    for (std::size_t i = p; i < end; ++i) {
      e.old_tokens.push_back(x[i]);
      e.new_tokens.push_back(x_adv[i]);
    }
    edits.push_back(std::move(e));
  }
  return edits;
}

inline double fraction_replaced(const TokenSequence& x, const TokenSequence& x_adv) {
  if (x.empty()) return 0.0;
  return static_cast<double>(hamming_distance(x, x_adv)) / static_cast<double>(x.size());
}

// Each unit may be edited at most once along a search path; candidates come
// from the unit's original content.
template <class Model>
class SequenceSpace {
 public:
  struct State {
    TokenSequence seq;
    std::vector<std::uint32_t> edited;  // sorted unit indices
    std::size_t changed = 0;            // Hamming distance to x
  };

  SequenceSpace(const TokenSequence& x, const Model& model, const ObjectiveSpec& spec, const Proposer& proposer,
                const SequenceConstraints& cs, double delta_max)
      : x_(x), model_(model), spec_(spec), width_(proposer.unit_width()), bound_(cs.bind(x)), delta_(delta_max) {
    const std::size_t n = proposer.unit_count(x);
    cands_.resize(n);
    for (std::size_t u = 0; u < n; ++u) cands_[u] = proposer.candidates(x, u);
  }

  State initial() const { return State{x_, {}, 0}; }

  double objective(const State& s) const { return spec_.score(model_.score(s.seq)); }

  std::size_t edit_count(const State& s) const { return s.edited.size(); }

  const TokenSequence& key(const State& s) const { return s.seq; }

  template <class Emit>
  void children(const State& s, Emit&& emit, bool& delta_blocked) const {
    const double len = static_cast<double>(x_.size());
    std::size_t k = 0;
    for (std::size_t u = 0; u < cands_.size(); ++u) {
      if (k < s.edited.size() && s.edited[k] == u) {
        ++k;
        continue;
      }
      const std::size_t p = u * width_;
      for (const auto& cand : cands_[u]) {
        std::size_t diff = 0;
        for (std::size_t i = 0; i < cand.size(); ++i) diff += cand[i] != x_[p + i] ? 1 : 0;
        const std::size_t changed = s.changed + diff;
        if (static_cast<double>(changed) > delta_ * len) {
          delta_blocked = true;
          continue;
        }
        State c{s.seq, s.edited, changed};
        for (std::size_t i = 0; i < cand.size(); ++i) c.seq[p + i] = cand[i];
        if (!bound_.satisfied(c.seq)) continue;
        c.edited.insert(std::lower_bound(c.edited.begin(), c.edited.end(), static_cast<std::uint32_t>(u)),
                        static_cast<std::uint32_t>(u));
        emit(std::move(c));
      }
    }
  }

  const std::vector<std::vector<TokenId>>& candidates(std::size_t unit) const { return cands_[unit]; }
  std::size_t unit_count() const { return cands_.size(); }
  std::size_t unit_width() const { return width_; }
  const SequenceConstraints::Bound& bound() const { return bound_; }

 private:
  TokenSequence x_;
  const Model& model_;
  ObjectiveSpec spec_;
  std::size_t width_;
  SequenceConstraints::Bound bound_;
  double delta_;
  std::vector<std::vector<std::vector<TokenId>>> cands_;
};

template <class Model>
AttackResult finish_sequence_result(const TokenSequence& x, const TokenSequence& x_adv, const Model& model,
                                    const ObjectiveSpec& spec, const AttackConfig& cfg, std::size_t width) {
  AttackResult r;
  r.x = x;
  r.x_adv = x_adv;
  const auto before = model.score(x);
  const auto after = model.score(x_adv);
  r.J_initial = spec.score(before);
  r.J_final = spec.score(after);
  r.label_before = before.argmax();
  r.label_after = after.argmax();
  r.succeeded = spec.flipped(after);
  r.reached_tau = r.J_final >= cfg.tau;
  r.edits = diff_units(x, x_adv, width);
  r.fraction_replaced = fraction_replaced(x, x_adv);
  return r;
}

template <class Model>
AttackResult beam_search_attack(const TokenSequence& x, const Model& model, const ObjectiveSpec& spec,
                                const Proposer& proposer, const SequenceConstraints& cs, const AttackConfig& cfg) {
  SequenceSpace<Model> space(x, model, spec, proposer, cs, cfg.delta_max);
  auto o = beam_search(space, cfg);
  AttackResult r = finish_sequence_result(x, o.best.seq, model, spec, cfg, proposer.unit_width());
  r.trace = std::move(o.trace);
  r.expansions_evaluated = o.expansions;
  r.rounds = o.rounds;
  r.stop = o.stop;
  return r;
}

// Importance of a unit = best single-substitution gain on x. Units are then
// visited in descending importance (ties by index) and the best improving
// candidate is committed.
template <class Model>
AttackResult greedy_p_attack(const TokenSequence& x, const Model& model, const ObjectiveSpec& spec,
                             const Proposer& proposer, const SequenceConstraints& cs, const AttackConfig& cfg) {
  cfg.validate();
  SequenceSpace<Model> space(x, model, spec, proposer, cs, cfg.delta_max);
  const std::size_t width = proposer.unit_width();
  const double J0 = spec.score(model.score(x));
  std::size_t expansions = 0;
  std::vector<std::pair<double, std::size_t>> importance;
  for (std::size_t u = 0; u < space.unit_count(); ++u) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& cand : space.candidates(u)) {
      TokenSequence y = x;
      std::copy(cand.begin(), cand.end(), y.ids.begin() + static_cast<std::ptrdiff_t>(u * width));
      if (!space.bound().satisfied(y)) continue;
      ++expansions;
      best = std::max(best, spec.score(model.score(y)) - J0);
    }
    if (best > -std::numeric_limits<double>::infinity()) importance.emplace_back(best, u);
  }
  std::stable_sort(importance.begin(), importance.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  TokenSequence cur = x;
  double J = J0;
  std::size_t changed = 0;
  std::vector<double> trace{J};
  StopReason stop = J >= cfg.tau ? StopReason::tau : StopReason::exhausted;
  const double budget = cfg.delta_max * static_cast<double>(x.size());
  for (const auto& [gain, u] : importance) {
    if (J >= cfg.tau) break;
    const std::size_t p = u * width;
    std::optional<TokenSequence> best_seq;
    double best_J = J;
    std::size_t best_changed = changed;
    for (const auto& cand : space.candidates(u)) {
      std::size_t diff = 0;
      for (std::size_t i = 0; i < cand.size(); ++i) diff += cand[i] != x[p + i] ? 1 : 0;
      if (static_cast<double>(changed + diff) > budget) {
        stop = StopReason::delta;
        continue;
      }
      TokenSequence y = cur;
      std::copy(cand.begin(), cand.end(), y.ids.begin() + static_cast<std::ptrdiff_t>(p));
      if (!space.bound().satisfied(y)) continue;
      ++expansions;
      const double Jy = spec.score(model.score(y));
      if (Jy > best_J) {
        best_J = Jy;
        best_seq = std::move(y);
        best_changed = changed + diff;
      }
    }
    if (best_seq) {
      cur = std::move(*best_seq);
      J = best_J;
      changed = best_changed;
      trace.push_back(J);
    }
  }
  if (J >= cfg.tau) stop = StopReason::tau;
  AttackResult r = finish_sequence_result(x, cur, model, spec, cfg, width);
  r.trace = std::move(trace);
  r.expansions_evaluated = expansions;
  r.rounds = r.trace.size() - 1;
  r.stop = stop;
  return r;
}

// Visits editable units in a seeded random order and applies a uniformly
// chosen constraint-satisfying candidate at each until
// round(fraction * len) tokens differ from x.
inline TokenSequence random_perturb(const TokenSequence& x, const Proposer& proposer, const SequenceConstraints& cs,
                                    double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error("random_perturb: fraction must lie in [0,1]");
  const std::size_t target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(x.size())));
  if (target == 0) return x;
  Rng rng(seed);
  const auto bound = cs.bind(x);
  const std::size_t width = proposer.unit_width();
  std::vector<std::size_t> units(proposer.unit_count(x));
  std::iota(units.begin(), units.end(), std::size_t{0});
  rng.shuffle(units);
  TokenSequence cur = x;
  std::size_t changed = 0;
  for (std::size_t u : units) {
    if (changed >= target) break;
    const std::size_t p = u * width;
    std::vector<TokenSequence> ok;
    for (const auto& cand : proposer.candidates(x, u)) {
      TokenSequence y = cur;
      std::copy(cand.begin(), cand.end(), y.ids.begin() + static_cast<std::ptrdiff_t>(p));
      if (bound.satisfied(y)) ok.push_back(std::move(y));
    }
    if (ok.empty()) continue;
    cur = std::move(ok[rng.below(ok.size())]);
    changed = hamming_distance(x, cur);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Concatenative attack.

struct ConcatResult {
  TokenSequence x_adv;
  std::vector<TokenId> appended;
  std::size_t shortfall = 0;  // T minus tokens actually appended
};

// Tokens ranked by w_{l,target} - w_{l,other} descending (ties by id),
// restricted to those above `gamma` and, if given, to allowed[l] != 0.
inline std::vector<std::pair<TokenId, double>> ranked_tokens(const LinearModel& m, std::size_t target, double gamma,
                                                             const std::vector<std::uint8_t>* allowed = nullptr) {
  if (m.num_classes != 2) throw Error("token ranking requires a two-class model");
  if (m.featurizer.kind != FeatureKind::bag_of_words) throw Error("token ranking requires bag-of-words features");
  if (target > 1) throw Error("token ranking: target must be 0 or 1");
  const std::size_t other = 1 - target;
  std::vector<std::pair<TokenId, double>> out;
  for (std::size_t l = 0; l < m.dim(); ++l) {
    if (allowed && (l >= allowed->size() || !(*allowed)[l])) continue;
    const double d = m.weight(target, l) - m.weight(other, l);
    if (d > gamma) out.emplace_back(static_cast<TokenId>(l), d);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

// Spurious tokens for direction 0->1 (or 1->0): delta_l = w_{l1} - w_{l0} > gamma.
inline std::vector<std::pair<TokenId, double>> spurious_token_list(const NaiveBayesModel& nb, double gamma,
                                                                   std::size_t direction = 1) {
  return ranked_tokens(nb.linear, direction, gamma);
}

inline ConcatResult concatenative_attack(const TokenSequence& x, const LinearModel& model, std::size_t T,
                                         std::size_t target = 1, double gamma = 0.0,
                                         const std::vector<std::uint8_t>* allowed = nullptr) {
  ConcatResult r{x, {}, 0};
  if (T == 0) return r;
  const auto ranked = ranked_tokens(model, target, gamma, allowed);
  for (std::size_t i = 0; i < ranked.size() && i < T; ++i) {
    r.x_adv.ids.push_back(ranked[i].first);
    r.appended.push_back(ranked[i].first);
  }
  r.shortfall = T - r.appended.size();
  return r;
}

inline ConcatResult concatenative_attack(const TokenSequence& x, const NaiveBayesModel& nb, std::size_t T,
                                         std::size_t target = 1, double gamma = 0.0,
                                         const std::vector<std::uint8_t>* allowed = nullptr) {
  return concatenative_attack(x, nb.linear, T, target, gamma, allowed);
}

// ---------------------------------------------------------------------------
// Exhaustive oracle.

inline constexpr double kOracleStateLimit = 1e6;

// Number of perturbations with at most T edited units: sum_{k<=T} e_k(c).
inline double oracle_state_count(const std::vector<std::size_t>& cand_counts, std::size_t T) {
  std::vector<double> e(T + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t c : cand_counts)
    for (std::size_t k = T; k >= 1; --k) e[k] += e[k - 1] * static_cast<double>(c);
  double total = 0.0;
  for (double v : e) total += v;
  return total;
}

struct OracleResult {
  TokenSequence best;
  double J = 0.0;
  std::size_t edits = 0;
  std::size_t states = 0;  // perturbations enumerated, including x
};

template <class Model>
OracleResult exhaustive_oracle(const TokenSequence& x, const Model& model, const ObjectiveSpec& spec,
                               const Proposer& proposer, const SequenceConstraints& cs, std::size_t T) {
  const std::size_t n = proposer.unit_count(x);
  const std::size_t width = proposer.unit_width();
  std::vector<std::vector<std::vector<TokenId>>> cands(n);
  std::vector<std::size_t> counts(n);
  for (std::size_t u = 0; u < n; ++u) {
    cands[u] = proposer.candidates(x, u);
    counts[u] = cands[u].size();
  }
  if (oracle_state_count(counts, std::min(T, n)) > kOracleStateLimit)
    throw Error("exhaustive_oracle: search space exceeds 10^6 states");
  const auto bound = cs.bind(x);
  OracleResult best{x, spec.score(model.score(x)), 0, 0};
  TokenSequence cur = x;
  auto consider = [&](std::size_t edits) {
    ++best.states;
    if (!bound.satisfied(cur)) return;
    const double J = spec.score(model.score(cur));
    if (J > best.J || (J == best.J && (edits < best.edits || (edits == best.edits && cur < best.best)))) {
      best.best = cur;
      best.J = J;
      best.edits = edits;
    }
  };
  auto rec = [&](auto&& self, std::size_t u, std::size_t edits) -> void {
    if (u == n) {
      consider(edits);
      return;
    }
    self(self, u + 1, edits);
    if (edits == T) return;
    const std::size_t p = u * width;
    for (const auto& cand : cands[u]) {
      for (std::size_t i = 0; i < cand.size(); ++i) cur[p + i] = cand[i];
      self(self, u + 1, edits + 1);
    }
    for (std::size_t i = 0; i < width && p + i < x.size(); ++i) cur[p + i] = x[p + i];
  };
  best.states = 0;
  rec(rec, 0, 0);
  return best;
}

// ---------------------------------------------------------------------------
// Graph attack by vertex relabelling. Moves are transpositions; the edit
// fraction is moves / n.

template <class Model>
class GraphSpace {
 public:
  struct State {
    PermutedGraph g;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> moves;
  };

  GraphSpace(const AdjacencyGraph& x, const Model& model, const ObjectiveSpec& spec,
             const ConstraintSet<PermutedGraph>& cs, double delta_max)
      : x_(PermutedGraph::identity(x)), model_(model), spec_(spec), bound_(cs.bind(x_)), delta_(delta_max) {}

  State initial() const { return State{x_, {}}; }

  double objective(const State& s) const { return spec_.score(model_.score(s.g.graph)); }

  std::size_t edit_count(const State& s) const { return s.moves.size(); }

  const AdjacencyGraph& key(const State& s) const { return s.g.graph; }

  template <class Emit>
  void children(const State& s, Emit&& emit, bool& delta_blocked) const {
    const std::size_t n = x_.graph.vertex_count();
    if (static_cast<double>(s.moves.size() + 1) > delta_ * static_cast<double>(n)) {
      delta_blocked = n > 1;
      return;
    }
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) {
        State c{s.g, s.moves};
        c.g.graph.swap_vertices(i, j);
        for (auto& lbl : c.g.perm) {
          if (lbl == i)
            lbl = j;
          else if (lbl == j)
            lbl = i;
        }
        if (c.g.graph == s.g.graph) continue;
        if (!bound_.satisfied(c.g)) continue;
        c.moves.emplace_back(i, j);
        emit(std::move(c));
      }
  }

 private:
  PermutedGraph x_;
  const Model& model_;
  ObjectiveSpec spec_;
  ConstraintSet<PermutedGraph>::Bound bound_;
  double delta_;
};

struct GraphAttackResult {
  PermutedGraph adv;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> moves;
  bool succeeded = false;
  bool reached_tau = false;
  double J_initial = 0.0;
  double J_final = 0.0;
  double fraction_replaced = 0.0;
  std::size_t expansions_evaluated = 0;
  std::size_t rounds = 0;
  std::vector<double> trace;
  StopReason stop = StopReason::exhausted;
  std::size_t label_before = 0;
  std::size_t label_after = 0;
};

template <class Model>
GraphAttackResult graph_attack(const AdjacencyGraph& x, const Model& model, const ObjectiveSpec& spec,
                               const AttackConfig& cfg) {
  ConstraintSet<PermutedGraph> cs;
  cs.add(isomorphism_component());
  GraphSpace<Model> space(x, model, spec, cs, cfg.delta_max);
  auto o = beam_search(space, cfg);
  GraphAttackResult r;
  r.adv = o.best.g;
  r.moves = o.best.moves;
  const auto before = model.score(x);
  const auto after = model.score(r.adv.graph);
  r.J_initial = spec.score(before);
  r.J_final = spec.score(after);
  r.label_before = before.argmax();
  r.label_after = after.argmax();
  r.succeeded = spec.flipped(after);
  r.reached_tau = r.J_final >= cfg.tau;
  r.fraction_replaced = x.vertex_count() ? static_cast<double>(r.moves.size()) / static_cast<double>(x.vertex_count()) : 0.0;
  r.expansions_evaluated = o.expansions;
  r.rounds = o.rounds;
  r.trace = std::move(o.trace);
  r.stop = o.stop;
  return r;
}

// ---------------------------------------------------------------------------
// Serialisation (one JSON object per attacked example).

namespace detail {

inline nlohmann::json tokens_json(const std::vector<TokenId>& ids, const Vocabulary* vocab) {
  if (!vocab) return ids;
  const char* sep = *vocab == Vocabulary::dna() ? "" : " ";
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += sep;
    s += vocab->token_of(ids[i]);
  }
  return s;
}

}  // namespace detail

inline nlohmann::json to_json(const AttackResult& r, const Vocabulary* vocab = nullptr) {
  auto edits = nlohmann::json::array();
  for (const auto& e : r.edits)
    edits.push_back({{"unit", e.unit},
                     {"position", e.position},
                     {"old", detail::tokens_json(e.old_tokens, vocab)},
                     {"new", detail::tokens_json(e.new_tokens, vocab)}});
  return {{"succeeded", r.succeeded},
          {"reached_tau", r.reached_tau},
          {"label_before", r.label_before},
          {"label_after", r.label_after},
          {"J_initial", r.J_initial},
          {"J_final", r.J_final},
          {"fraction_replaced", r.fraction_replaced},
          {"expansions", r.expansions_evaluated},
          {"rounds", r.rounds},
          {"stop", to_string(r.stop)},
          {"trace", r.trace},
          {"edits", edits}};
}

inline nlohmann::json to_json(const GraphAttackResult& r) {
  auto moves = nlohmann::json::array();
  for (const auto& [i, j] : r.moves) moves.push_back({i, j});
  return {{"succeeded", r.succeeded},
          {"reached_tau", r.reached_tau},
          {"label_before", r.label_before},
          {"label_after", r.label_after},
          {"J_initial", r.J_initial},
          {"J_final", r.J_final},
          {"fraction_replaced", r.fraction_replaced},
          {"expansions", r.expansions_evaluated},
          {"rounds", r.rounds},
          {"stop", to_string(r.stop)},
          {"trace", r.trace},
          {"transpositions", moves}};
}

}  // namespace synadv
