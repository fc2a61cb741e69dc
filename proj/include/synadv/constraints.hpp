#pragma once
// Distance components with inclusive bounds, and the per-position candidate
// generators (proposers) that define an attack neighbourhood.

#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "synadv/core.hpp"
#include "synadv/embedding.hpp"
#include "synadv/genetic_code.hpp"
#include "synadv/models.hpp"

namespace synadv {

// ---------------------------------------------------------------------------
// Distances.

// Number of codons whose amino acid differs; zero iff the proteins match.
inline double codon_synonymy_distance(const TokenSequence& x, const TokenSequence& x2) {
  if (x.size() != x2.size() || x.size() % 3 != 0)
    return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); i += 3)
    if (translate_codon(codon_index(x[i], x[i + 1], x[i + 2])) !=
        translate_codon(codon_index(x2[i], x2[i + 1], x2[i + 2])))
      d += 1.0;
  return d;
}

// Mean token vector; tokens without a vector contribute zero.
inline std::vector<double> sentence_embedding(const TokenSequence& x, const EmbeddingTable& emb) {
  std::vector<double> v(emb.dim(), 0.0);
  if (x.empty()) return v;
  for (TokenId t : x) {
    if (!emb.has(t)) continue;
    auto r = emb.row(t);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += r[k];
  }
  for (double& c : v) c /= static_cast<double>(x.size());
  return v;
}

inline double semantic_distance(const TokenSequence& x, const TokenSequence& x2, const EmbeddingTable& emb) {
  if (x.size() != x2.size()) throw Error("semantic_distance: length mismatch");
  const auto a = sentence_embedding(x, emb);
  const auto b = sentence_embedding(x2, emb);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

inline double syntactic_distance(const TokenSequence& x, const TokenSequence& x2, const TrigramLM& lm) {
  return std::abs(lm_log_prob(lm, x2) - lm_log_prob(lm, x));
}

// ---------------------------------------------------------------------------
// Constraint sets.

template <class State>
struct DistanceComponent {
  std::string name;
  double bound = 0.0;
  // Given the original, returns d(original, .). Lets components cache work
  // that only depends on the original (e.g. its LM score).
  std::function<std::function<double(const State&)>(const State&)> bind;
};

struct ConstraintCheck {
  bool satisfied = true;
  std::vector<double> values;
  std::optional<std::size_t> violated;  // first component over its bound
};

template <class State>
class ConstraintSet {
 public:
  using Component = DistanceComponent<State>;

  ConstraintSet& add(Component c) {
    components_.push_back(std::move(c));
    return *this;
  }

  std::size_t size() const noexcept { return components_.size(); }
  const Component& component(std::size_t i) const { return components_[i]; }

  class Bound {
   public:
    ConstraintCheck check(const State& x2) const {
      ConstraintCheck r;
      r.values.reserve(fns_.size());
      for (std::size_t i = 0; i < fns_.size(); ++i) {
        const double d = fns_[i](x2);
        r.values.push_back(d);
        if (!(d <= bounds_[i]) && !r.violated) {
          r.satisfied = false;
          r.violated = i;
        }
      }
      return r;
    }

    bool satisfied(const State& x2) const {
      for (std::size_t i = 0; i < fns_.size(); ++i)
        if (!(fns_[i](x2) <= bounds_[i])) return false;
      return true;
    }

   private:
    friend class ConstraintSet;
    std::vector<std::function<double(const State&)>> fns_;
    std::vector<double> bounds_;
  };

  Bound bind(const State& original) const {
    Bound b;
    for (const auto& c : components_) {
      b.fns_.push_back(c.bind(original));
      b.bounds_.push_back(c.bound);
    }
    return b;
  }

 private:
  std::vector<Component> components_;
};

using SequenceConstraints = ConstraintSet<TokenSequence>;

template <class State>
ConstraintCheck check_constraints(const State& x, const State& x2, const ConstraintSet<State>& cs) {
  return cs.bind(x).check(x2);
}

inline DistanceComponent<TokenSequence> codon_synonymy_component(double gamma = 0.0) {
  return {"codon-synonymy", gamma, [](const TokenSequence& x) {
            return std::function<double(const TokenSequence&)>(
                [x](const TokenSequence& x2) { return codon_synonymy_distance(x, x2); });
          }};
}

inline DistanceComponent<TokenSequence> semantic_component(std::shared_ptr<const EmbeddingTable> emb,
                                                           double gamma1) {
  return {"semantic", gamma1, [emb](const TokenSequence& x) {
            auto base = sentence_embedding(x, *emb);
            return std::function<double(const TokenSequence&)>([emb, base](const TokenSequence& x2) {
              const auto v = sentence_embedding(x2, *emb);
              double s = 0.0;
              for (std::size_t k = 0; k < v.size(); ++k) s += (v[k] - base[k]) * (v[k] - base[k]);
              return std::sqrt(s);
            });
          }};
}

inline DistanceComponent<TokenSequence> syntactic_component(std::shared_ptr<const TrigramLM> lm, double gamma2) {
  return {"syntactic", gamma2, [lm](const TokenSequence& x) {
            const double base = lm_log_prob(*lm, x);
            return std::function<double(const TokenSequence&)>(
                [lm, base](const TokenSequence& x2) { return std::abs(lm_log_prob(*lm, x2) - base); });
          }};
}

// ---------------------------------------------------------------------------
// Proposers. A sequence is split into fixed-width editable units (width 1 for
// tokens, 3 for codons); candidates for a unit are replacement spans of the
// same width and never equal the current content.

class Proposer {
 public:
  virtual ~Proposer() = default;

  virtual std::size_t unit_width() const { return 1; }

  virtual std::size_t unit_count(const TokenSequence& x) const { return x.size() / unit_width(); }

  virtual std::vector<std::vector<TokenId>> candidates(const TokenSequence& x, std::size_t unit) const = 0;

  // Units that have at least one candidate.
  std::vector<std::size_t> positions(const TokenSequence& x) const {
    std::vector<std::size_t> out;
    const std::size_t n = unit_count(x);
    for (std::size_t u = 0; u < n; ++u)
      if (!candidates(x, u).empty()) out.push_back(u);
    return out;
  }
};

class CodonProposer final : public Proposer {
 public:
  explicit CodonProposer(std::size_t max_candidates = 6) : max_(max_candidates) {}

  std::size_t unit_width() const override { return 3; }

  std::size_t unit_count(const TokenSequence& x) const override {
    if (x.size() % 3 != 0) throw Error("codon proposer: not a codon multiple");
    return x.size() / 3;
  }

  std::vector<std::vector<TokenId>> candidates(const TokenSequence& x, std::size_t unit) const override {
    if (3 * unit + 3 > x.size()) throw Error("codon proposer: unit out of range");
    const CodonIndex c = codon_index(x[3 * unit], x[3 * unit + 1], x[3 * unit + 2]);
    std::vector<std::vector<TokenId>> out;
    for (CodonIndex s : codon_synonym_indices(c)) {
      if (out.size() >= max_) break;
      const auto t = codon_tokens(s);
      out.push_back({t[0], t[1], t[2]});
    }
    return out;
  }

 private:
  std::size_t max_;
};

// token -> tag, "token<TAB>tag" per line.
inline std::map<TokenId, std::string> read_pos_lexicon(std::istream& in, const Vocabulary& vocab) {
  std::map<TokenId, std::string> lex;
  const auto lines = detail::read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto tab = lines[i].find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == lines[i].size())
      throw ParseError(i + 1, "expected '<token>\\t<tag>'");
    if (auto id = vocab.find(lines[i].substr(0, tab))) lex[*id] = lines[i].substr(tab + 1);
  }
  return lex;
}

// Nearest neighbours in embedding space, ascending distance, ties by id.
inline std::vector<TokenId> nearest_neighbors(const EmbeddingTable& emb, const Vocabulary& vocab, TokenId t,
                                              std::size_t N,
                                              const std::map<TokenId, std::string>* lexicon = nullptr) {
  std::vector<TokenId> out;
  if (N == 0 || !emb.has(t) || t == vocab.oov_id()) return out;
  std::optional<std::string> tag;
  if (lexicon) {
    auto it = lexicon->find(t);
    tag = it == lexicon->end() ? std::string() : it->second;
  }
  std::vector<std::pair<double, TokenId>> cand;
  for (TokenId s = 0; s < emb.vocab_size(); ++s) {
    if (s == t || s == vocab.oov_id() || !emb.has(s)) continue;
    if (tag) {
      auto it = lexicon->find(s);
      if ((it == lexicon->end() ? std::string() : it->second) != *tag) continue;
    }
    cand.emplace_back(emb.distance(t, s), s);
  }
  const std::size_t k = std::min(N, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  for (std::size_t i = 0; i < k; ++i) out.push_back(cand[i].second);
  return out;
}

class EmbeddingProposer final : public Proposer {
 public:
  EmbeddingProposer(const Vocabulary& vocab, const EmbeddingTable& emb, std::size_t N,
                    const std::map<TokenId, std::string>* lexicon = nullptr)
      : neighbours_(vocab.size()) {
    for (TokenId t = 0; t < vocab.size(); ++t) neighbours_[t] = nearest_neighbors(emb, vocab, t, N, lexicon);
  }

  std::vector<std::vector<TokenId>> candidates(const TokenSequence& x, std::size_t unit) const override {
    std::vector<std::vector<TokenId>> out;
    const TokenId t = x[unit];
    if (t >= neighbours_.size()) return out;
    for (TokenId s : neighbours_[t]) out.push_back({s});
    return out;
  }

  const std::vector<TokenId>& neighbours(TokenId t) const { return neighbours_[t]; }

 private:
  std::vector<std::vector<TokenId>> neighbours_;
};

// Explicit disjoint synonym groups (the theory model's S synonyms per token).
class SynonymGroupProposer final : public Proposer {
 public:
  SynonymGroupProposer(std::size_t vocab_size, const std::vector<std::vector<TokenId>>& groups)
      : members_(vocab_size) {
    for (const auto& g : groups)
      for (TokenId t : g) {
        if (t >= vocab_size) throw Error("synonym group member outside vocabulary");
        for (TokenId s : g)
          if (s != t) members_[t].push_back(s);
      }
  }

  std::vector<std::vector<TokenId>> candidates(const TokenSequence& x, std::size_t unit) const override {
    std::vector<std::vector<TokenId>> out;
    const TokenId t = x[unit];
    if (t >= members_.size()) return out;
    for (TokenId s : members_[t]) out.push_back({s});
    return out;
  }

 private:
  std::vector<std::vector<TokenId>> members_;
};

// ---------------------------------------------------------------------------
// Graph moves.

inline AdjacencyGraph apply_transposition(const AdjacencyGraph& g, std::size_t i, std::size_t j) {
  if (i >= g.vertex_count() || j >= g.vertex_count()) throw Error("apply_transposition: vertex out of range");
  if (i == j) throw Error("apply_transposition: i and j must differ");
  AdjacencyGraph out = g;
  out.swap_vertices(i, j);
  return out;
}

// out[perm[i]][perm[j]] = g[i][j]
inline AdjacencyGraph permute_graph(const AdjacencyGraph& g, std::span<const std::uint32_t> perm) {
  const std::size_t n = g.vertex_count();
  if (perm.size() != n) throw Error("permute_graph: permutation size mismatch");
  AdjacencyGraph out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (g.edge(i, j)) out.set_edge(perm[i], perm[j]);
  return out;
}

// Attack state for graphs: the relabelled graph plus the permutation that
// produced it, so isomorphism to the original can be checked exactly.
struct PermutedGraph {
  AdjacencyGraph graph;
  std::vector<std::uint32_t> perm;  // original vertex -> current label

  static PermutedGraph identity(const AdjacencyGraph& g) {
    PermutedGraph s{g, std::vector<std::uint32_t>(g.vertex_count())};
    std::iota(s.perm.begin(), s.perm.end(), 0u);
    return s;
  }

  friend bool operator==(const PermutedGraph&, const PermutedGraph&) = default;
};

// 0 when x2.graph is exactly x.graph relabelled by x2.perm, +inf otherwise.
inline double isomorphism_distance(const PermutedGraph& x, const PermutedGraph& x2) {
  if (x.graph.vertex_count() != x2.graph.vertex_count()) return std::numeric_limits<double>::infinity();
  return permute_graph(x.graph, x2.perm) == x2.graph ? 0.0 : std::numeric_limits<double>::infinity();
}

inline DistanceComponent<PermutedGraph> isomorphism_component() {
  return {"isomorphism", 0.0, [](const PermutedGraph& x) {
            return std::function<double(const PermutedGraph&)>(
                [x](const PermutedGraph& x2) { return isomorphism_distance(x, x2); });
          }};
}

}  // namespace synadv
