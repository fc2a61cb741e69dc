#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "synadv/synadv.hpp"

namespace testutil {

using namespace synadv;

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("synadv-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline LabeledDataset tsv(const std::string& text) {
  std::istringstream in(text);
  return read_tsv_tokens(in);
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Two-class linear model over a vocabulary of size V with weights drawn
// uniformly from [-scale, scale].
inline LinearModel random_linear(std::size_t V, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  LinearModel m;
  m.featurizer = Featurizer::bag_of_words(V);
  m.num_classes = 2;
  m.weights.resize(2 * V);
  for (auto& w : m.weights) w = scale * (2.0 * rng.uniform() - 1.0);
  m.bias = {scale * (2.0 * rng.uniform() - 1.0), scale * (2.0 * rng.uniform() - 1.0)};
  return m;
}

// Fixed candidate lists per unit, independent of the current content.
class TableProposer final : public Proposer {
 public:
  explicit TableProposer(std::vector<std::vector<TokenId>> table) : table_(std::move(table)) {}
  std::vector<std::vector<TokenId>> candidates(const TokenSequence& x, std::size_t unit) const override {
    std::vector<std::vector<TokenId>> out;
    if (unit >= table_.size()) return out;
    for (TokenId t : table_[unit])
      if (t != x[unit]) out.push_back({t});
    return out;
  }

 private:
  std::vector<std::vector<TokenId>> table_;
};

// Model whose score depends on adjacent token pairs, so greedy choices can
// be myopic.
struct BigramModel {
  std::size_t V = 0;
  LinearModel unigram;
  std::vector<double> pair;  // [y][a*V+b]

  ClassScores score(const TokenSequence& x) const {
    ClassScores s = unigram.score(x);
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      for (std::size_t y = 0; y < 2; ++y) s.values[y] += pair[y * V * V + x[i] * V + x[i + 1]];
    return s;
  }
  std::size_t predict(const TokenSequence& x) const { return score(x).argmax(); }
};

inline BigramModel random_bigram(std::size_t V, std::uint64_t seed, double scale = 1.0) {
  BigramModel m;
  m.V = V;
  m.unigram = random_linear(V, seed, scale);
  Rng rng(seed ^ 0x5555);
  m.pair.resize(2 * V * V);
  for (auto& w : m.pair) w = scale * (2.0 * rng.uniform() - 1.0);
  return m;
}

struct TinyInstance {
  TokenSequence x;
  std::vector<std::vector<TokenId>> table;
};

// Length-L sequence over V tokens; each position gets 1..max_cands
// alternatives.
inline TinyInstance random_tiny(std::size_t L, std::size_t V, std::size_t max_cands, Rng& rng) {
  TinyInstance t;
  t.x.ids.resize(L);
  t.table.resize(L);
  for (std::size_t i = 0; i < L; ++i) {
    t.x.ids[i] = static_cast<TokenId>(rng.below(V));
    const std::size_t c = 1 + rng.below(max_cands);
    std::vector<TokenId> others;
    for (TokenId v = 0; v < V; ++v)
      if (v != t.x[i]) others.push_back(v);
    rng.shuffle(others);
    others.resize(std::min(c, others.size()));
    t.table[i] = others;
  }
  return t;
}

}  // namespace testutil
