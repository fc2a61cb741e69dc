#pragma once
// Seeded generators: the two-class token model used by the theory checks,
// a synthetic coding-sequence task, planted-block graphs and clustered word
// vectors. Every output is a pure function of (params, seed).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "synadv/core.hpp"
#include "synadv/embedding.hpp"
#include "synadv/genetic_code.hpp"
#include "synadv/rng.hpp"

namespace synadv {

// ---------------------------------------------------------------------------
// Two-class token model.
//
// Token ids: uninformative 0..V-1 ("u<i>"), informative V..V+V_inf-1
// ("i<j>"), then <oov>. Each document draws its class uniformly, then exactly
// round(r*L) tokens from the class's informative distribution and the rest
// uniformly from the uninformative vocabulary, in shuffled order.
//
// The informative vocabulary is split in two equal halves; half A has weight
// e^eta under class 0 and 1 under class 1, half B the reverse. Both classes
// normalise by the same constant, so p_{l,y}/p_{l,y'} = e^eta exactly for the
// favoured class.

struct TheoryParams {
  std::size_t D_docs = 200;
  std::size_t L = 50;
  std::size_t V = 2000;
  std::size_t V_inf = 0;
  double p = 1.0 / 2000.0;
  double r = 0.0;
  double eta = 1.0;
  std::size_t S = 0;
  double rho = 0.05;
  double gamma = 0.5;

  std::size_t informative_per_doc() const {
    return static_cast<std::size_t>(std::llround(r * static_cast<double>(L)));
  }

  // Occurrence probability of every uninformative token in either class.
  double uninformative_probability() const {
    return static_cast<double>(L - informative_per_doc()) / static_cast<double>(L) /
           static_cast<double>(V);
  }

  std::size_t total_tokens() const { return D_docs * L; }

  void validate() const {
    if (D_docs == 0 || L == 0) throw ConfigError("theory params: D_docs and L must be positive");
    if (V == 0) throw ConfigError("theory params: V must be positive");
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("theory params: p must lie in (0,1)");
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("theory params: r must lie in [0,1)");
    if (!(eta >= 0.0)) throw ConfigError("theory params: eta must be >= 0");
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("theory params: rho must lie in (0,1)");
    if (!(gamma >= 0.0)) throw ConfigError("theory params: gamma must be >= 0");
    const std::size_t n_inf = informative_per_doc();
    if (n_inf > 0 && V_inf == 0)
      throw ConfigError("informative budget: round(r*L) > 0 informative tokens but V_inf = 0");
    if (V_inf % 2 != 0)
      throw ConfigError("informative budget: V_inf must be even to split mass at ratio e^eta");
    if (n_inf == L) throw ConfigError("uninformative budget: round(r*L) leaves no uninformative tokens");
    const double pu = uninformative_probability();
    if (pu > p * (1.0 + 1e-12))
      throw ConfigError("uninformative mass budget: (1-r)/V = " + std::to_string(pu) +
                        " exceeds p = " + std::to_string(p));
  }

  friend bool operator==(const TheoryParams&, const TheoryParams&) = default;
};

inline void to_json(nlohmann::json& j, const TheoryParams& t) {
  j = {{"D_docs", t.D_docs}, {"L", t.L},   {"V", t.V},     {"V_inf", t.V_inf}, {"p", t.p},
       {"r", t.r},           {"eta", t.eta}, {"S", t.S}, {"rho", t.rho},     {"gamma", t.gamma}};
}

struct TheoryDataset {
  LabeledDataset data;
  TheoryParams params;
  std::vector<std::uint8_t> informative;                 // per token id
  std::vector<std::vector<TokenId>> synonym_groups;      // disjoint, uninformative only
  std::vector<std::array<double, 2>> class_probability;  // p_{l,y}; oov row is zero

  // Members of the token's group other than itself; empty when ungrouped.
  std::vector<TokenId> synonyms_of(TokenId t) const {
    std::vector<TokenId> out;
    if (t >= group_index_.size() || group_index_[t] < 0) return out;
    for (TokenId s : synonym_groups[static_cast<std::size_t>(group_index_[t])])
      if (s != t) out.push_back(s);
    return out;
  }

  void index_groups() {
    group_index_.assign(data.vocabulary.size(), -1);
    for (std::size_t g = 0; g < synonym_groups.size(); ++g)
      for (TokenId t : synonym_groups[g]) group_index_[t] = static_cast<long>(g);
  }

 private:
  std::vector<long> group_index_;
};

inline Vocabulary theory_vocabulary(std::size_t V, std::size_t V_inf) {
  std::vector<std::string> tokens;
  tokens.reserve(V + V_inf);
  for (std::size_t i = 0; i < V; ++i) tokens.push_back("u" + std::to_string(i));
  for (std::size_t i = 0; i < V_inf; ++i) tokens.push_back("i" + std::to_string(i));
  return Vocabulary(std::move(tokens));
}

inline TheoryDataset gen_theory_dataset(const TheoryParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  TheoryDataset out;
  out.params = params;
  const std::size_t V = params.V;
  const std::size_t V_inf = params.V_inf;
  out.data.vocabulary = theory_vocabulary(V, V_inf);
  out.data.num_classes = 2;
  const std::size_t vocab_size = out.data.vocabulary.size();

  out.informative.assign(vocab_size, 0);
  out.class_probability.assign(vocab_size, {0.0, 0.0});
  const double pu = params.uninformative_probability();
  for (std::size_t l = 0; l < V; ++l) out.class_probability[l] = {pu, pu};

  const std::size_t n_inf = params.informative_per_doc();
  const std::size_t n_un = params.L - n_inf;
  const double inf_mass = static_cast<double>(n_inf) / static_cast<double>(params.L);
  std::array<DiscreteSampler, 2> informative_sampler;
  if (V_inf > 0) {
    const std::size_t half = V_inf / 2;
    const double strong = std::exp(params.eta);
    const double z = static_cast<double>(half) * (strong + 1.0);
    std::array<std::vector<double>, 2> w{std::vector<double>(V_inf), std::vector<double>(V_inf)};
    for (std::size_t j = 0; j < V_inf; ++j) {
      const bool favours_zero = j < half;
      w[0][j] = (favours_zero ? strong : 1.0) / z;
      w[1][j] = (favours_zero ? 1.0 : strong) / z;
      out.informative[V + j] = 1;
      out.class_probability[V + j] = {inf_mass * w[0][j], inf_mass * w[1][j]};
    }
    informative_sampler = {DiscreteSampler(w[0]), DiscreteSampler(w[1])};
  }

  out.data.examples.reserve(params.D_docs);
  for (std::size_t d = 0; d < params.D_docs; ++d) {
    const std::size_t y = rng.below(2);
    TokenSequence doc;
    doc.ids.reserve(params.L);
    for (std::size_t k = 0; k < n_inf; ++k)
      doc.ids.push_back(static_cast<TokenId>(V + informative_sampler[y](rng)));
    for (std::size_t k = 0; k < n_un; ++k) doc.ids.push_back(static_cast<TokenId>(rng.below(V)));
    rng.shuffle(doc.ids);
    out.data.examples.push_back(Example{std::move(doc), y, "doc" + std::to_string(d)});
  }

  if (params.S > 0) {
    std::vector<TokenId> pool(V);
    for (std::size_t l = 0; l < V; ++l) pool[l] = static_cast<TokenId>(l);
    rng.shuffle(pool);
    const std::size_t g = params.S + 1;
    for (std::size_t start = 0; start + g <= V; start += g) {
      std::vector<TokenId> group(pool.begin() + static_cast<std::ptrdiff_t>(start),
                                 pool.begin() + static_cast<std::ptrdiff_t>(start + g));
      std::sort(group.begin(), group.end());
      out.synonym_groups.push_back(std::move(group));
    }
  }
  out.index_groups();
  return out;
}

inline nlohmann::json theory_metadata(const TheoryDataset& ds, std::uint64_t seed) {
  std::vector<TokenId> informative_ids;
  for (std::size_t l = 0; l < ds.informative.size(); ++l)
    if (ds.informative[l]) informative_ids.push_back(static_cast<TokenId>(l));
  return {{"generator", "theory"},
          {"rng", std::string(kRngName)},
          {"seed", seed},
          {"params", ds.params},
          {"informative_ids", informative_ids},
          {"synonym_groups", ds.synonym_groups}};
}

// ---------------------------------------------------------------------------
// Synthetic coding sequences.

// Sense codons by usage rank; rank k (0-based) has weight 1/(k+1)^s.
inline constexpr std::array<std::string_view, 61> kCodonUsageRanking = {
    "CCG", "CTA", "ACC", "AAG", "GCG", "GGG", "ATC", "ATG", "CCT", "ATA", "CAT", "CGG",
    "GCC", "TTA", "CAA", "TTT", "TCG", "GGA", "GTA", "GAT", "TTG", "TTC", "CTC", "TCT",
    "CGC", "CCA", "CCC", "AAC", "AGC", "TGT", "GTT", "GAA", "GGC", "AAA", "ATT", "GAC",
    "GGT", "AAT", "AGA", "ACG", "TGC", "TCA", "TAT", "ACT", "AGG", "CAG", "GCA", "GTG",
    "AGT", "CTG", "TAC", "TGG", "GAG", "GCT", "TCC", "GTC", "CAC", "CGA", "ACA", "CGT",
    "CTT"};

inline constexpr double kCodonUsageZipfExponent = 1.0;

// Probability per codon index (stop codons get zero).
inline std::array<double, 64> zipf_codon_usage(double exponent = kCodonUsageZipfExponent) {
  std::array<double, 64> usage{};
  double total = 0.0;
  for (std::size_t k = 0; k < kCodonUsageRanking.size(); ++k) {
    const double w = 1.0 / std::pow(static_cast<double>(k + 1), exponent);
    usage[codon_index(kCodonUsageRanking[k])] = w;
    total += w;
  }
  for (double& u : usage) u /= total;
  return usage;
}

struct GeneParams {
  std::size_t n_pos = 5000;
  std::size_t n_neg = 5000;
  std::size_t len_codons = 100;
  double corruption_rate = 0.5;
  std::array<double, 64> codon_usage = zipf_codon_usage();

  std::size_t corrupted_nucleotides() const {
    return static_cast<std::size_t>(
        std::llround(corruption_rate * 3.0 * static_cast<double>(len_codons)));
  }

  void validate() const {
    if (len_codons == 0) throw ConfigError("gene params: len_codons must be positive");
    if (!(corruption_rate >= 0.0 && corruption_rate <= 1.0))
      throw ConfigError("gene params: corruption_rate must lie in [0,1]");
    double total = 0.0;
    for (std::size_t c = 0; c < 64; ++c) {
      if (codon_usage[c] < 0.0) throw ConfigError("gene params: negative codon usage");
      if (codon_usage[c] > 0.0 && is_stop_codon(static_cast<CodonIndex>(c)))
        throw ConfigError("gene params: stop codons must have zero usage");
      total += codon_usage[c];
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("gene params: codon usage must sum to 1");
  }
};

struct GeneDataset {
  LabeledDataset data;
  // For each negative (in example order), the nucleotide positions re-drawn.
  std::vector<std::vector<std::size_t>> corrupted_positions;
};

inline GeneDataset gen_gene_dataset(const GeneParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const DiscreteSampler codons(params.codon_usage);
  auto draw_positive = [&] {
    TokenSequence s;
    s.ids.reserve(3 * params.len_codons);
    for (std::size_t i = 0; i < params.len_codons; ++i) {
      const auto t = codon_tokens(static_cast<CodonIndex>(codons(rng)));
      s.ids.insert(s.ids.end(), t.begin(), t.end());
    }
    return s;
  };

  GeneDataset out;
  out.data.vocabulary = Vocabulary::dna();
  out.data.num_classes = 2;
  for (std::size_t i = 0; i < params.n_pos; ++i)
    out.data.examples.push_back(Example{draw_positive(), 1, "pos" + std::to_string(i)});
  const std::size_t n_corrupt = params.corrupted_nucleotides();
  for (std::size_t i = 0; i < params.n_neg; ++i) {
    TokenSequence s = draw_positive();
    auto positions = rng.sample_indices(s.size(), n_corrupt);
    for (std::size_t pos : positions) {
      const auto shift = static_cast<TokenId>(1 + rng.below(3));
      s[pos] = (s[pos] + shift) % 4;
    }
    std::sort(positions.begin(), positions.end());
    out.corrupted_positions.push_back(std::move(positions));
    out.data.examples.push_back(Example{std::move(s), 0, "neg" + std::to_string(i)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Planted-block graphs.
//
// Class 0: Erdos-Renyi G(n, p_edge0). Class 1: G(n, p_edge1) with the edges
// among the first `block_size` vertex labels re-drawn at probability p_block.

struct GraphParams {
  std::size_t n_graphs = 400;  // per class
  std::size_t n_vertices = 20;
  double p_edge0 = 0.3;
  double p_edge1 = 0.3;
  std::size_t block_size = 8;
  double p_block = 0.7;

  void validate() const {
    auto prob = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!prob(p_edge0) || !prob(p_edge1) || !prob(p_block))
      throw ConfigError("graph params: probabilities must lie in [0,1]");
    if (block_size > n_vertices) throw ConfigError("graph params: block does not fit n_vertices");
    if (n_vertices < 2) throw ConfigError("graph params: need at least 2 vertices");
  }
};

inline std::vector<LabeledGraph> gen_graph_dataset(const GraphParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  std::vector<LabeledGraph> out;
  out.reserve(2 * params.n_graphs);
  const std::size_t n = params.n_vertices;
  for (std::size_t y = 0; y < 2; ++y)
    for (std::size_t g = 0; g < params.n_graphs; ++g) {
      AdjacencyGraph graph(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          double prob = y == 0 ? params.p_edge0 : params.p_edge1;
          if (y == 1 && j < params.block_size) prob = params.p_block;
          if (rng.bernoulli(prob)) graph.set_edge(i, j);
        }
      out.push_back({std::move(graph), y});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Clustered embeddings.
//
// Each synonym group shares a center drawn from N(0, I); ungrouped tokens get
// their own center. Members sit within `radius` of the center. The result is
// checked: every within-group distance must be below the smallest
// between-group distance, otherwise the draw is repeated.

inline EmbeddingTable gen_synthetic_embeddings(const Vocabulary& vocab, std::size_t dim,
                                               const std::vector<std::vector<TokenId>>& groups,
                                               std::uint64_t seed, double radius = 0.05) {
  if (dim < 2) throw ConfigError("synthetic embeddings: dim must be >= 2");
  const std::size_t n = vocab.size();
  std::vector<long> group_of(n, -1);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (TokenId t : groups[g]) {
      if (t >= n || t == vocab.oov_id()) throw Error("synthetic embeddings: bad group member");
      group_of[t] = static_cast<long>(g);
    }
  std::vector<std::vector<TokenId>> clusters = groups;
  for (TokenId t = 0; t < n; ++t)
    if (group_of[t] < 0 && t != vocab.oov_id()) {
      group_of[t] = static_cast<long>(clusters.size());
      clusters.push_back({t});
    }

  Rng rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    EmbeddingTable table(n, dim);
    std::vector<double> center(dim), v(dim);
    for (const auto& cluster : clusters) {
      for (auto& c : center) c = rng.normal();
      for (TokenId t : cluster) {
        double norm = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          v[k] = rng.normal();
          norm += v[k] * v[k];
        }
        const double scale = radius * rng.uniform() / std::sqrt(norm);
        for (std::size_t k = 0; k < dim; ++k) v[k] = center[k] + scale * v[k];
        table.set(t, v);
      }
    }
    double max_within = 0.0;
    double min_between = std::numeric_limits<double>::infinity();
    for (TokenId a = 0; a < n; ++a) {
      if (!table.has(a)) continue;
      for (TokenId b = a + 1; b < n; ++b) {
        if (!table.has(b)) continue;
        const double d = table.distance(a, b);
        if (group_of[a] == group_of[b])
          max_within = std::max(max_within, d);
        else
          min_between = std::min(min_between, d);
      }
    }
    if (max_within < min_between) return table;
  }
  throw Error("synthetic embeddings: could not separate groups; increase dim or reduce radius");
}

}  // namespace synadv
