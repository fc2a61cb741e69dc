#pragma once
// Classifiers trained from scratch (multinomial Naive Bayes, softmax logistic
// regression) and the interpolated trigram language model.
//
// Both classifiers are linear in a count featurization:
//   score_y(x) = bias_y + <W_y, phi(x)>
// so they share LinearModel for scoring and serialization.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "synadv/core.hpp"

namespace synadv {

using CountVector = std::vector<double>;

struct ClassScores {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t y) const { return values[y]; }

  // Highest score; ties go to the lowest class id.
  std::size_t argmax() const {
    std::size_t best = 0;
    for (std::size_t y = 1; y < values.size(); ++y)
      if (values[y] > values[best]) best = y;
    return best;
  }

  // Softmax-normalised probabilities.
  std::vector<double> probabilities() const {
    std::vector<double> p(values.size());
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::max(m, v);
    double z = 0.0;
    for (std::size_t y = 0; y < values.size(); ++y) {
      p[y] = std::exp(values[y] - m);
      z += p[y];
    }
    for (double& v : p) v /= z;
    return p;
  }
};

// ---------------------------------------------------------------------------
// Featurizers.

enum class FeatureKind { bag_of_words, kmer, graph_upper };

inline std::string to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::bag_of_words: return "bag-of-words";
    case FeatureKind::kmer: return "kmer";
    case FeatureKind::graph_upper: return "graph-upper";
  }
  return "?";
}

inline FeatureKind parse_feature_kind(std::string_view s) {
  if (s == "bag-of-words") return FeatureKind::bag_of_words;
  if (s == "kmer") return FeatureKind::kmer;
  if (s == "graph-upper") return FeatureKind::graph_upper;
  throw ConfigError("unknown featurizer '" + std::string(s) + "'");
}

struct Featurizer {
  FeatureKind kind = FeatureKind::bag_of_words;
  std::size_t param = 0;  // vocabulary size, k, or vertex count

  static Featurizer bag_of_words(std::size_t vocab_size) { return {FeatureKind::bag_of_words, vocab_size}; }
  static Featurizer kmer(std::size_t k) { return {FeatureKind::kmer, k}; }
  static Featurizer graph_upper(std::size_t n) { return {FeatureKind::graph_upper, n}; }

  std::size_t dim() const {
    switch (kind) {
      case FeatureKind::bag_of_words: return param;
      case FeatureKind::kmer: return std::size_t{1} << (2 * param);
      case FeatureKind::graph_upper: return param * (param - 1) / 2;
    }
    return 0;
  }

  // Calls f(feature_index) once per unit of count.
  template <class F>
  void for_each(const TokenSequence& seq, F&& f) const {
    if (kind == FeatureKind::bag_of_words) {
      for (TokenId t : seq) {
        if (t >= param) throw Error("bag-of-words: token id outside feature space");
        f(static_cast<std::size_t>(t));
      }
      return;
    }
    if (kind != FeatureKind::kmer) throw Error("featurizer " + to_string(kind) + " does not take sequences");
    const std::size_t k = param;
    if (k == 0) throw Error("kmer_features: k must be >= 1");
    if (seq.size() < k) throw Error("kmer_features: sequence shorter than k");
    const std::size_t mask = dim() - 1;
    std::size_t code = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (seq[i] > 3) throw Error("kmer_features: non-nucleotide token");
      code = ((code << 2) | seq[i]) & mask;
      if (i + 1 >= k) f(code);
    }
  }

  template <class F>
  void for_each(const AdjacencyGraph& g, F&& f) const {
    if (kind != FeatureKind::graph_upper) throw Error("featurizer " + to_string(kind) + " does not take graphs");
    if (g.vertex_count() != param) throw Error("graph-upper: vertex count mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < param; ++i)
      for (std::size_t j = i + 1; j < param; ++j, ++idx)
        if (g.edge(i, j)) f(idx);
  }

  template <class Input>
  CountVector dense(const Input& x) const {
    CountVector v(dim(), 0.0);
    for_each(x, [&](std::size_t i) { v[i] += 1.0; });
    return v;
  }

  friend bool operator==(const Featurizer&, const Featurizer&) = default;
};

inline CountVector kmer_features(const TokenSequence& seq, std::size_t k) {
  if (k == 0) throw Error("kmer_features: k must be >= 1");
  if (k > 12) throw Error("kmer_features: k too large");
  return Featurizer::kmer(k).dense(seq);
}

inline std::size_t kmer_index(std::string_view kmer) {
  std::size_t code = 0;
  for (char c : kmer) {
    const auto t = encode_dna(std::string_view(&c, 1));
    code = (code << 2) | t[0];
  }
  return code;
}

// ---------------------------------------------------------------------------
// Shared linear scorer.

struct LinearModel {
  Featurizer featurizer;
  std::size_t num_classes = 0;
  std::vector<double> weights;  // num_classes x dim, row-major
  std::vector<double> bias;

  std::size_t dim() const { return featurizer.dim(); }
  double weight(std::size_t y, std::size_t f) const { return weights[y * dim() + f]; }
  double& weight(std::size_t y, std::size_t f) { return weights[y * dim() + f]; }

  // Zero entries are skipped, so -inf weights on absent features are harmless.
  ClassScores score_features(std::span<const double> x) const {
    if (x.size() != dim()) throw Error("score: feature dimension mismatch");
    ClassScores s{bias};
    for (std::size_t y = 0; y < num_classes; ++y) {
      const double* w = weights.data() + y * dim();
      double acc = 0.0;
      for (std::size_t f = 0; f < x.size(); ++f)
        if (x[f] != 0.0) acc += w[f] * x[f];
      s.values[y] += acc;
    }
    return s;
  }

  template <class Input>
  ClassScores score(const Input& x) const {
    ClassScores s{std::vector<double>(num_classes, 0.0)};
    const std::size_t d = dim();
    featurizer.for_each(x, [&](std::size_t f) {
      for (std::size_t y = 0; y < num_classes; ++y) s.values[y] += weights[y * d + f];
    });
    for (std::size_t y = 0; y < num_classes; ++y) s.values[y] += bias[y];
    return s;
  }

  template <class Input>
  std::size_t predict(const Input& x) const {
    return score(x).argmax();
  }

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

// ---------------------------------------------------------------------------
// Multinomial Naive Bayes.

struct NaiveBayesOptions {
  bool binarize = false;
  double alpha = 1.0;
  friend bool operator==(const NaiveBayesOptions&, const NaiveBayesOptions&) = default;
};

struct NaiveBayesModel {
  LinearModel linear;              // weights = w_{ly} (row y), bias = prior_log
  std::vector<double> counts;      // D_{ly}, same layout as weights
  std::vector<double> class_totals;  // D_y
  std::vector<std::size_t> class_docs;
  NaiveBayesOptions options;

  std::size_t num_classes() const { return linear.num_classes; }
  std::size_t dim() const { return linear.dim(); }
  double w(std::size_t l, std::size_t y) const { return linear.weight(y, l); }
  double prior_log(std::size_t y) const { return linear.bias[y]; }
  double count(std::size_t l, std::size_t y) const { return counts[y * dim() + l]; }

  // delta_l = w_{l1} - w_{l0}
  double log_ratio(std::size_t l) const { return w(l, 1) - w(l, 0); }

  template <class Input>
  ClassScores score(const Input& x) const {
    return linear.score(x);
  }
  template <class Input>
  std::size_t predict(const Input& x) const {
    return linear.predict(x);
  }

  friend bool operator==(const NaiveBayesModel&, const NaiveBayesModel&) = default;
};

inline NaiveBayesModel train_naive_bayes(const LabeledDataset& data, const Featurizer& featurizer,
                                         const NaiveBayesOptions& options = {}) {
  if (data.examples.empty()) throw Error("train_naive_bayes: empty dataset");
  if (data.num_classes < 2) throw Error("train_naive_bayes: need at least 2 classes");
  if (!(options.alpha >= 0.0)) throw Error("train_naive_bayes: alpha must be >= 0");
  const std::size_t K = data.num_classes;
  const std::size_t V = featurizer.dim();
  NaiveBayesModel m;
  m.options = options;
  m.linear.featurizer = featurizer;
  m.linear.num_classes = K;
  m.counts.assign(K * V, 0.0);
  m.class_totals.assign(K, 0.0);
  m.class_docs.assign(K, 0);

  std::vector<std::uint8_t> seen;
  if (options.binarize) seen.assign(V, 0);
  for (const auto& e : data.examples) {
    const std::size_t y = e.label;
    if (y >= K) throw Error("train_naive_bayes: label out of range");
    ++m.class_docs[y];
    double* row = m.counts.data() + y * V;
    if (options.binarize) {
      std::vector<std::size_t> touched;
      featurizer.for_each(e.tokens, [&](std::size_t f) {
        if (!seen[f]) {
          seen[f] = 1;
          touched.push_back(f);
        }
      });
      for (std::size_t f : touched) {
        row[f] += 1.0;
        seen[f] = 0;
      }
    } else {
      featurizer.for_each(e.tokens, [&](std::size_t f) { row[f] += 1.0; });
    }
  }

  for (std::size_t y = 0; y < K; ++y) {
    if (m.class_docs[y] == 0) throw Error("train_naive_bayes: class " + std::to_string(y) + " has no documents");
    double total = 0.0;
    for (std::size_t l = 0; l < V; ++l) total += m.counts[y * V + l];
    m.class_totals[y] = total;
  }

  m.linear.weights.assign(K * V, 0.0);
  m.linear.bias.assign(K, 0.0);
  const double n_docs = static_cast<double>(data.examples.size());
  for (std::size_t y = 0; y < K; ++y) {
    const double denom = m.class_totals[y] + options.alpha * static_cast<double>(V);
    if (!(denom > 0.0)) throw Error("train_naive_bayes: class " + std::to_string(y) + " has no tokens");
    for (std::size_t l = 0; l < V; ++l)
      m.linear.weights[y * V + l] = std::log((m.counts[y * V + l] + options.alpha) / denom);
    m.linear.bias[y] = std::log(static_cast<double>(m.class_docs[y]) / n_docs);
  }
  return m;
}

inline NaiveBayesModel train_naive_bayes(const LabeledDataset& data, const NaiveBayesOptions& options = {}) {
  return train_naive_bayes(data, Featurizer::bag_of_words(data.vocabulary.size()), options);
}

// b_y + <w_y, x>, unnormalised.
inline ClassScores nb_log_posterior(const NaiveBayesModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) throw Error("nb_log_posterior: dimension mismatch");
  return model.linear.score_features(x);
}

// ---------------------------------------------------------------------------
// Softmax logistic regression, full-batch gradient descent from zero.

struct LogisticHyper {
  double lr = 0.5;
  std::size_t epochs = 200;
  double l2 = 1e-4;
  friend bool operator==(const LogisticHyper&, const LogisticHyper&) = default;
};

struct LogisticModel {
  LinearModel linear;
  LogisticHyper hyper;
  std::vector<double> loss_history;

  template <class Input>
  ClassScores score(const Input& x) const {
    return linear.score(x);
  }
  template <class Input>
  std::size_t predict(const Input& x) const {
    return linear.predict(x);
  }
};

// Mean cross-entropy plus (l2/2)*||W||^2 (bias unpenalised). Gradients are
// written into grad_w / grad_b when non-null.
inline double logistic_loss(const std::vector<CountVector>& X, const std::vector<std::size_t>& y,
                            std::size_t K, std::span<const double> W, std::span<const double> b,
                            double l2, std::vector<double>* grad_w = nullptr,
                            std::vector<double>* grad_b = nullptr) {
  const std::size_t n = X.size();
  if (n == 0) throw Error("logistic_loss: empty dataset");
  const std::size_t d = X[0].size();
  if (grad_w) grad_w->assign(K * d, 0.0);
  if (grad_b) grad_b->assign(K, 0.0);
  std::vector<double> z(K);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = X[i];
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < K; ++c) {
      double s = b[c];
      const double* w = W.data() + c * d;
      for (std::size_t f = 0; f < d; ++f) s += w[f] * x[f];
      z[c] = s;
      m = std::max(m, s);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < K; ++c) sum += std::exp(z[c] - m);
    const double lse = m + std::log(sum);
    loss += lse - z[y[i]];
    if (grad_w) {
      for (std::size_t c = 0; c < K; ++c) {
        const double g = std::exp(z[c] - lse) - (c == y[i] ? 1.0 : 0.0);
        (*grad_b)[c] += g;
        double* gw = grad_w->data() + c * d;
        for (std::size_t f = 0; f < d; ++f)
          if (x[f] != 0.0) gw[f] += g * x[f];
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double reg = 0.0;
  for (double w : W) reg += w * w;
  loss = loss * inv_n + 0.5 * l2 * reg;
  if (grad_w) {
    for (std::size_t k = 0; k < grad_w->size(); ++k) (*grad_w)[k] = (*grad_w)[k] * inv_n + l2 * W[k];
    for (double& g : *grad_b) g *= inv_n;
  }
  return loss;
}

inline LogisticModel train_logistic(const std::vector<CountVector>& X, const std::vector<std::size_t>& y,
                                    std::size_t K, const Featurizer& featurizer,
                                    const LogisticHyper& hyper = {}) {
  if (X.empty()) throw Error("train_logistic: empty dataset");
  if (X.size() != y.size()) throw Error("train_logistic: label count mismatch");
  if (!(hyper.lr > 0.0) || !(hyper.l2 >= 0.0)) throw Error("train_logistic: invalid hyperparameters");
  const std::size_t d = featurizer.dim();
  for (const auto& x : X)
    if (x.size() != d) throw Error("train_logistic: feature dimension mismatch");
  LogisticModel m;
  m.hyper = hyper;
  m.linear.featurizer = featurizer;
  m.linear.num_classes = K;
  m.linear.weights.assign(K * d, 0.0);
  m.linear.bias.assign(K, 0.0);

  std::vector<double> gw, gb, W2, b2;
  double lr = hyper.lr;
  double loss = logistic_loss(X, y, K, m.linear.weights, m.linear.bias, hyper.l2, &gw, &gb);
  if (!std::isfinite(loss)) throw Error("train_logistic: non-finite loss");
  m.loss_history.push_back(loss);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    bool accepted = false;
    for (int halvings = 0; halvings < 60 && !accepted; ++halvings) {
      W2 = m.linear.weights;
      b2 = m.linear.bias;
      for (std::size_t k = 0; k < W2.size(); ++k) W2[k] -= lr * gw[k];
      for (std::size_t c = 0; c < K; ++c) b2[c] -= lr * gb[c];
      const double next = logistic_loss(X, y, K, W2, b2, hyper.l2);
      if (std::isfinite(next) && next <= loss) {
        m.linear.weights.swap(W2);
        m.linear.bias.swap(b2);
        loss = logistic_loss(X, y, K, m.linear.weights, m.linear.bias, hyper.l2, &gw, &gb);
        accepted = true;
      } else {
        lr *= 0.5;
      }
    }
    if (!std::isfinite(loss)) throw Error("train_logistic: non-finite loss");
    m.loss_history.push_back(loss);
    if (!accepted) break;
  }
  return m;
}

inline LogisticModel train_logistic(const LabeledDataset& data, const Featurizer& featurizer,
                                    const LogisticHyper& hyper = {}) {
  std::vector<CountVector> X;
  std::vector<std::size_t> y;
  X.reserve(data.size());
  for (const auto& e : data.examples) {
    X.push_back(featurizer.dense(e.tokens));
    y.push_back(e.label);
  }
  return train_logistic(X, y, std::max<std::size_t>(data.num_classes, 2), featurizer, hyper);
}

inline LogisticModel train_logistic(std::span<const LabeledGraph> graphs, const LogisticHyper& hyper = {}) {
  if (graphs.empty()) throw Error("train_logistic: empty dataset");
  const auto featurizer = Featurizer::graph_upper(graphs[0].graph.vertex_count());
  std::vector<CountVector> X;
  std::vector<std::size_t> y;
  std::size_t K = 2;
  for (const auto& g : graphs) {
    X.push_back(featurizer.dense(g.graph));
    y.push_back(g.label);
    K = std::max(K, g.label + 1);
  }
  return train_logistic(X, y, K, featurizer, hyper);
}

// ---------------------------------------------------------------------------
// Interpolated trigram language model.
//
// P(w|u,v) = l3*P3(w|u,v) + l2*P2(w|v) + l1*P1(w), each component the maximum
// likelihood estimate, replaced by 1/|V| when its context was never seen.
// Tokens seen fewer than min_count times collapse onto <oov>. Sequences are
// scored with two start symbols and no end symbol.

struct TrigramLM {
  std::array<double, 3> lambda{0.7, 0.2, 0.1};  // (l3, l2, l1)
  std::vector<std::uint32_t> id_map;            // dataset id -> lm id
  std::uint32_t lm_oov = 0;
  std::uint32_t lm_size = 0;  // predictable symbols, including <oov>
  std::vector<double> unigram;
  double total_tokens = 0.0;
  std::unordered_map<std::uint64_t, double> bigram, bigram_ctx, trigram, trigram_ctx;

  std::uint32_t bos() const { return lm_size; }

  std::uint32_t map(TokenId t) const { return t < id_map.size() ? id_map[t] : lm_oov; }

  static std::uint64_t key(std::uint64_t a, std::uint64_t b) { return (a << 21) | b; }
  static std::uint64_t key(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return (a << 42) | (b << 21) | c; }

  static double lookup(const std::unordered_map<std::uint64_t, double>& m, std::uint64_t k) {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  }

  // Conditional over lm ids (u, v may be bos()).
  double conditional(std::uint32_t u, std::uint32_t v, std::uint32_t w) const {
    const double uniform = 1.0 / static_cast<double>(lm_size);
    const double c3 = lookup(trigram_ctx, key(u, v));
    const double p3 = c3 > 0.0 ? lookup(trigram, key(u, v, w)) / c3 : uniform;
    const double c2 = lookup(bigram_ctx, v);
    const double p2 = c2 > 0.0 ? lookup(bigram, key(v, w)) / c2 : uniform;
    const double p1 = total_tokens > 0.0 ? unigram[w] / total_tokens : uniform;
    return lambda[0] * p3 + lambda[1] * p2 + lambda[2] * p1;
  }
};

inline TrigramLM train_trigram_lm(std::span<const TokenSequence> corpus, std::size_t vocab_size,
                                  std::array<double, 3> lambda = {0.7, 0.2, 0.1},
                                  std::size_t min_count = 2) {
  for (double l : lambda)
    if (!(l > 0.0)) throw Error("train_trigram_lm: lambda components must be positive");
  if (std::abs(lambda[0] + lambda[1] + lambda[2] - 1.0) > 1e-12)
    throw Error("train_trigram_lm: lambda must sum to 1");
  if (min_count < 1) throw Error("train_trigram_lm: min_count must be >= 1");
  std::vector<std::size_t> freq(vocab_size, 0);
  std::size_t n_tokens = 0;
  for (const auto& s : corpus)
    for (TokenId t : s) {
      if (t >= vocab_size) throw Error("train_trigram_lm: token id outside vocabulary");
      ++freq[t];
      ++n_tokens;
    }
  if (n_tokens == 0) throw Error("empty corpus");

  TrigramLM lm;
  lm.lambda = lambda;
  lm.id_map.assign(vocab_size, 0);
  std::uint32_t next = 0;
  for (std::size_t t = 0; t < vocab_size; ++t)
    if (freq[t] >= min_count) lm.id_map[t] = next++;
  lm.lm_oov = next;
  lm.lm_size = next + 1;
  if (lm.lm_size >= (1u << 21) - 1) throw Error("train_trigram_lm: vocabulary too large");
  for (std::size_t t = 0; t < vocab_size; ++t)
    if (freq[t] < min_count) lm.id_map[t] = lm.lm_oov;

  lm.unigram.assign(lm.lm_size, 0.0);
  for (const auto& s : corpus) {
    std::uint32_t u = lm.bos(), v = lm.bos();
    for (TokenId t : s) {
      const std::uint32_t w = lm.map(t);
      lm.unigram[w] += 1.0;
      lm.total_tokens += 1.0;
      lm.bigram[TrigramLM::key(v, w)] += 1.0;
      lm.bigram_ctx[v] += 1.0;
      lm.trigram[TrigramLM::key(u, v, w)] += 1.0;
      lm.trigram_ctx[TrigramLM::key(u, v)] += 1.0;
      u = v;
      v = w;
    }
  }
  return lm;
}

inline TrigramLM train_trigram_lm(const LabeledDataset& data, std::array<double, 3> lambda = {0.7, 0.2, 0.1},
                                  std::size_t min_count = 2) {
  std::vector<TokenSequence> corpus;
  corpus.reserve(data.size());
  for (const auto& e : data.examples) corpus.push_back(e.tokens);
  return train_trigram_lm(corpus, data.vocabulary.size(), lambda, min_count);
}

inline double lm_log_prob(const TrigramLM& lm, const TokenSequence& seq) {
  double lp = 0.0;
  std::uint32_t u = lm.bos(), v = lm.bos();
  for (TokenId t : seq) {
    const std::uint32_t w = lm.map(t);
    lp += std::log(lm.conditional(u, v, w));
    u = v;
    v = w;
  }
  return lp;
}

// ---------------------------------------------------------------------------
// Prediction helpers.

template <class Model, class Input>
std::size_t predict(const Model& model, const Input& x) {
  return model.predict(x);
}

template <class Model>
double accuracy(const Model& model, const LabeledDataset& data) {
  if (data.examples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& e : data.examples) correct += model.predict(e.tokens) == e.label ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

template <class Model>
double accuracy(const Model& model, std::span<const LabeledGraph> graphs) {
  if (graphs.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& g : graphs) correct += model.predict(g.graph) == g.label ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(graphs.size());
}

// ---------------------------------------------------------------------------
// JSON persistence. Weights are stored as "%.17g" strings, which round-trip
// doubles exactly (including "-inf").

inline constexpr std::string_view kModelFormat = "synadv-model/1";

namespace detail {

inline std::string exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_exact(const nlohmann::json& j) {
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error("model file: bad number '" + s + "'");
  return v;
}

inline nlohmann::json exact_array(std::span<const double> v) {
  auto a = nlohmann::json::array();
  for (double x : v) a.push_back(exact(x));
  return a;
}

inline std::vector<double> parse_exact_array(const nlohmann::json& j) {
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(parse_exact(e));
  return v;
}

inline nlohmann::json linear_json(const LinearModel& m) {
  return {{"featurizer", {{"kind", to_string(m.featurizer.kind)}, {"param", m.featurizer.param}}},
          {"num_classes", m.num_classes},
          {"weights", exact_array(m.weights)},
          {"bias", exact_array(m.bias)}};
}

inline LinearModel linear_from_json(const nlohmann::json& j) {
  LinearModel m;
  m.featurizer.kind = parse_feature_kind(j.at("featurizer").at("kind").get<std::string>());
  m.featurizer.param = j.at("featurizer").at("param").get<std::size_t>();
  m.num_classes = j.at("num_classes").get<std::size_t>();
  m.weights = parse_exact_array(j.at("weights"));
  m.bias = parse_exact_array(j.at("bias"));
  if (m.weights.size() != m.num_classes * m.dim() || m.bias.size() != m.num_classes)
    throw Error("model file: weight shape mismatch");
  return m;
}

}  // namespace detail

inline nlohmann::json to_json(const NaiveBayesModel& m) {
  return {{"format", kModelFormat},
          {"type", "naive-bayes"},
          {"model", detail::linear_json(m.linear)},
          {"counts", detail::exact_array(m.counts)},
          {"class_totals", detail::exact_array(m.class_totals)},
          {"class_docs", m.class_docs},
          {"binarize", m.options.binarize},
          {"alpha", detail::exact(m.options.alpha)}};
}

inline nlohmann::json to_json(const LogisticModel& m) {
  return {{"format", kModelFormat},
          {"type", "logistic"},
          {"model", detail::linear_json(m.linear)},
          {"lr", detail::exact(m.hyper.lr)},
          {"epochs", m.hyper.epochs},
          {"l2", detail::exact(m.hyper.l2)},
          {"loss_history", detail::exact_array(m.loss_history)}};
}

inline std::string model_type(const nlohmann::json& j) {
  if (!j.contains("format") || j.at("format") != kModelFormat)
    throw Error("model file: unsupported format (expected " + std::string(kModelFormat) + ")");
  return j.at("type").get<std::string>();
}

inline NaiveBayesModel naive_bayes_from_json(const nlohmann::json& j) {
  if (model_type(j) != "naive-bayes") throw Error("model file: not a naive-bayes model");
  NaiveBayesModel m;
  m.linear = detail::linear_from_json(j.at("model"));
  m.counts = detail::parse_exact_array(j.at("counts"));
  m.class_totals = detail::parse_exact_array(j.at("class_totals"));
  m.class_docs = j.at("class_docs").get<std::vector<std::size_t>>();
  m.options.binarize = j.at("binarize").get<bool>();
  m.options.alpha = detail::parse_exact(j.at("alpha"));
  return m;
}

inline LogisticModel logistic_from_json(const nlohmann::json& j) {
  if (model_type(j) != "logistic") throw Error("model file: not a logistic model");
  LogisticModel m;
  m.linear = detail::linear_from_json(j.at("model"));
  m.hyper.lr = detail::parse_exact(j.at("lr"));
  m.hyper.epochs = j.at("epochs").get<std::size_t>();
  m.hyper.l2 = detail::parse_exact(j.at("l2"));
  m.loss_history = detail::parse_exact_array(j.at("loss_history"));
  return m;
}

}  // namespace synadv
