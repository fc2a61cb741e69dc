#pragma once
// Config-driven pipelines: generate or load data, split, train, evaluate
// clean / random / adversarial accuracy, transfer matrices, report files.
//
// Config is a JSON object; unknown keys are rejected. Output files:
//   table.csv        model,cln,rnd,adv,mean_fraction_replaced,
//                    median_fraction_replaced,attack_success_rate,n_test
//   transfer.csv     generated_by,CLN,<model>...   (two or more models)
//   results.jsonl    one line per attacked example per model
//   config-echo.json fully resolved config
//   summary.txt      plain-text rendering of the above

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "synadv/attack.hpp"
#include "synadv/constraints.hpp"
#include "synadv/core.hpp"
#include "synadv/embedding.hpp"
#include "synadv/models.hpp"
#include "synadv/parallel.hpp"
#include "synadv/synthgen.hpp"
#include "synadv/theory.hpp"

namespace synadv {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Strict JSON reading.

class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, const T& def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  // Numbers, or the strings "inf" / "-inf".
  double get_real(const std::string& key, double def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    const auto& v = j_.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    if (v.is_string() && v.get<std::string>() == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError(path_ + "." + key + ": expected a number or \"inf\"");
  }

  const json* sub(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string path(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw ConfigError(path_ + ": unknown key '" + k + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

inline json real_json(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  return x;
}

// ---------------------------------------------------------------------------
// Config types.

enum class Task { gene, text, graph, theory };

// Gene-task corruption rate used by experiment configs unless overridden.
inline constexpr double kExperimentGeneCorruption = 0.2;

inline std::string to_string(Task t) {
  switch (t) {
    case Task::gene: return "gene";
    case Task::text: return "text";
    case Task::graph: return "graph";
    case Task::theory: return "theory";
  }
  return "?";
}

inline Task parse_task(std::string_view s) {
  if (s == "gene") return Task::gene;
  if (s == "text") return Task::text;
  if (s == "graph") return Task::graph;
  if (s == "theory") return Task::theory;
  throw ConfigError("unknown task '" + std::string(s) + "' (gene | text | graph | theory)");
}

struct SplitSpec {
  double train = 0.8, val = 0.1, test = 0.1;
  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

struct DataSpec {
  std::string path;    // empty = generate
  std::string format;  // tsv-tokens | fasta-dna | graph-tsv
  GeneParams gene;
  GraphParams graph;
  TheoryParams theory;  // text and theory tasks
};

struct ModelSpec {
  std::string name;
  std::string type = "naive-bayes";  // naive-bayes | logistic
  NaiveBayesOptions nb;
  LogisticHyper logistic;
  std::string featurizer;  // default by task
  std::size_t k = 4;
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct ConstraintSpec {
  std::string proposer;  // codon | embedding | synonym-groups; default by task
  std::size_t N = 0;     // 0 = task default
  double gamma = 0.0;    // codon-synonymy bound
  double gamma1 = std::numeric_limits<double>::infinity();
  double gamma2 = std::numeric_limits<double>::infinity();
  std::string embeddings;  // file; empty = synthetic from synonym groups
  std::size_t embedding_dim = 16;
  std::string pos_lexicon;
  std::array<double, 3> lm_lambda{0.7, 0.2, 0.1};
  std::size_t lm_min_count = 2;
  friend bool operator==(const ConstraintSpec&, const ConstraintSpec&) = default;
};

struct AttackSpec {
  std::string method = "beam";  // beam | greedy_p | random | concat
  AttackConfig config;
  std::string objective = "untargeted";
  std::size_t target = 1;
  std::size_t max_examples = 0;  // 0 = whole test split
  std::size_t concat_T = 0;      // 0 = insertion budget from theory params
};

struct TheorySpec {
  std::vector<std::string> verifiers{"spurious"};
  std::size_t trials = 50;
  std::vector<std::size_t> T{5};
  std::size_t test_docs = 200;
  std::size_t lemma_N = 5000, lemma_M = 5000;
  double lemma_p = 0.01, lemma_q = 0.01;
  std::size_t lemma2_n = 1000;
  double lemma2_sigma = 1.0;
  TokenCountMode mode = TokenCountMode::per_class;
};

struct ExperimentConfig {
  Task task = Task::gene;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::size_t threads = 1;
  bool timing = false;
  SplitSpec split;
  DataSpec data;
  std::vector<ModelSpec> models;
  ConstraintSpec constraints;
  AttackSpec attack;
  TheorySpec theory;
};

// ---------------------------------------------------------------------------
// Parsing.

namespace detail {

inline TheoryParams parse_theory_params(const json& j, const std::string& path) {
  StrictObject o(j, path);
  TheoryParams t;
  t.D_docs = o.get<std::size_t>("D_docs", t.D_docs);
  t.L = o.get<std::size_t>("L", t.L);
  t.V = o.get<std::size_t>("V", t.V);
  t.V_inf = o.get<std::size_t>("V_inf", t.V_inf);
  t.p = o.get_real("p", 1.0 / static_cast<double>(t.V));
  t.r = o.get_real("r", t.r);
  t.eta = o.get_real("eta", t.eta);
  t.S = o.get<std::size_t>("S", t.S);
  t.rho = o.get_real("rho", t.rho);
  t.gamma = o.get_real("gamma", t.gamma);
  o.finish();
  t.validate();
  return t;
}

inline GeneParams parse_gene_params(const json& j, const std::string& path, GeneParams g) {
  StrictObject o(j, path);
  g.n_pos = o.get<std::size_t>("n_pos", g.n_pos);
  g.n_neg = o.get<std::size_t>("n_neg", g.n_neg);
  g.len_codons = o.get<std::size_t>("len_codons", g.len_codons);
  g.corruption_rate = o.get_real("corruption_rate", g.corruption_rate);
  const double zipf = o.get_real("zipf_exponent", kCodonUsageZipfExponent);
  g.codon_usage = zipf_codon_usage(zipf);
  o.finish();
  g.validate();
  return g;
}

inline double gene_zipf_exponent(const GeneParams& g) {
  // Recover the exponent from the rank-1 / rank-2 ratio.
  const double a = g.codon_usage[codon_index(kCodonUsageRanking[0])];
  const double b = g.codon_usage[codon_index(kCodonUsageRanking[1])];
  return std::log(a / b) / std::log(2.0);
}

inline GraphParams parse_graph_params(const json& j, const std::string& path) {
  StrictObject o(j, path);
  GraphParams g;
  g.n_graphs = o.get<std::size_t>("n_graphs", g.n_graphs);
  g.n_vertices = o.get<std::size_t>("n_vertices", g.n_vertices);
  g.p_edge0 = o.get_real("p_edge0", g.p_edge0);
  g.p_edge1 = o.get_real("p_edge1", g.p_edge1);
  g.block_size = o.get<std::size_t>("block_size", g.block_size);
  g.p_block = o.get_real("p_block", g.p_block);
  o.finish();
  g.validate();
  return g;
}

inline std::string default_featurizer(Task t) {
  switch (t) {
    case Task::gene: return "kmer";
    case Task::graph: return "graph-upper";
    default: return "bag-of-words";
  }
}

inline std::string default_proposer(Task t) {
  switch (t) {
    case Task::gene: return "codon";
    case Task::text: return "embedding";
    default: return "";
  }
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const json& j) {
  StrictObject root(j, "config");
  ExperimentConfig c;
  c.task = parse_task(root.get<std::string>("task", "gene"));
  c.seed = root.get<std::uint64_t>("seed", c.seed);
  c.output_dir = root.get<std::string>("output_dir", c.output_dir);
  c.threads = root.get<std::size_t>("threads", c.threads);
  c.timing = root.get<bool>("timing", c.timing);

  if (const json* s = root.sub("split")) {
    StrictObject o(*s, "config.split");
    c.split.train = o.get_real("train", c.split.train);
    c.split.val = o.get_real("val", c.split.val);
    c.split.test = o.get_real("test", c.split.test);
    o.finish();
  }
  if (c.split.train <= 0.0 || c.split.val < 0.0 || c.split.test <= 0.0 ||
      std::abs(c.split.train + c.split.val + c.split.test - 1.0) > 1e-9)
    throw ConfigError("config.split: ratios must be positive (val may be 0) and sum to 1");

  c.data.gene.corruption_rate = kExperimentGeneCorruption;
  if (const json* d = root.sub("data")) {
    StrictObject o(*d, "config.data");
    c.data.path = o.get<std::string>("path", "");
    c.data.format = o.get<std::string>("format", "");
    if (const json* g = o.sub("gene")) c.data.gene = detail::parse_gene_params(*g, "config.data.gene", c.data.gene);
    if (const json* g = o.sub("graph")) c.data.graph = detail::parse_graph_params(*g, "config.data.graph");
    if (const json* g = o.sub("theory")) c.data.theory = detail::parse_theory_params(*g, "config.data.theory");
    o.finish();
  }
  if (c.data.format.empty() && !c.data.path.empty())
    c.data.format = c.task == Task::gene ? "fasta-dna" : c.task == Task::graph ? "graph-tsv" : "tsv-tokens";
  if (!c.data.path.empty() && !std::filesystem::exists(c.data.path))
    throw ConfigError("config.data.path: file not found: " + c.data.path);

  if (const json* ms = root.sub("models")) {
    if (!ms->is_array() || ms->empty()) throw ConfigError("config.models: expected a non-empty array");
    for (std::size_t i = 0; i < ms->size(); ++i) {
      const std::string path = "config.models[" + std::to_string(i) + "]";
      StrictObject o((*ms)[i], path);
      ModelSpec m;
      m.type = o.get<std::string>("type", m.type);
      if (m.type != "naive-bayes" && m.type != "logistic")
        throw ConfigError(path + ".type: expected naive-bayes or logistic");
      m.name = o.get<std::string>("name", m.type == "naive-bayes" ? "nb" : "logistic");
      m.nb.alpha = o.get_real("alpha", m.nb.alpha);
      m.nb.binarize = o.get<bool>("binarize", m.nb.binarize);
      m.logistic.lr = o.get_real("lr", m.logistic.lr);
      m.logistic.epochs = o.get<std::size_t>("epochs", m.logistic.epochs);
      m.logistic.l2 = o.get_real("l2", m.logistic.l2);
      m.featurizer = o.get<std::string>("featurizer", detail::default_featurizer(c.task));
      parse_feature_kind(m.featurizer);
      m.k = o.get<std::size_t>("k", m.k);
      o.finish();
      if (m.nb.alpha < 0.0) throw ConfigError(path + ".alpha: must be >= 0");
      if (!(m.logistic.lr > 0.0) || m.logistic.l2 < 0.0) throw ConfigError(path + ": invalid logistic hyperparameters");
      if (c.task == Task::graph && m.type != "logistic")
        throw ConfigError(path + ": graph task supports logistic models only");
      c.models.push_back(m);
    }
  } else if (c.task == Task::gene) {
    ModelSpec nb;
    nb.name = "nb";
    nb.featurizer = "kmer";
    ModelSpec lr;
    lr.name = "logistic";
    lr.type = "logistic";
    lr.featurizer = "kmer";
    lr.k = 5;
    c.models = {nb, lr};
  } else if (c.task != Task::theory) {
    ModelSpec m;
    m.name = c.task == Task::graph ? "logistic" : "nb";
    m.type = c.task == Task::graph ? "logistic" : "naive-bayes";
    m.featurizer = detail::default_featurizer(c.task);
    c.models.push_back(m);
  }
  {
    std::set<std::string> names;
    for (const auto& m : c.models)
      if (!names.insert(m.name).second) throw ConfigError("config.models: duplicate model name '" + m.name + "'");
  }

  c.constraints.proposer = detail::default_proposer(c.task);
  if (const json* k = root.sub("constraints")) {
    StrictObject o(*k, "config.constraints");
    c.constraints.proposer = o.get<std::string>("proposer", c.constraints.proposer);
    c.constraints.N = o.get<std::size_t>("N", c.constraints.N);
    c.constraints.gamma = o.get_real("gamma", c.constraints.gamma);
    c.constraints.gamma1 = o.get_real("gamma1", c.constraints.gamma1);
    c.constraints.gamma2 = o.get_real("gamma2", c.constraints.gamma2);
    c.constraints.embeddings = o.get<std::string>("embeddings", "");
    c.constraints.embedding_dim = o.get<std::size_t>("embedding_dim", c.constraints.embedding_dim);
    c.constraints.pos_lexicon = o.get<std::string>("pos_lexicon", "");
    const auto lam = o.get<std::vector<double>>("lm_lambda", {0.7, 0.2, 0.1});
    if (lam.size() != 3) throw ConfigError("config.constraints.lm_lambda: expected 3 values");
    c.constraints.lm_lambda = {lam[0], lam[1], lam[2]};
    c.constraints.lm_min_count = o.get<std::size_t>("lm_min_count", c.constraints.lm_min_count);
    o.finish();
  }
  if (c.constraints.N == 0) c.constraints.N = c.task == Task::gene ? 6 : 20;
  if (!(c.constraints.gamma >= 0.0 && c.constraints.gamma1 >= 0.0 && c.constraints.gamma2 >= 0.0))
    throw ConfigError("config.constraints: bounds must be >= 0");
  for (const auto* f : {&c.constraints.embeddings, &c.constraints.pos_lexicon})
    if (!f->empty() && !std::filesystem::exists(*f)) throw ConfigError("config.constraints: file not found: " + *f);
  if (c.task == Task::gene && c.constraints.proposer != "codon")
    throw ConfigError("config.constraints.proposer: gene task uses the codon proposer");
  if (c.task == Task::text && c.constraints.proposer != "embedding" && c.constraints.proposer != "synonym-groups")
    throw ConfigError("config.constraints.proposer: text task uses embedding or synonym-groups");

  if (const json* a = root.sub("attack")) {
    StrictObject o(*a, "config.attack");
    c.attack.method = o.get<std::string>("method", c.attack.method);
    c.attack.config.tau = o.get_real("tau", c.attack.config.tau);
    c.attack.config.beam = o.get<std::size_t>("beam", c.attack.config.beam);
    c.attack.config.delta_max = o.get_real("delta", c.attack.config.delta_max);
    c.attack.config.max_rounds = o.get<std::size_t>("max_rounds", c.attack.config.max_rounds);
    c.attack.objective = o.get<std::string>("objective", c.attack.objective);
    c.attack.target = o.get<std::size_t>("target", c.attack.target);
    c.attack.max_examples = o.get<std::size_t>("max_examples", c.attack.max_examples);
    c.attack.concat_T = o.get<std::size_t>("concat_T", c.attack.concat_T);
    o.finish();
  }
  c.attack.config.seed = c.seed;
  c.attack.config.validate();
  const auto& meth = c.attack.method;
  if (meth != "beam" && meth != "greedy_p" && meth != "random" && meth != "concat")
    throw ConfigError("config.attack.method: expected beam | greedy_p | random | concat");
  if (c.attack.objective != "untargeted" && c.attack.objective != "targeted")
    throw ConfigError("config.attack.objective: expected untargeted or targeted");
  if (c.task == Task::graph && meth != "beam" && meth != "random")
    throw ConfigError("config.attack.method: graph task supports beam and random");
  if (meth == "concat" && c.task != Task::text)
    throw ConfigError("config.attack.method: concat requires bag-of-words text features");

  if (const json* t = root.sub("theory")) {
    StrictObject o(*t, "config.theory");
    c.theory.verifiers = o.get<std::vector<std::string>>("verifiers", c.theory.verifiers);
    c.theory.trials = o.get<std::size_t>("trials", c.theory.trials);
    c.theory.T = o.get<std::vector<std::size_t>>("T", c.theory.T);
    c.theory.test_docs = o.get<std::size_t>("test_docs", c.theory.test_docs);
    c.theory.lemma_N = o.get<std::size_t>("lemma_N", c.theory.lemma_N);
    c.theory.lemma_M = o.get<std::size_t>("lemma_M", c.theory.lemma_M);
    c.theory.lemma_p = o.get_real("lemma_p", c.theory.lemma_p);
    c.theory.lemma_q = o.get_real("lemma_q", c.theory.lemma_q);
    c.theory.lemma2_n = o.get<std::size_t>("lemma2_n", c.theory.lemma2_n);
    c.theory.lemma2_sigma = o.get_real("lemma2_sigma", c.theory.lemma2_sigma);
    c.theory.mode = parse_token_count_mode(o.get<std::string>("token_count_mode", "per-class"));
    o.finish();
    static const std::set<std::string> known{"spurious", "lemma1", "lemma2", "synonym-attack", "concatenative",
                                             "assumption1", "closed-form"};
    for (const auto& v : c.theory.verifiers)
      if (!known.count(v)) throw ConfigError("config.theory.verifiers: unknown verifier '" + v + "'");
  }
  root.finish();
  return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_experiment_config(j);
}

inline json to_json(const ExperimentConfig& c) {
  json models = json::array();
  for (const auto& m : c.models)
    models.push_back({{"name", m.name},
                      {"type", m.type},
                      {"alpha", m.nb.alpha},
                      {"binarize", m.nb.binarize},
                      {"lr", m.logistic.lr},
                      {"epochs", m.logistic.epochs},
                      {"l2", m.logistic.l2},
                      {"featurizer", m.featurizer},
                      {"k", m.k}});
  const auto& g = c.data.gene;
  const auto& gr = c.data.graph;
  const auto& t = c.data.theory;
  json data = {{"gene",
                {{"n_pos", g.n_pos},
                 {"n_neg", g.n_neg},
                 {"len_codons", g.len_codons},
                 {"corruption_rate", g.corruption_rate},
                 {"zipf_exponent", detail::gene_zipf_exponent(g)}}},
               {"graph",
                {{"n_graphs", gr.n_graphs},
                 {"n_vertices", gr.n_vertices},
                 {"p_edge0", gr.p_edge0},
                 {"p_edge1", gr.p_edge1},
                 {"block_size", gr.block_size},
                 {"p_block", gr.p_block}}},
               {"theory", t}};
  if (!c.data.path.empty()) {
    data["path"] = c.data.path;
    data["format"] = c.data.format;
  }
  const auto& k = c.constraints;
  const auto& a = c.attack;
  const auto& th = c.theory;
  return {{"task", to_string(c.task)},
          {"seed", c.seed},
          {"output_dir", c.output_dir},
          {"threads", c.threads},
          {"timing", c.timing},
          {"split", {{"train", c.split.train}, {"val", c.split.val}, {"test", c.split.test}}},
          {"data", data},
          {"models", models},
          {"constraints",
           {{"proposer", k.proposer},
            {"N", k.N},
            {"gamma", real_json(k.gamma)},
            {"gamma1", real_json(k.gamma1)},
            {"gamma2", real_json(k.gamma2)},
            {"embeddings", k.embeddings},
            {"embedding_dim", k.embedding_dim},
            {"pos_lexicon", k.pos_lexicon},
            {"lm_lambda", k.lm_lambda},
            {"lm_min_count", k.lm_min_count}}},
          {"attack",
           {{"method", a.method},
            {"tau", a.config.tau},
            {"beam", a.config.beam},
            {"delta", a.config.delta_max},
            {"max_rounds", a.config.max_rounds},
            {"objective", a.objective},
            {"target", a.target},
            {"max_examples", a.max_examples},
            {"concat_T", a.concat_T}}},
          {"theory",
           {{"verifiers", th.verifiers},
            {"trials", th.trials},
            {"T", th.T},
            {"test_docs", th.test_docs},
            {"lemma_N", th.lemma_N},
            {"lemma_M", th.lemma_M},
            {"lemma_p", th.lemma_p},
            {"lemma_q", th.lemma_q},
            {"lemma2_n", th.lemma2_n},
            {"lemma2_sigma", th.lemma2_sigma},
            {"token_count_mode", to_string(th.mode)}}}};
}

// ---------------------------------------------------------------------------
// Splits.

struct Split {
  std::vector<std::size_t> train, val, test;
};

// Per class: seeded shuffle, then the first round(train*n) go to train, the
// next round(val*n) to val, the rest to test. Indices are returned sorted.
inline Split stratified_split(const std::vector<std::size_t>& labels, const SplitSpec& spec, std::uint64_t seed) {
  std::size_t K = 0;
  for (auto y : labels) K = std::max(K, y + 1);
  Split s;
  for (std::size_t y = 0; y < K; ++y) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == y) idx.push_back(i);
    Rng rng = Rng::for_stream(seed, 1000 + y);
    rng.shuffle(idx);
    const double n = static_cast<double>(idx.size());
    const auto n_train = std::min(idx.size(), static_cast<std::size_t>(std::llround(spec.train * n)));
    const auto n_val = std::min(idx.size() - n_train, static_cast<std::size_t>(std::llround(spec.val * n)));
    s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.val.insert(s.val.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                 idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
  }
  for (auto* v : {&s.train, &s.val, &s.test}) std::sort(v->begin(), v->end());
  return s;
}

inline LabeledDataset subset(const LabeledDataset& d, const std::vector<std::size_t>& idx) {
  LabeledDataset out{d.vocabulary, {}, d.num_classes};
  out.examples.reserve(idx.size());
  for (auto i : idx) out.examples.push_back(d.examples[i]);
  return out;
}

inline std::vector<LabeledGraph> subset(const std::vector<LabeledGraph>& d, const std::vector<std::size_t>& idx) {
  std::vector<LabeledGraph> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(d[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Results.

struct EvaluationRow {
  std::string model;
  double cln = 0.0, rnd = 0.0, adv = 0.0;
  double mean_fraction = 0.0, median_fraction = 0.0;
  double success_rate = 0.0;  // flipped / attacked among clean-correct
  std::size_t n_test = 0;
};

struct EvaluationTable {
  std::vector<EvaluationRow> rows;
};

struct TransferMatrix {
  std::vector<std::string> models;
  std::vector<double> clean;                 // CLN of each model
  std::vector<std::vector<double>> accuracy;  // [source i][evaluator j]
};

struct ExperimentResults {
  ExperimentConfig config;
  EvaluationTable table;
  std::optional<TransferMatrix> transfer;
  std::vector<json> log;  // results.jsonl lines
  std::vector<VerificationReport> reports;
  // Per model: adversarial and clean test inputs, for downstream checks.
  std::vector<std::vector<TokenSequence>> adversarial;
  std::vector<std::vector<AdjacencyGraph>> adversarial_graphs;
};

// A trained classifier of either family behind one interface.
struct TrainedModel {
  std::string name;
  std::string type;
  LinearModel linear;
  std::optional<NaiveBayesModel> nb;
  std::optional<LogisticModel> logistic;

  ClassScores score(const TokenSequence& x) const { return linear.score(x); }
  ClassScores score(const AdjacencyGraph& g) const { return linear.score(g); }
  template <class Input>
  std::size_t predict(const Input& x) const {
    return linear.predict(x);
  }
};

inline json to_json(const TrainedModel& m) {
  json j = m.nb ? to_json(*m.nb) : to_json(*m.logistic);
  j["name"] = m.name;
  return j;
}

inline TrainedModel trained_model_from_json(const json& j) {
  TrainedModel m;
  m.type = model_type(j);
  m.name = j.value("name", m.type == "naive-bayes" ? std::string("nb") : std::string("logistic"));
  if (m.type == "naive-bayes") {
    m.nb = naive_bayes_from_json(j);
    m.linear = m.nb->linear;
  } else {
    m.logistic = logistic_from_json(j);
    m.linear = m.logistic->linear;
  }
  return m;
}

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline Featurizer make_featurizer(const ModelSpec& m, std::size_t vocab_size, std::size_t n_vertices) {
  switch (parse_feature_kind(m.featurizer)) {
    case FeatureKind::bag_of_words: return Featurizer::bag_of_words(vocab_size);
    case FeatureKind::kmer: return Featurizer::kmer(m.k);
    case FeatureKind::graph_upper: return Featurizer::graph_upper(n_vertices);
  }
  return {};
}

inline TrainedModel train_model(const ModelSpec& m, const LabeledDataset& train) {
  TrainedModel t{m.name, m.type, {}, std::nullopt, std::nullopt};
  const auto feat = make_featurizer(m, train.vocabulary.size(), 0);
  if (m.type == "naive-bayes") {
    t.nb = train_naive_bayes(train, feat, m.nb);
    t.linear = t.nb->linear;
  } else {
    t.logistic = train_logistic(train, feat, m.logistic);
    t.linear = t.logistic->linear;
  }
  return t;
}

inline std::string stage_error(const std::string& stage, const std::exception& e) {
  return "stage '" + stage + "': " + e.what();
}

template <class F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(stage_error(name, e));
  } catch (const std::exception& e) {
    throw Error(stage_error(name, e));
  }
}

}  // namespace detail

inline ObjectiveSpec make_objective(const AttackSpec& a, std::size_t true_label) {
  if (a.objective == "targeted") {
    ObjectiveSpec spec = ObjectiveSpec::targeted(a.target);
    validate_objective(spec, true_label);
    return spec;
  }
  return ObjectiveSpec::untargeted(true_label);
}

// Text-task neighbourhood: proposer plus semantic / syntactic constraints.
struct SequenceNeighbourhood {
  std::unique_ptr<Proposer> proposer;
  SequenceConstraints constraints;
  std::shared_ptr<const EmbeddingTable> embeddings;
  std::shared_ptr<const TrigramLM> lm;
};

inline SequenceNeighbourhood build_neighbourhood(const ExperimentConfig& cfg, const LabeledDataset& train,
                                                 const std::vector<std::vector<TokenId>>& synonym_groups) {
  SequenceNeighbourhood nb;
  const auto& k = cfg.constraints;
  if (cfg.task == Task::gene) {
    nb.proposer = std::make_unique<CodonProposer>(k.N);
    nb.constraints.add(codon_synonymy_component(k.gamma));
    return nb;
  }
  if (cfg.attack.method == "concat") return nb;
  const Vocabulary& vocab = train.vocabulary;
  if (!k.embeddings.empty()) {
    std::ifstream in(k.embeddings);
    if (!in) throw Error("cannot open embeddings file: " + k.embeddings);
    nb.embeddings = std::make_shared<EmbeddingTable>(read_embeddings(in, vocab));
  } else {
    if (synonym_groups.empty())
      throw ConfigError("config.constraints.embeddings: required when the data has no synonym groups");
    nb.embeddings = std::make_shared<EmbeddingTable>(
        gen_synthetic_embeddings(vocab, k.embedding_dim, synonym_groups, Rng::for_stream(cfg.seed, 7).next()));
  }
  std::map<TokenId, std::string> lexicon;
  if (!k.pos_lexicon.empty()) {
    std::ifstream in(k.pos_lexicon);
    if (!in) throw Error("cannot open POS lexicon: " + k.pos_lexicon);
    lexicon = read_pos_lexicon(in, vocab);
  }
  if (k.proposer == "synonym-groups") {
    nb.proposer = std::make_unique<SynonymGroupProposer>(vocab.size(), synonym_groups);
  } else {
    nb.proposer = std::make_unique<EmbeddingProposer>(vocab, *nb.embeddings, k.N,
                                                      k.pos_lexicon.empty() ? nullptr : &lexicon);
  }
  nb.lm = std::make_shared<TrigramLM>(train_trigram_lm(train, k.lm_lambda, k.lm_min_count));
  if (std::isfinite(k.gamma1)) nb.constraints.add(semantic_component(nb.embeddings, k.gamma1));
  if (std::isfinite(k.gamma2)) nb.constraints.add(syntactic_component(nb.lm, k.gamma2));
  return nb;
}

// ---------------------------------------------------------------------------
// Sequence pipeline (gene and text tasks).

struct SequenceData {
  LabeledDataset data;
  std::vector<std::vector<TokenId>> synonym_groups;
};

inline SequenceData load_or_generate_sequences(const ExperimentConfig& cfg) {
  SequenceData out;
  if (!cfg.data.path.empty()) {
    out.data = load_dataset(cfg.data.path, parse_dataset_format(cfg.data.format));
    return out;
  }
  const std::uint64_t gseed = Rng::for_stream(cfg.seed, 0).next();
  if (cfg.task == Task::gene) {
    out.data = gen_gene_dataset(cfg.data.gene, gseed).data;
  } else {
    auto ds = gen_theory_dataset(cfg.data.theory, gseed);
    out.data = std::move(ds.data);
    out.synonym_groups = std::move(ds.synonym_groups);
  }
  return out;
}

struct ModelAttackOutcome {
  std::vector<TokenSequence> adversarial;
  std::vector<json> log;
  EvaluationRow row;
};

inline ModelAttackOutcome attack_sequences(const ExperimentConfig& cfg, const TrainedModel& model,
                                           const LabeledDataset& test, const SequenceNeighbourhood& hood) {
  const auto& a = cfg.attack;
  const std::size_t n = a.max_examples ? std::min(a.max_examples, test.size()) : test.size();
  const bool dna = cfg.task == Task::gene;
  ModelAttackOutcome out;
  out.adversarial.resize(n);
  std::vector<AttackResult> results(n);
  std::vector<double> elapsed(n, 0.0);

  std::size_t concat_T = a.concat_T;
  if (a.method == "concat") {
    if (!concat_T) {
      const auto& tp = cfg.data.theory;
      concat_T = insertion_budget(tp.r, static_cast<double>(tp.L), tp.eta, tp.p,
                                  token_count(tp, cfg.theory.mode), tp.rho, static_cast<double>(tp.V));
    }
  }

  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const auto& e = test.examples[i];
    const auto spec = make_objective(a, e.label);
    const auto t0 = std::chrono::steady_clock::now();
    if (a.method == "beam") {
      results[i] = beam_search_attack(e.tokens, model, spec, *hood.proposer, hood.constraints, a.config);
    } else if (a.method == "greedy_p") {
      results[i] = greedy_p_attack(e.tokens, model, spec, *hood.proposer, hood.constraints, a.config);
    } else if (a.method == "random") {
      const auto y = random_perturb(e.tokens, *hood.proposer, hood.constraints, a.config.delta_max,
                                    Rng::for_stream(cfg.seed, 2000000 + i).next());
      results[i] = finish_sequence_result(e.tokens, y, model, spec, a.config, hood.proposer->unit_width());
    } else {
      const std::size_t target = a.objective == "targeted" ? a.target : 1 - std::min<std::size_t>(e.label, 1);
      const auto c = concatenative_attack(e.tokens, model.linear, concat_T, target);
      results[i] = finish_sequence_result(e.tokens, e.tokens, model, spec, a.config, 1);
      results[i].x_adv = c.x_adv;
      const auto after = model.score(c.x_adv);
      results[i].J_final = spec.score(after);
      results[i].label_after = after.argmax();
      results[i].succeeded = spec.flipped(after);
      results[i].reached_tau = results[i].J_final >= a.config.tau;
      results[i].fraction_replaced =
          static_cast<double>(c.appended.size()) / static_cast<double>(e.tokens.size() + c.appended.size());
      Edit ed{e.tokens.size(), e.tokens.size(), {}, c.appended};
      results[i].edits = {ed};
    }
    if (cfg.timing)
      elapsed[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });

  std::size_t correct_clean = 0, correct_adv = 0, attacked = 0, flipped = 0;
  std::vector<double> fractions;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = test.examples[i];
    const auto& r = results[i];
    const bool clean_ok = r.label_before == e.label;
    const bool adv_ok = r.label_after == e.label;
    correct_clean += clean_ok;
    correct_adv += adv_ok;
    if (clean_ok) {
      ++attacked;
      flipped += adv_ok ? 0 : 1;
    }
    fractions.push_back(r.fraction_replaced);
    out.adversarial[i] = r.x_adv;
    json line = to_json(r, &test.vocabulary);
    json head = {{"model", model.name}, {"example", e.id}, {"index", i}, {"label", e.label}};
    if (dna) head["translation_preserved"] = same_translation(e.tokens, r.x_adv);
    if (cfg.timing) head["seconds"] = elapsed[i];
    head.update(line);
    out.log.push_back(std::move(head));
  }
  double mean = 0.0;
  for (double f : fractions) mean += f;
  mean = n ? mean / static_cast<double>(n) : 0.0;

  // Random baseline at the realised mean edit fraction.
  std::size_t correct_rnd = 0;
  if (a.method != "concat") {
    std::vector<std::size_t> ok(n, 0);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
      const auto& e = test.examples[i];
      const auto y = random_perturb(e.tokens, *hood.proposer, hood.constraints, mean,
                                    Rng::for_stream(cfg.seed, 3000000 + i).next());
      ok[i] = model.predict(y) == e.label ? 1 : 0;
    });
    for (auto v : ok) correct_rnd += v;
  } else {
    correct_rnd = correct_clean;
  }

  const double dn = n ? static_cast<double>(n) : 1.0;
  out.row = {model.name,
             static_cast<double>(correct_clean) / dn,
             static_cast<double>(correct_rnd) / dn,
             static_cast<double>(correct_adv) / dn,
             mean,
             detail::median(fractions),
             attacked ? static_cast<double>(flipped) / static_cast<double>(attacked) : 0.0,
             n};
  return out;
}

// Both featurizers accept the same inputs.
inline bool compatible_inputs(const Featurizer& a, const Featurizer& b) {
  const bool ga = a.kind == FeatureKind::graph_upper, gb = b.kind == FeatureKind::graph_upper;
  if (ga || gb) return ga && gb && a.param == b.param;
  if (a.kind == FeatureKind::bag_of_words && b.kind == FeatureKind::bag_of_words) return a.param == b.param;
  return true;
}

// Cell (i, j): accuracy of model j on examples crafted against model i.
inline TransferMatrix transfer_matrix(const std::vector<TrainedModel>& models,
                                      const std::vector<std::vector<TokenSequence>>& adversarial,
                                      const LabeledDataset& test) {
  if (models.empty()) throw Error("transfer_matrix: no models");
  for (const auto& m : models)
    if (!compatible_inputs(m.linear.featurizer, models[0].linear.featurizer))
      throw Error("transfer_matrix: incompatible feature spaces");
  TransferMatrix t;
  const std::size_t K = models.size();
  for (const auto& m : models) {
    t.models.push_back(m.name);
    std::size_t c = 0;
    const std::size_t n = adversarial[0].size();
    for (std::size_t k = 0; k < n; ++k) c += m.predict(test.examples[k].tokens) == test.examples[k].label;
    t.clean.push_back(n ? static_cast<double>(c) / static_cast<double>(n) : 0.0);
  }
  t.accuracy.assign(K, std::vector<double>(K, 0.0));
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) {
      std::size_t c = 0;
      const auto& adv = adversarial[i];
      for (std::size_t k = 0; k < adv.size(); ++k) c += models[j].predict(adv[k]) == test.examples[k].label;
      t.accuracy[i][j] = adv.empty() ? 0.0 : static_cast<double>(c) / static_cast<double>(adv.size());
    }
  return t;
}

struct PreparedSequences {
  SequenceData source;
  Split split;
  LabeledDataset train, val, test;
};

inline PreparedSequences prepare_sequences(const ExperimentConfig& cfg) {
  PreparedSequences p;
  p.source = detail::stage("generate", [&] { return load_or_generate_sequences(cfg); });
  std::vector<std::size_t> labels;
  for (const auto& e : p.source.data.examples) labels.push_back(e.label);
  p.split = stratified_split(labels, cfg.split, Rng::for_stream(cfg.seed, 1).next());
  p.train = subset(p.source.data, p.split.train);
  p.val = subset(p.source.data, p.split.val);
  p.test = subset(p.source.data, p.split.test);
  if (p.train.size() == 0 || p.test.size() == 0) throw Error("stage 'split': empty train or test split");
  return p;
}

inline ExperimentResults run_sequence_experiment(const ExperimentConfig& cfg) {
  ExperimentResults res;
  res.config = cfg;
  const auto prep = prepare_sequences(cfg);
  const auto& sd = prep.source;
  const auto& train = prep.train;
  const auto& test = prep.test;

  std::vector<TrainedModel> models;
  for (const auto& m : cfg.models)
    models.push_back(detail::stage("train " + m.name, [&] { return detail::train_model(m, train); }));
  const auto hood = detail::stage("constraints", [&] { return build_neighbourhood(cfg, train, sd.synonym_groups); });

  for (const auto& m : models) {
    auto out = detail::stage("attack " + m.name, [&] { return attack_sequences(cfg, m, test, hood); });
    res.table.rows.push_back(out.row);
    for (auto& l : out.log) res.log.push_back(std::move(l));
    res.adversarial.push_back(std::move(out.adversarial));
  }
  if (models.size() >= 2) {
    const std::size_t n = res.adversarial[0].size();
    LabeledDataset head = test;
    head.examples.resize(n);
    res.transfer = transfer_matrix(models, res.adversarial, head);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Graph pipeline.

inline AdjacencyGraph random_transpositions(const AdjacencyGraph& g, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  AdjacencyGraph out = g;
  const std::size_t n = g.vertex_count();
  if (n < 2) return out;
  for (std::size_t m = 0; m < k; ++m) {
    const std::size_t i = rng.below(n);
    std::size_t j = rng.below(n - 1);
    if (j >= i) ++j;
    out.swap_vertices(i, j);
  }
  return out;
}

inline TrainedModel train_graph_model(const ModelSpec& m, const std::vector<LabeledGraph>& train) {
  if (m.type != "logistic") throw ConfigError("graph task supports logistic models only");
  TrainedModel t{m.name, m.type, {}, std::nullopt, train_logistic(std::span<const LabeledGraph>(train), m.logistic)};
  t.linear = t.logistic->linear;
  return t;
}

struct PreparedGraphs {
  std::vector<LabeledGraph> graphs;
  Split split;
  std::vector<LabeledGraph> train, val, test;
};

inline PreparedGraphs prepare_graphs(const ExperimentConfig& cfg) {
  PreparedGraphs p;
  p.graphs = detail::stage("generate", [&] {
    if (!cfg.data.path.empty()) {
      std::ifstream in(cfg.data.path);
      if (!in) throw Error("cannot open " + cfg.data.path);
      return read_graph_tsv(in);
    }
    return gen_graph_dataset(cfg.data.graph, Rng::for_stream(cfg.seed, 0).next());
  });
  if (p.graphs.empty()) throw Error("stage 'generate': no graphs");
  std::vector<std::size_t> labels;
  for (const auto& g : p.graphs) labels.push_back(g.label);
  p.split = stratified_split(labels, cfg.split, Rng::for_stream(cfg.seed, 1).next());
  p.train = subset(p.graphs, p.split.train);
  p.val = subset(p.graphs, p.split.val);
  p.test = subset(p.graphs, p.split.test);
  if (p.train.empty() || p.test.empty()) throw Error("stage 'split': empty train or test split");
  return p;
}

struct GraphAttackOutcome {
  std::vector<AdjacencyGraph> adversarial;
  std::vector<json> log;
  EvaluationRow row;
};

// `ids` names each test graph in the log.
inline GraphAttackOutcome attack_graphs(const ExperimentConfig& cfg, const TrainedModel& m,
                                        const std::vector<LabeledGraph>& test, const std::vector<std::string>& ids) {
  const auto& a = cfg.attack;
  const std::size_t n = a.max_examples ? std::min(a.max_examples, test.size()) : test.size();
  std::vector<GraphAttackResult> results(n);
  GraphAttackOutcome out;
  out.adversarial.resize(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const auto spec = make_objective(a, test[i].label);
    const auto& g = test[i].graph;
    if (a.method == "beam") {
      results[i] = graph_attack(g, m, spec, a.config);
    } else {
      const auto k = static_cast<std::size_t>(std::llround(a.config.delta_max * static_cast<double>(g.vertex_count())));
      auto& r = results[i];
      r.adv = PermutedGraph::identity(random_transpositions(g, k, Rng::for_stream(cfg.seed, 2000000 + i).next()));
      const auto before = m.score(g), after = m.score(r.adv.graph);
      r.label_before = before.argmax();
      r.label_after = after.argmax();
      r.J_initial = spec.score(before);
      r.J_final = spec.score(after);
      r.succeeded = spec.flipped(after);
      r.fraction_replaced = static_cast<double>(k) / static_cast<double>(g.vertex_count());
    }
    out.adversarial[i] = results[i].adv.graph;
  });
  std::size_t cc = 0, ca = 0, attacked = 0, flipped = 0;
  std::vector<double> fr;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = results[i];
    cc += r.label_before == test[i].label;
    ca += r.label_after == test[i].label;
    if (r.label_before == test[i].label) {
      ++attacked;
      flipped += r.label_after != test[i].label;
    }
    fr.push_back(r.fraction_replaced);
    json head = {{"model", m.name},
                 {"example", i < ids.size() ? ids[i] : "graph" + std::to_string(i)},
                 {"index", i},
                 {"label", test[i].label},
                 {"degree_multiset_preserved", test[i].graph.degree_multiset() == r.adv.graph.degree_multiset()}};
    head.update(to_json(r));
    out.log.push_back(std::move(head));
  }
  double mean = 0.0;
  for (double f : fr) mean += f;
  mean = n ? mean / static_cast<double>(n) : 0.0;
  std::size_t cr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(std::llround(mean * static_cast<double>(test[i].graph.vertex_count())));
    cr += m.predict(random_transpositions(test[i].graph, k, Rng::for_stream(cfg.seed, 3000000 + i).next())) ==
          test[i].label;
  }
  const double dn = n ? static_cast<double>(n) : 1.0;
  out.row = {m.name, static_cast<double>(cc) / dn, static_cast<double>(cr) / dn, static_cast<double>(ca) / dn, mean,
             detail::median(fr), attacked ? static_cast<double>(flipped) / static_cast<double>(attacked) : 0.0, n};
  return out;
}

inline ExperimentResults run_graph_experiment(const ExperimentConfig& cfg) {
  ExperimentResults res;
  res.config = cfg;
  const auto prep = prepare_graphs(cfg);
  const auto& test = prep.test;
  std::vector<std::string> ids;
  for (auto i : prep.split.test) ids.push_back("graph" + std::to_string(i));

  std::vector<TrainedModel> models;
  for (const auto& m : cfg.models)
    models.push_back(detail::stage("train " + m.name, [&] { return train_graph_model(m, prep.train); }));

  for (const auto& m : models) {
    auto out = detail::stage("attack " + m.name, [&] { return attack_graphs(cfg, m, test, ids); });
    res.table.rows.push_back(out.row);
    for (auto& l : out.log) res.log.push_back(std::move(l));
    res.adversarial_graphs.push_back(std::move(out.adversarial));
  }
  if (models.size() >= 2) {
    TransferMatrix t;
    const std::size_t n = res.adversarial_graphs[0].size();
    for (std::size_t i = 0; i < models.size(); ++i) {
      t.models.push_back(models[i].name);
      t.clean.push_back(res.table.rows[i].cln);
    }
    t.accuracy.assign(models.size(), std::vector<double>(models.size(), 0.0));
    for (std::size_t i = 0; i < models.size(); ++i)
      for (std::size_t j = 0; j < models.size(); ++j) {
        std::size_t c = 0;
        for (std::size_t k = 0; k < n; ++k) c += models[j].predict(res.adversarial_graphs[i][k]) == test[k].label;
        t.accuracy[i][j] = n ? static_cast<double>(c) / static_cast<double>(n) : 0.0;
      }
    res.transfer = std::move(t);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Theory pipeline.

inline VerificationReport run_verifier(const std::string& name, const TheoryParams& tp, const TheorySpec& th,
                                       std::size_t T, std::uint64_t seed) {
  if (name == "spurious") return mc_verify_spurious(tp, th.trials, seed, th.mode);
  if (name == "lemma1") return mc_verify_lemma1(th.lemma_N, th.lemma_M, th.lemma_p, th.lemma_q, th.trials, seed);
  if (name == "lemma2") return mc_verify_lemma2(th.lemma2_n, th.lemma2_sigma, tp.rho, th.trials, seed);
  if (name == "synonym-attack") return mc_verify_synonym_attack(tp, T, th.trials, seed, th.test_docs, th.mode);
  if (name == "concatenative") return mc_verify_concatenative(tp, th.trials, seed, th.test_docs, th.mode);
  if (name == "assumption1") return check_assumption1_logistic(tp, seed);
  if (name == "closed-form") return closed_form_report(tp, T, th.mode);
  throw ConfigError("unknown verifier '" + name + "'");
}

inline ExperimentResults run_theory_experiment(const ExperimentConfig& cfg) {
  ExperimentResults res;
  res.config = cfg;
  for (const auto& v : cfg.theory.verifiers) {
    const auto Ts = v == "synonym-attack" || v == "closed-form" ? cfg.theory.T : std::vector<std::size_t>{0};
    for (std::size_t T : Ts) {
      auto r = detail::stage("theory " + v, [&] { return run_verifier(v, cfg.data.theory, cfg.theory, T, cfg.seed); });
      res.log.push_back(to_json(r));
      res.reports.push_back(std::move(r));
    }
  }
  return res;
}

inline ExperimentResults run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.task) {
    case Task::gene:
    case Task::text: return run_sequence_experiment(cfg);
    case Task::graph: return run_graph_experiment(cfg);
    case Task::theory: return run_theory_experiment(cfg);
  }
  throw Error("unknown task");
}

// ---------------------------------------------------------------------------
// Reports.

inline const char* kTableHeader =
    "model,cln,rnd,adv,mean_fraction_replaced,median_fraction_replaced,attack_success_rate,n_test";
inline const char* kTheoryHeader = "verifier,check,predicted,empirical,standard_error,tolerance,kind,pass";

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
  if (!out) throw Error("write failed: " + p.string());
}

inline std::string table_csv(const ExperimentResults& r) {
  std::ostringstream s;
  if (r.config.task == Task::theory) {
    s << kTheoryHeader << '\n';
    for (const auto& rep : r.reports)
      for (const auto& c : rep.checks)
        s << rep.name << ',' << c.name << ',' << detail::fmt(c.predicted) << ',' << detail::fmt(c.empirical) << ','
          << detail::fmt(c.standard_error) << ',' << detail::fmt(c.tolerance) << ',' << to_string(c.kind) << ','
          << (c.pass() ? "true" : "false") << '\n';
    return s.str();
  }
  s << kTableHeader << '\n';
  for (const auto& row : r.table.rows)
    s << row.model << ',' << detail::fmt(row.cln) << ',' << detail::fmt(row.rnd) << ',' << detail::fmt(row.adv) << ','
      << detail::fmt(row.mean_fraction) << ',' << detail::fmt(row.median_fraction) << ','
      << detail::fmt(row.success_rate) << ',' << row.n_test << '\n';
  return s.str();
}

inline std::string transfer_csv(const TransferMatrix& t) {
  std::ostringstream s;
  s << "generated_by,CLN";
  for (const auto& m : t.models) s << ',' << m;
  s << '\n';
  for (std::size_t i = 0; i < t.models.size(); ++i) {
    s << t.models[i] << ',' << detail::fmt(t.clean[i]);
    for (double v : t.accuracy[i]) s << ',' << detail::fmt(v);
    s << '\n';
  }
  return s.str();
}

inline std::string summary_text(const ExperimentResults& r) {
  std::ostringstream s;
  s << "task: " << to_string(r.config.task) << "  seed: " << r.config.seed << "\n\n";
  if (r.config.task == Task::theory) {
    for (const auto& rep : r.reports) {
      s << rep.name << (rep.pass() ? "  PASS" : "  FAIL") << "  (trials " << rep.trials << ")\n";
      for (const auto& c : rep.checks)
        s << "  " << c.name << ": predicted " << detail::fmt(c.predicted) << "  empirical "
          << detail::fmt(c.empirical) << "  tolerance " << detail::fmt(c.tolerance) << " [" << to_string(c.kind)
          << "]\n";
    }
    return s.str();
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %8s %8s %8s %10s %10s\n", "model", "CLN", "RND", "ADV", "frac", "success");
  s << line;
  for (const auto& row : r.table.rows) {
    std::snprintf(line, sizeof line, "%-12s %8.4f %8.4f %8.4f %10.4f %10.4f\n", row.model.c_str(), row.cln, row.rnd,
                  row.adv, row.mean_fraction, row.success_rate);
    s << line;
  }
  if (r.transfer) {
    s << "\ntransfer (row: generated by, column: evaluated on)\n";
    s << transfer_csv(*r.transfer);
  }
  return s.str();
}

inline void emit_report(const ExperimentResults& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "table.csv", table_csv(r));
  std::string jsonl;
  for (const auto& l : r.log) jsonl += l.dump() + "\n";
  write_file(dir / "results.jsonl", jsonl);
  write_file(dir / "config-echo.json", to_json(r.config).dump(2) + "\n");
  write_file(dir / "summary.txt", summary_text(r));
  if (r.transfer) write_file(dir / "transfer.csv", transfer_csv(*r.transfer));
}

}  // namespace synadv
