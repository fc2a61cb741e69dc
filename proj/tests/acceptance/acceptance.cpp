// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "synadv/synadv.hpp"

using namespace synadv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string config_path(const std::string& name) { return std::string(SYNADV_CONFIG_DIR) + "/" + name; }

const EvaluationRow& row(const ExperimentResults& r, const std::string& model) {
  for (const auto& x : r.table.rows)
    if (x.model == model) return x;
  throw Error("no row for model " + model);
}

// Shared gene run for criteria 1, 2 and 11.
struct GeneRun {
  ExperimentConfig cfg;
  ExperimentResults res;
  double seconds = 0.0;
};

const GeneRun& gene_run() {
  static const GeneRun run = [] {
    GeneRun g;
    g.cfg = load_experiment_config(config_path("gene.json"));
    g.cfg.threads = 1;
    const auto t0 = std::chrono::steady_clock::now();
    g.res = run_experiment(g.cfg);
    g.seconds = seconds_since(t0);
    return g;
  }();
  return run;
}

Outcome criterion1() {
  const auto& g = gene_run();
  const auto& nb = row(g.res, "nb");
  const auto prep = prepare_sequences(g.cfg);
  std::size_t checked = 0, mismatched = 0;
  for (const auto& adv : g.res.adversarial)
    for (std::size_t k = 0; k < adv.size(); ++k) {
      ++checked;
      mismatched += translate(adv[k]) != translate(prep.test.examples[k].tokens);
    }
  const bool sizes = prep.train.size() == 10000 && prep.test.size() == 1000;
  const bool pass = sizes && nb.cln >= 0.85 && nb.adv <= 0.25 && nb.median_fraction <= 0.15 && mismatched == 0 &&
                    checked > 0 && g.seconds <= 300.0;
  return {pass, fmt("train %zu test %zu, CLN %.4f (>= 0.85), ADV %.4f (<= 0.25), median edit fraction %.4f (<= 0.15), "
                    "protein mismatches %zu/%zu, %.1f s (<= 300)",
                    prep.train.size(), prep.test.size(), nb.cln, nb.adv, nb.median_fraction, mismatched, checked,
                    g.seconds)};
}

Outcome criterion2() {
  const auto& g = gene_run();
  bool pass = true;
  std::string d;
  for (const auto& r : g.res.table.rows) {
    const double drop = 100.0 * (r.cln - r.rnd);
    pass = pass && drop <= 10.0;
    d += fmt("%s CLN %.4f RND %.4f drop %.1f pts at fraction %.4f; ", r.model.c_str(), r.cln, r.rnd, drop,
             r.mean_fraction);
  }
  return {pass, d + "limit 10 pts"};
}

// Fixed candidate lists per position.
class TableProposer final : public Proposer {
 public:
  explicit TableProposer(std::vector<std::vector<TokenId>> table) : table_(std::move(table)) {}
  std::vector<std::vector<TokenId>> candidates(const TokenSequence& x, std::size_t unit) const override {
    std::vector<std::vector<TokenId>> out;
    for (TokenId t : table_[unit])
      if (t != x[unit]) out.push_back({t});
    return out;
  }

 private:
  std::vector<std::vector<TokenId>> table_;
};

Outcome criterion3() {
  constexpr std::size_t kInstances = 200, L = 6, V = 8, kMaxCands = 3, T = 3;
  Rng rng(20240601);
  const SequenceConstraints none;
  std::size_t violations = 0, optimal = 0;
  for (std::size_t t = 0; t < kInstances; ++t) {
    TokenSequence x;
    x.ids.resize(L);
    std::vector<std::vector<TokenId>> table(L);
    for (std::size_t i = 0; i < L; ++i) {
      x.ids[i] = static_cast<TokenId>(rng.below(V));
      std::vector<TokenId> others;
      for (TokenId v = 0; v < V; ++v)
        if (v != x[i]) others.push_back(v);
      rng.shuffle(others);
      others.resize(1 + rng.below(kMaxCands));
      table[i] = others;
    }
    LinearModel m;
    m.featurizer = Featurizer::bag_of_words(V);
    m.num_classes = 2;
    m.weights.resize(2 * V);
    for (auto& w : m.weights) w = 2.0 * rng.uniform() - 1.0;
    m.bias = {rng.normal() * 0.5, rng.normal() * 0.5};
    const TableProposer prop(table);
    const auto spec = ObjectiveSpec::untargeted(m.predict(x));
    AttackConfig c;
    c.tau = 1.0;
    c.delta_max = static_cast<double>(T) / static_cast<double>(L);
    c.beam = 1;
    const auto b1 = beam_search_attack(x, m, spec, prop, none, c);
    c.beam = 5;
    const auto b5 = beam_search_attack(x, m, spec, prop, none, c);
    const auto o = exhaustive_oracle(x, m, spec, prop, none, T);
    violations += !(o.J >= b5.J_final && b5.J_final >= b1.J_final);
    optimal += b5.J_final == o.J;
  }
  const double rate = static_cast<double>(optimal) / kInstances;
  return {violations == 0 && optimal > 0,
          fmt("%zu instances, violations %zu, beam(5) optimal on %.1f%% (target 60%%, must be > 0)", kInstances,
              violations, 100.0 * rate)};
}

Outcome criterion4() {
  auto cfg = load_experiment_config(config_path("gene.json"));
  cfg.threads = 1;
  cfg.attack.method = "beam";
  cfg.attack.config.beam = 5;
  const auto beam = run_experiment(cfg);
  cfg.attack.method = "greedy_p";
  cfg.attack.config.beam = 1;
  const auto greedy = run_experiment(cfg);
  bool pass = true;
  std::string d;
  for (const auto& r : beam.table.rows) {
    const auto& gp = row(greedy, r.model);
    pass = pass && r.adv <= gp.adv;
    d += fmt("%s beam(5) ADV %.4f vs greedy-P ADV %.4f; ", r.model.c_str(), r.adv, gp.adv);
  }
  return {pass, d};
}

std::string report_line(const VerificationReport& r) {
  std::string d;
  for (const auto& c : r.checks)
    d += fmt("%s predicted %.6g empirical %.6g tol %.4g; ", c.name.c_str(), c.predicted, c.empirical, c.tolerance);
  return d;
}

Outcome criterion5() {
  TheoryParams tp;
  tp.D_docs = 200;
  tp.L = 50;
  tp.V = 2000;
  tp.p = 1.0 / 2000.0;
  tp.gamma = 0.5;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = mc_verify_spurious(tp, 50, 1);
  const double s = seconds_since(t0);
  return {r.pass() && s <= 120.0, report_line(r) + fmt("%.1f s (<= 120)", s)};
}

Outcome criterion6() {
  const auto r = mc_verify_lemma1(5000, 5000, 0.01, 0.01, 10000, 1);
  return {r.pass(), report_line(r)};
}

Outcome criterion7() {
  TheoryParams tp;
  tp.D_docs = 1000;
  tp.L = 50;
  tp.V_inf = 40;
  tp.r = 0.1;
  tp.eta = 1.0;
  bool pass = true;
  std::size_t failed = 0;
  std::string d;
  for (std::size_t T : {1u, 3u, 5u})
    for (std::size_t S : {1u, 3u, 5u}) {
      tp.S = S;
      const auto r = mc_verify_synonym_attack(tp, T, 2, 7, 200);
      const auto& c = r.checks[0];
      if (!r.pass()) {
        pass = false;
        ++failed;
      }
      d += fmt("(T=%zu,S=%zu) %.3f vs lb %.3f; ", T, S, c.empirical, c.predicted);
    }
  return {pass, fmt("%zu/9 cells fail; ", failed) + d};
}

Outcome criterion8() {
  const auto cfg = load_experiment_config(config_path("text-concat.json"));
  const auto r = mc_verify_concatenative(cfg.data.theory, 5, 1, 200);
  return {r.pass(), report_line(r) + fmt("budget T %zu, attacked %zu", r.details["T"].get<std::size_t>(),
                                         r.details["attacked_documents"].get<std::size_t>())};
}

Outcome criterion9() {
  // Phi(x) for x = -5, -4.5, ..., 0 from a 30-digit evaluation.
  constexpr double kPhiNegative[] = {
      2.8665157187919391167e-7, 3.3976731247300604017e-6, 3.1671241833119921254e-5, 2.3262907903552503635e-4,
      1.3498980316300945267e-3, 6.209665325776135167e-3,  0.0227501319481792072,    0.066807201268858066004,
      0.15865525393145705141,   0.30853753872598689636,   0.5};
  double cdf_err = 0.0, inv_err = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double x = -5.0 + 0.5 * i;
    const double ref = i <= 10 ? kPhiNegative[i] : 1.0 - kPhiNegative[20 - i];
    cdf_err = std::max(cdf_err, std::abs(std_normal_cdf(x) - ref));
    inv_err = std::max(inv_err, std::abs(std_normal_quantile(std_normal_cdf(x)) - x));
  }

  Rng rng(10);
  const std::size_t n = 12, d = 6, K = 3;
  std::vector<CountVector> X(n);
  std::vector<std::size_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X[i] = CountVector(d);
    for (auto& v : X[i]) v = static_cast<double>(rng.below(4));
    y[i] = rng.below(K);
  }
  std::vector<double> W(K * d), b(K), gw, gb;
  for (auto& w : W) w = rng.normal() * 0.5;
  for (auto& v : b) v = rng.normal() * 0.5;
  logistic_loss(X, y, K, W, b, 0.01, &gw, &gb);
  const double h = 1e-5;
  double grad_err = 0.0;
  auto rel = [](double a, double num) { return std::abs(a - num) / std::max(1e-8, std::max(std::abs(a), std::abs(num))); };
  for (std::size_t k = 0; k < W.size(); ++k) {
    auto Wp = W, Wm = W;
    Wp[k] += h;
    Wm[k] -= h;
    const double num = (logistic_loss(X, y, K, Wp, b, 0.01) - logistic_loss(X, y, K, Wm, b, 0.01)) / (2 * h);
    grad_err = std::max(grad_err, rel(gw[k], num));
  }
  for (std::size_t c = 0; c < K; ++c) {
    auto bp = b, bm = b;
    bp[c] += h;
    bm[c] -= h;
    const double num = (logistic_loss(X, y, K, W, bp, 0.01) - logistic_loss(X, y, K, W, bm, 0.01)) / (2 * h);
    grad_err = std::max(grad_err, rel(gb[c], num));
  }
  return {cdf_err <= 1e-7 && inv_err <= 1e-6 && grad_err <= 1e-5,
          fmt("max |Phi - ref| %.3g (<= 1e-7), max |Phi^-1(Phi(x)) - x| %.3g (<= 1e-6), gradient rel err %.3g (<= 1e-5)",
              cdf_err, inv_err, grad_err)};
}

Outcome criterion10() {
  auto cfg = load_experiment_config(config_path("graph.json"));
  cfg.threads = 1;
  const auto res = run_experiment(cfg);
  const auto& r = res.table.rows.at(0);
  const auto prep = prepare_graphs(cfg);
  const auto test = subset(prep.graphs, prep.split.test);
  std::size_t mismatched = 0;
  const auto& adv = res.adversarial_graphs.at(0);
  for (std::size_t k = 0; k < adv.size(); ++k) mismatched += adv[k].degree_multiset() != test[k].graph.degree_multiset();
  return {r.cln >= 0.80 && r.adv <= 0.40 && mismatched == 0 && !adv.empty(),
          fmt("CLN %.4f (>= 0.80), ADV %.4f (<= 0.40), degree multiset mismatches %zu/%zu", r.cln, r.adv, mismatched,
              adv.size())};
}

Outcome criterion11() {
  const auto& g = gene_run();
  if (!g.res.transfer) return {false, "no transfer matrix"};
  const auto& t = *g.res.transfer;
  bool pass = true;
  std::string d;
  for (std::size_t i = 0; i < t.models.size(); ++i)
    for (std::size_t j = 0; j < t.models.size(); ++j) {
      if (i == j) continue;
      const double diag = t.accuracy[j][j], clean = t.clean[j], off = t.accuracy[i][j];
      pass = pass && diag < off && off < clean;
      d += fmt("%s->%s %.4f (white-box %.4f, clean %.4f); ", t.models[i].c_str(), t.models[j].c_str(), off, diag, clean);
    }
  return {pass, d};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + SYNADV_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

Outcome criterion12() {
  const fs::path work = fs::temp_directory_path() / "synadv-acceptance-determinism";
  fs::remove_all(work);
  fs::create_directories(work);
  bool pass = true;
  std::string d;
  for (const std::string name : {"graph", "text", "theory"}) {
    // Same output directory both times; the first run is moved aside.
    const auto out = work / name;
    std::vector<fs::path> dirs;
    for (int run = 0; run < 2; ++run) {
      const int rc = run_cli("evaluate --config \"" + config_path(name + ".json") + "\" --out \"" + out.string() + "\"",
                             work / (name + ".log"));
      if (rc != 0) {
        pass = false;
        d += name + ": CLI exit " + std::to_string(rc) + "; ";
      }
      const auto kept = work / (name + "-" + std::to_string(run));
      fs::rename(out, kept);
      dirs.push_back(kept);
    }
    std::size_t files = 0, differ = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      ++files;
      const auto other = dirs[1] / entry.path().filename();
      differ += !fs::exists(other) || slurp(entry.path()) != slurp(other);
    }
    std::size_t files1 = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dirs[1])) ++files1;
    pass = pass && files > 0 && differ == 0 && files == files1;
    d += fmt("%s: %zu files, %zu differ; ", name.c_str(), files, differ);
  }
  return {pass, d};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2,  criterion3,  criterion4,
                                                       criterion5, criterion6,  criterion7,  criterion8,
                                                       criterion9, criterion10, criterion11, criterion12};
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2d: %s  %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
