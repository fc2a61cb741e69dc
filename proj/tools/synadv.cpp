// synadv command-line driver.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "synadv/synadv.hpp"

namespace {

using namespace synadv;
using nlohmann::json;

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

ExperimentConfig config_or_default(const std::string& path, const std::string& task) {
  if (!path.empty()) return load_experiment_config(path);
  json j = json::object();
  if (!task.empty()) j["task"] = task;
  return parse_experiment_config(j);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

void print_row_table(const std::vector<EvaluationRow>& rows) {
  ExperimentResults r;
  r.table.rows = rows;
  std::cout << table_csv(r);
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string config, task, out, format;
  std::int64_t seed = -1;
};

void cmd_gen(const GenArgs& a) {
  auto cfg = config_or_default(a.config, a.task);
  if (!a.task.empty()) cfg.task = parse_task(a.task);
  if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
  const std::uint64_t gseed = Rng::for_stream(cfg.seed, 0).next();
  json meta;
  if (cfg.task == Task::graph) {
    const auto graphs = gen_graph_dataset(cfg.data.graph, gseed);
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw Error("cannot write " + a.out);
    write_graph_tsv(out, graphs);
    const auto& g = cfg.data.graph;
    meta = {{"generator", "graph"},
            {"rng", std::string(kRngName)},
            {"seed", gseed},
            {"params",
             {{"n_graphs", g.n_graphs},
              {"n_vertices", g.n_vertices},
              {"p_edge0", g.p_edge0},
              {"p_edge1", g.p_edge1},
              {"block_size", g.block_size},
              {"p_block", g.p_block}}}};
  } else if (cfg.task == Task::gene) {
    const auto ds = gen_gene_dataset(cfg.data.gene, gseed);
    save_dataset(a.out, ds.data, parse_dataset_format(a.format.empty() ? "fasta-dna" : a.format));
    const auto& g = cfg.data.gene;
    meta = {{"generator", "gene"},
            {"rng", std::string(kRngName)},
            {"seed", gseed},
            {"params",
             {{"n_pos", g.n_pos},
              {"n_neg", g.n_neg},
              {"len_codons", g.len_codons},
              {"corruption_rate", g.corruption_rate}}},
            {"corrupted_positions", ds.corrupted_positions}};
  } else {
    const auto ds = gen_theory_dataset(cfg.data.theory, gseed);
    save_dataset(a.out, ds.data, parse_dataset_format(a.format.empty() ? "tsv-tokens" : a.format));
    meta = theory_metadata(ds, gseed);
  }
  write_json_file(a.out + ".meta.json", meta);
  std::cout << "wrote " << a.out << " and " << a.out << ".meta.json\n";
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string config, out, model;
};

const ModelSpec& pick_model(const ExperimentConfig& cfg, const std::string& name) {
  if (cfg.models.empty()) throw ConfigError("config has no models");
  if (name.empty()) return cfg.models.front();
  for (const auto& m : cfg.models)
    if (m.name == name) return m;
  throw ConfigError("no model named '" + name + "' in config");
}

void cmd_train(const TrainArgs& a) {
  const auto cfg = load_experiment_config(a.config);
  if (cfg.task == Task::theory) throw ConfigError("train: theory task has no models");
  const auto& spec = pick_model(cfg, a.model);
  TrainedModel m;
  double train_acc = 0.0, test_acc = 0.0;
  if (cfg.task == Task::graph) {
    const auto prep = prepare_graphs(cfg);
    m = train_graph_model(spec, prep.train);
    train_acc = accuracy(m.linear, prep.train);
    test_acc = accuracy(m.linear, prep.test);
  } else {
    const auto prep = prepare_sequences(cfg);
    m = detail::train_model(spec, prep.train);
    train_acc = accuracy(m.linear, prep.train);
    test_acc = accuracy(m.linear, prep.test);
  }
  write_json_file(a.out, to_json(m));
  std::printf("model %s (%s): train accuracy %.6f, test accuracy %.6f\n", m.name.c_str(), m.type.c_str(), train_acc,
              test_acc);
}

// ---------------------------------------------------------------------------

struct AttackArgs {
  std::string config, model, out;
};

TrainedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
  return trained_model_from_json(j);
}

void cmd_attack(const AttackArgs& a) {
  const auto cfg = load_experiment_config(a.config);
  if (cfg.task == Task::theory) throw ConfigError("attack: theory task has no attack");
  const auto model = load_model_file(a.model);
  std::vector<json> log;
  EvaluationRow row;
  if (cfg.task == Task::graph) {
    const auto prep = prepare_graphs(cfg);
    std::vector<std::string> ids;
    for (auto i : prep.split.test) ids.push_back("graph" + std::to_string(i));
    auto out = attack_graphs(cfg, model, prep.test, ids);
    log = std::move(out.log);
    row = out.row;
  } else {
    const auto prep = prepare_sequences(cfg);
    const auto hood = build_neighbourhood(cfg, prep.train, prep.source.synonym_groups);
    auto out = attack_sequences(cfg, model, prep.test, hood);
    log = std::move(out.log);
    row = out.row;
  }
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw Error("cannot write " + a.out);
  for (const auto& l : log) out << l.dump() << '\n';
  print_row_table({row});
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string config, out;
  std::size_t threads = 0;
};

ExperimentConfig eval_config(const EvalArgs& a) {
  auto cfg = load_experiment_config(a.config);
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (a.threads) cfg.threads = a.threads;
  return cfg;
}

void cmd_evaluate(const EvalArgs& a) {
  const auto cfg = eval_config(a);
  const auto res = run_experiment(cfg);
  emit_report(res, cfg.output_dir);
  std::cout << summary_text(res);
}

void cmd_transfer(const EvalArgs& a) {
  const auto cfg = eval_config(a);
  if (cfg.task == Task::theory) throw ConfigError("transfer: theory task has no models");
  if (cfg.models.size() < 2) throw ConfigError("transfer: config must list at least two models");
  const auto res = run_experiment(cfg);
  emit_report(res, cfg.output_dir);
  std::cout << transfer_csv(*res.transfer);
}

// ---------------------------------------------------------------------------

struct TheoryArgs {
  std::string verifier, config, json_out, grid, mode = "per-class";
  std::vector<std::string> set;
  std::size_t trials = 0, T = 5, test_docs = 200;
  std::int64_t seed = -1;
};

// Keys of TheoryParams accepted by --set / --grid.
bool is_theory_param(const std::string& k) {
  static const std::set<std::string> keys{"D_docs", "L", "V", "V_inf", "p", "r", "eta", "S", "rho", "gamma"};
  return keys.count(k) > 0;
}

json parse_scalar(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') throw ConfigError(key + ": not a number: '" + v + "'");
  static const std::set<std::string> integral{"D_docs", "L", "V", "V_inf", "S", "T", "trials", "test_docs"};
  if (integral.count(key)) {
    if (d < 0 || d != std::floor(d)) throw ConfigError(key + ": expected a non-negative integer");
    return static_cast<std::uint64_t>(d);
  }
  return d;
}

struct TheoryRun {
  json params = json::object();
  std::size_t T = 5, trials = 0, test_docs = 200;
};

void apply_setting(TheoryRun& run, const std::string& key, const std::string& value) {
  const json v = parse_scalar(key, value);
  if (is_theory_param(key)) run.params[key] = v;
  else if (key == "T") run.T = v.get<std::size_t>();
  else if (key == "trials") run.trials = v.get<std::size_t>();
  else if (key == "test_docs") run.test_docs = v.get<std::size_t>();
  else throw ConfigError("unknown theory parameter '" + key + "'");
}

VerificationReport run_theory(const std::string& verifier, const TheoryRun& run, TheorySpec th, std::uint64_t seed) {
  const auto tp = detail::parse_theory_params(run.params, "theory");
  if (run.trials) th.trials = run.trials;
  th.test_docs = run.test_docs;
  return run_verifier(verifier, tp, th, run.T, seed);
}

void print_report(const VerificationReport& r) {
  std::printf("%s  %s  (trials %zu, seed %llu)\n", r.name.c_str(), r.pass() ? "PASS" : "FAIL", r.trials,
              static_cast<unsigned long long>(r.seed));
  std::printf("  %-34s %14s %14s %12s %12s %-8s %s\n", "check", "predicted", "empirical", "std_error", "tolerance",
              "kind", "pass");
  for (const auto& c : r.checks)
    std::printf("  %-34s %14.6f %14.6f %12.6f %12.6f %-8s %s\n", c.name.c_str(), c.predicted, c.empirical,
                c.standard_error, c.tolerance, to_string(c.kind).c_str(), c.pass() ? "yes" : "no");
}

void cmd_theory(const TheoryArgs& a) {
  TheorySpec th;
  std::uint64_t seed = 1;
  TheoryRun run;
  if (!a.config.empty()) {
    const auto cfg = load_experiment_config(a.config);
    th = cfg.theory;
    seed = cfg.seed;
    run.params = cfg.data.theory;
    if (!th.T.empty()) run.T = th.T.front();
    run.test_docs = th.test_docs;
  } else {
    run.T = a.T;
    run.test_docs = a.test_docs;
  }
  th.mode = parse_token_count_mode(a.mode);
  if (a.seed >= 0) seed = static_cast<std::uint64_t>(a.seed);
  if (a.trials) run.trials = a.trials;
  for (const auto& kv : a.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(run, kv.substr(0, eq), kv.substr(eq + 1));
  }

  if (a.grid.empty()) {
    const auto rep = run_theory(a.verifier, run, th, seed);
    print_report(rep);
    if (!a.json_out.empty()) {
      if (a.json_out == "-") std::cout << to_json(rep).dump(2) << '\n';
      else write_json_file(a.json_out, to_json(rep));
    }
    return;
  }
  const auto eq = a.grid.find('=');
  if (eq == std::string::npos) throw ConfigError("--grid expects name=v1,v2,...");
  const std::string key = a.grid.substr(0, eq);
  std::vector<std::string> values;
  std::stringstream ss(a.grid.substr(eq + 1));
  for (std::string v; std::getline(ss, v, ',');)
    if (!v.empty()) values.push_back(v);
  if (values.empty()) throw ConfigError("--grid: no values");
  std::ostringstream csv;
  csv << "param,value,check,predicted,empirical,standard_error,tolerance,kind,pass\n";
  std::vector<json> reports;
  for (const auto& v : values) {
    TheoryRun r = run;
    apply_setting(r, key, v);
    const auto rep = run_theory(a.verifier, r, th, seed);
    for (const auto& c : rep.checks)
      csv << key << ',' << v << ',' << c.name << ',' << detail::fmt(c.predicted) << ',' << detail::fmt(c.empirical)
          << ',' << detail::fmt(c.standard_error) << ',' << detail::fmt(c.tolerance) << ',' << to_string(c.kind)
          << ',' << (c.pass() ? "true" : "false") << '\n';
    reports.push_back(to_json(rep));
  }
  std::cout << csv.str();
  if (!a.json_out.empty()) {
    if (a.json_out == "-") std::cout << json(reports).dump(2) << '\n';
    else write_json_file(a.json_out, reports);
  }
}

// ---------------------------------------------------------------------------

void cmd_export_genetic_code(const std::string& out) {
  if (out.empty() || out == "-") {
    export_genetic_code(std::cout);
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("cannot write " + out);
  export_genetic_code(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synadv: synonymous adversarial examples for discrete-input classifiers"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic dataset plus a .meta.json sidecar");
  g->add_option("--task", gen.task, "gene | text | graph | theory");
  g->add_option("--config", gen.config, "Experiment config (data section is used)");
  g->add_option("--seed", gen.seed, "Override the config seed");
  g->add_option("--format", gen.format, "tsv-tokens | fasta-dna");
  g->add_option("--out", gen.out, "Output dataset path")->required();

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train one configured model and save it as JSON");
  t->add_option("--config", train.config)->required();
  t->add_option("--model", train.model, "Model name from the config (default: first)");
  t->add_option("--out", train.out)->required();

  AttackArgs attack;
  auto* at = app.add_subcommand("attack", "Attack the test split with a saved model");
  at->add_option("--config", attack.config)->required();
  at->add_option("--model", attack.model, "Model JSON written by train")->required();
  at->add_option("--out", attack.out, "Per-example results (JSON lines)")->required();

  EvalArgs eval;
  auto* ev = app.add_subcommand("evaluate", "Run the full pipeline and write a report directory");
  ev->add_option("--config", eval.config)->required();
  ev->add_option("--out", eval.out, "Override output_dir");
  ev->add_option("--threads", eval.threads, "Override worker count");

  EvalArgs trans;
  auto* tr = app.add_subcommand("transfer", "Run the pipeline with two or more models and print the transfer matrix");
  tr->add_option("--config", trans.config)->required();
  tr->add_option("--out", trans.out, "Override output_dir");
  tr->add_option("--threads", trans.threads, "Override worker count");

  TheoryArgs theory;
  auto* th = app.add_subcommand("theory", "Closed forms and Monte Carlo verifiers");
  th->add_option("verifier", theory.verifier,
                 "spurious | lemma1 | lemma2 | synonym-attack | concatenative | assumption1 | closed-form")
      ->required()
      ->check(CLI::IsMember({"spurious", "lemma1", "lemma2", "synonym-attack", "concatenative", "assumption1",
                             "closed-form"}));
  th->add_option("--config", theory.config, "Experiment config (data.theory and theory sections)");
  th->add_option("--set", theory.set, "key=value (D_docs L V V_inf p r eta S rho gamma T trials test_docs)");
  th->add_option("--grid", theory.grid, "Sweep one key: name=v1,v2,... (CSV on stdout)");
  th->add_option("--trials", theory.trials);
  th->add_option("--seed", theory.seed);
  th->add_option("--T", theory.T, "Swap budget for synonym-attack");
  th->add_option("--test-docs", theory.test_docs);
  th->add_option("--mode", theory.mode, "per-class | total");
  th->add_option("--json", theory.json_out, "Write the report JSON here ('-' for stdout)");

  std::string gc_out;
  auto* gc = app.add_subcommand("export-genetic-code", "Print the standard genetic code as TSV");
  gc->add_option("--out", gc_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*g) cmd_gen(gen);
    else if (*t) cmd_train(train);
    else if (*at) cmd_attack(attack);
    else if (*ev) cmd_evaluate(eval);
    else if (*tr) cmd_transfer(trans);
    else if (*th) cmd_theory(theory);
    else if (*gc) cmd_export_genetic_code(gc_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
