#include <catch_amalgamated.hpp>

#include <set>

#include "test_util.hpp"

using namespace synadv;
using Catch::Approx;

namespace {

json small_gene_config() {
  return json::parse(R"({
    "task": "gene", "seed": 7,
    "data": {"gene": {"n_pos": 60, "n_neg": 60, "len_codons": 30, "corruption_rate": 0.2}},
    "models": [{"name": "nb", "type": "naive-bayes", "featurizer": "kmer", "k": 3},
               {"name": "lr", "type": "logistic", "featurizer": "kmer", "k": 3, "epochs": 20}],
    "attack": {"method": "beam", "beam": 1, "delta": 0.3, "max_examples": 8}
  })");
}

std::string error_of(const json& j) {
  try {
    parse_experiment_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config round trips through to_json", "[experiment]") {
  const auto c = parse_experiment_config(small_gene_config());
  const auto j = to_json(c);
  const auto c2 = parse_experiment_config(j);
  CHECK(to_json(c2) == j);
  CHECK(c2.models.size() == 2);
  CHECK(c2.models[1].k == 3);
  CHECK(c2.attack.max_examples == 8);
  CHECK(c2.data.gene.n_pos == 60);
}

TEST_CASE("config errors name the offending path", "[experiment]") {
  auto j = small_gene_config();
  j["atack"] = json::object();
  CHECK(error_of(j).find("unknown key 'atack'") != std::string::npos);

  j = small_gene_config();
  j["attack"]["bem"] = 3;
  CHECK(error_of(j).find("config.attack") != std::string::npos);

  j = small_gene_config();
  j["split"] = {{"train", 0.5}, {"val", 0.1}, {"test", 0.1}};
  CHECK_FALSE(error_of(j).empty());

  j = small_gene_config();
  j["models"][1]["name"] = "nb";
  CHECK(error_of(j).find("duplicate") != std::string::npos);

  j = small_gene_config();
  j["attack"]["tau"] = 1.5;
  CHECK_FALSE(error_of(j).empty());

  j = small_gene_config();
  j["data"]["path"] = "/no/such/file.fa";
  CHECK_FALSE(error_of(j).empty());

  j = small_gene_config();
  j["attack"]["method"] = "concat";
  CHECK_FALSE(error_of(j).empty());

  CHECK_FALSE(error_of(json::parse(R"({"task": "graph", "models": [{"type": "naive-bayes"}]})")).empty());
  CHECK_FALSE(error_of(json::parse(R"({"task": "tabular"})")).empty());
}

TEST_CASE("stratified split is disjoint, proportional and deterministic", "[experiment][property]") {
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < 1000; ++i) labels.push_back(i % 3 == 0 ? 1 : 0);
  const SplitSpec spec{0.8, 0.1, 0.1};
  const auto s = stratified_split(labels, spec, 42);
  std::set<std::size_t> all;
  for (const auto* v : {&s.train, &s.val, &s.test}) {
    CHECK(std::is_sorted(v->begin(), v->end()));
    all.insert(v->begin(), v->end());
  }
  CHECK(all.size() == labels.size());
  CHECK(s.train.size() + s.val.size() + s.test.size() == labels.size());

  for (std::size_t y = 0; y < 2; ++y) {
    auto count = [&](const std::vector<std::size_t>& v) {
      return static_cast<double>(std::count_if(v.begin(), v.end(), [&](std::size_t i) { return labels[i] == y; }));
    };
    const double n = count(s.train) + count(s.val) + count(s.test);
    CHECK(std::abs(count(s.train) / n - 0.8) < 0.01);
    CHECK(std::abs(count(s.test) / n - 0.1) < 0.01);
  }

  const auto s2 = stratified_split(labels, spec, 42);
  CHECK(s2.train == s.train);
  CHECK(s2.test == s.test);
  const auto s3 = stratified_split(labels, spec, 43);
  CHECK(s3.train != s.train);
}

TEST_CASE("empty results give header-only reports", "[experiment]") {
  ExperimentResults r;
  const auto dir = testutil::temp_dir("empty-report");
  emit_report(r, dir);
  CHECK(testutil::slurp(dir / "table.csv") == std::string(kTableHeader) + "\n");
  CHECK(testutil::slurp(dir / "results.jsonl").empty());
  CHECK(std::filesystem::exists(dir / "config-echo.json"));
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  CHECK_FALSE(std::filesystem::exists(dir / "transfer.csv"));
}

TEST_CASE("gene pipeline is deterministic and reports consistently", "[experiment]") {
  const auto cfg = parse_experiment_config(small_gene_config());
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  REQUIRE(a.table.rows.size() == 2);
  CHECK(table_csv(a) == table_csv(b));
  REQUIRE(a.transfer);
  CHECK(transfer_csv(*a.transfer) == transfer_csv(*b.transfer));

  for (const auto& row : a.table.rows) {
    CHECK(row.n_test == 8);
    CHECK(row.adv <= row.cln);
    CHECK(row.cln >= 0.0);
    CHECK(row.cln <= 1.0);
  }
  CHECK(a.transfer->clean[0] == Approx(a.table.rows[0].cln));
  CHECK(a.transfer->accuracy[0][0] == Approx(a.table.rows[0].adv));
  CHECK(a.transfer->accuracy[1][1] == Approx(a.table.rows[1].adv));

  const auto dir = testutil::temp_dir("gene-report");
  emit_report(a, dir);
  const auto jsonl = testutil::slurp(dir / "results.jsonl");
  CHECK(static_cast<std::size_t>(std::count(jsonl.begin(), jsonl.end(), '\n')) == a.log.size());
  CHECK(a.log.size() == 16);
  const auto table = testutil::slurp(dir / "table.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);

  // Every adversarial sequence encodes the same protein.
  const auto dna = prepare_sequences(cfg);
  for (const auto& adv : a.adversarial)
    for (std::size_t k = 0; k < adv.size(); ++k)
      CHECK(translate(adv[k]) == translate(dna.test.examples[k].tokens));
}

TEST_CASE("one model gives a 1x1 transfer matrix", "[experiment]") {
  auto j = small_gene_config();
  j["models"].erase(1);
  const auto cfg = parse_experiment_config(j);
  const auto r = run_experiment(cfg);
  CHECK_FALSE(r.transfer);
  const auto prep = prepare_sequences(cfg);
  LabeledDataset head = prep.test;
  head.examples.resize(r.adversarial[0].size());
  const auto t = transfer_matrix({detail::train_model(cfg.models[0], prep.train)}, r.adversarial, head);
  CHECK(t.models.size() == 1);
  REQUIRE(t.accuracy.size() == 1);
  CHECK(t.accuracy[0][0] == Approx(r.table.rows[0].adv));
  CHECK(t.clean[0] == Approx(r.table.rows[0].cln));
}

TEST_CASE("graph pipeline preserves degree multisets", "[experiment]") {
  const auto j = json::parse(R"({
    "task": "graph", "seed": 3,
    "data": {"graph": {"n_graphs": 60, "n_vertices": 12, "p_edge0": 0.3, "p_edge1": 0.3, "block_size": 5, "p_block": 0.8}},
    "models": [{"name": "lr", "type": "logistic", "featurizer": "graph-upper", "epochs": 50}],
    "attack": {"method": "beam", "beam": 1, "delta": 0.5, "max_examples": 6}
  })");
  const auto cfg = parse_experiment_config(j);
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  CHECK(table_csv(a) == table_csv(b));
  REQUIRE(a.adversarial_graphs.size() == 1);
  const auto prep = prepare_graphs(cfg);
  const auto test = subset(prep.graphs, prep.split.test);
  for (std::size_t k = 0; k < a.adversarial_graphs[0].size(); ++k) {
    CHECK(test[k].graph.degree_multiset() == a.adversarial_graphs[0][k].degree_multiset());
  }
}

TEST_CASE("theory pipeline writes one row per check", "[experiment]") {
  const auto j = json::parse(R"({
    "task": "theory", "seed": 5,
    "data": {"theory": {"D_docs": 100, "L": 20, "V": 300, "gamma": 0.5}},
    "theory": {"verifiers": ["closed-form", "lemma1"], "trials": 20, "T": [2, 3], "lemma_N": 500, "lemma_M": 500}
  })");
  const auto cfg = parse_experiment_config(j);
  const auto a = run_experiment(cfg);
  CHECK(a.reports.size() == 3);
  CHECK(a.log.size() == 3);
  std::size_t checks = 0;
  for (const auto& r : a.reports) checks += r.checks.size();
  const auto csv = table_csv(a);
  CHECK(csv.rfind(kTheoryHeader, 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == checks + 1);
  CHECK(csv == table_csv(run_experiment(cfg)));
}

TEST_CASE("trained models round trip through JSON", "[experiment]") {
  const auto cfg = parse_experiment_config(small_gene_config());
  const auto prep = prepare_sequences(cfg);
  for (const auto& spec : cfg.models) {
    const auto m = detail::train_model(spec, prep.train);
    const auto back = trained_model_from_json(json::parse(to_json(m).dump()));
    CHECK(back.name == m.name);
    CHECK(back.type == m.type);
    for (const auto& e : prep.test.examples) CHECK(back.predict(e.tokens) == m.predict(e.tokens));
  }
}

TEST_CASE("shipped configs parse", "[experiment]") {
  for (const auto& entry : std::filesystem::directory_iterator(SYNADV_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    INFO(entry.path().string());
    CHECK_NOTHROW(load_experiment_config(entry.path().string()));
  }
  CHECK_THROWS_AS(load_experiment_config("/no/such/config.json"), ConfigError);
}
