#include "catch_amalgamated.hpp"
#include "test_util.hpp"

using namespace synadv;

namespace {

double nb_test_accuracy(const LabeledDataset& d, double train_frac = 0.8) {
  const std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(d.size()));
  LabeledDataset train{d.vocabulary, {d.examples.begin(), d.examples.begin() + static_cast<std::ptrdiff_t>(n_train)}, 2};
  LabeledDataset test{d.vocabulary, {d.examples.begin() + static_cast<std::ptrdiff_t>(n_train), d.examples.end()}, 2};
  return accuracy(train_naive_bayes(train), test);
}

}  // namespace

TEST_CASE("theory generator validates its budgets") {
  TheoryParams tp;
  tp.r = 0.1;
  CHECK_THROWS_AS(tp.validate(), ConfigError);  // informative tokens but V_inf = 0
  tp.V_inf = 3;
  CHECK_THROWS_AS(tp.validate(), ConfigError);  // odd V_inf
  tp.V_inf = 4;
  tp.validate();
  tp.p = 0.1 / 2000;
  try {
    tp.validate();
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("theory generator structure") {
  TheoryParams tp;
  tp.D_docs = 100;
  tp.V = 300;
  tp.V_inf = 10;
  tp.r = 0.2;
  tp.p = 1.0 / 300;
  tp.S = 2;
  const auto ds = gen_theory_dataset(tp, 3);
  CHECK(ds.data.size() == 100);
  for (const auto& e : ds.data.examples) {
    CHECK(e.tokens.size() == tp.L);
    std::size_t inf = 0;
    for (TokenId t : e.tokens) inf += ds.informative[t];
    CHECK(inf == 10);
  }
  CHECK(ds.synonym_groups.size() == 100);
  std::set<TokenId> seen;
  for (const auto& g : ds.synonym_groups) {
    CHECK(g.size() == 3);
    for (TokenId t : g) {
      CHECK(t < tp.V);
      CHECK(seen.insert(t).second);
      CHECK(ds.synonyms_of(t).size() == 2);
    }
  }
  // Favoured-class ratio is exactly e^eta.
  for (std::size_t j = 0; j < tp.V_inf; ++j) {
    const auto& p = ds.class_probability[tp.V + j];
    const double ratio = j < tp.V_inf / 2 ? p[0] / p[1] : p[1] / p[0];
    CHECK(ratio == Catch::Approx(std::exp(tp.eta)).epsilon(1e-14));
  }
  double total0 = 0.0, total1 = 0.0;
  for (const auto& p : ds.class_probability) {
    total0 += p[0];
    total1 += p[1];
  }
  CHECK(total0 == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(total1 == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theory generator is a pure function of params and seed") {
  TheoryParams tp;
  tp.D_docs = 50;
  tp.S = 3;
  const auto a = gen_theory_dataset(tp, 9), b = gen_theory_dataset(tp, 9), c = gen_theory_dataset(tp, 10);
  CHECK(a.data == b.data);
  CHECK(a.synonym_groups == b.synonym_groups);
  CHECK_FALSE(a.data == c.data);
  CHECK(theory_metadata(a, 9).dump() == theory_metadata(b, 9).dump());
}

TEST_CASE("theory token frequencies pass a chi-square goodness-of-fit test") {
  TheoryParams tp;
  tp.D_docs = 2000;
  tp.L = 500;
  tp.V = 200;
  tp.V_inf = 20;
  tp.r = 0.1;
  tp.p = 1.0 / 200;
  const auto ds = gen_theory_dataset(tp, 17);
  const std::size_t V = tp.V + tp.V_inf;
  for (std::size_t y = 0; y < 2; ++y) {
    std::vector<double> counts(V, 0.0);
    double n = 0.0;
    for (const auto& e : ds.data.examples)
      if (e.label == y)
        for (TokenId t : e.tokens) {
          counts[t] += 1.0;
          n += 1.0;
        }
    double chi2 = 0.0;
    for (std::size_t l = 0; l < V; ++l) {
      const double expect = n * ds.class_probability[l][y];
      chi2 += (counts[l] - expect) * (counts[l] - expect) / expect;
    }
    // chi-square 0.999 quantile with 219 degrees of freedom.
    CHECK(chi2 < 289.408351583794);
  }
}

TEST_CASE("theory data without informative tokens carries no signal") {
  TheoryParams tp;
  tp.D_docs = 2000;
  tp.V = 500;
  tp.p = 1.0 / 500;
  const double acc = nb_test_accuracy(gen_theory_dataset(tp, 4).data);
  CHECK(std::abs(acc - 0.5) < 0.08);
}

TEST_CASE("strong informative tokens are learnable") {
  TheoryParams tp;
  tp.D_docs = 2000;
  tp.L = 50;
  tp.V_inf = 20;
  tp.r = 0.1;
  tp.eta = 2.0;
  const double acc = nb_test_accuracy(gen_theory_dataset(tp, 5).data);
  CHECK(acc > 0.90);
}

TEST_CASE("gene generator construction") {
  GeneParams gp{200, 200, 100, 0.5};
  const auto g = gen_gene_dataset(gp, 1);
  REQUIRE(g.data.size() == 400);
  CHECK(g.corrupted_positions.size() == 200);
  std::size_t neg = 0;
  for (const auto& e : g.data.examples) {
    CHECK(e.tokens.size() == 300);
    if (e.label == 1) {
      const auto protein = translate(e.tokens);
      CHECK(protein.find('*') == std::string::npos);
    } else {
      const auto& pos = g.corrupted_positions[neg++];
      CHECK(pos.size() == 150);
      CHECK(std::set<std::size_t>(pos.begin(), pos.end()).size() == 150);
    }
  }
  CHECK(gp.corrupted_nucleotides() == 150);
  CHECK(GeneParams{1, 1, 7, 0.3}.corrupted_nucleotides() == 6);  // round(6.3)
}

TEST_CASE("codon usage table is a skewed distribution over sense codons") {
  const auto u = zipf_codon_usage();
  double total = 0.0;
  for (CodonIndex c = 0; c < 64; ++c) {
    if (is_stop_codon(c)) CHECK(u[c] == 0.0);
    total += u[c];
  }
  CHECK(total == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(u[codon_index(kCodonUsageRanking[0])] == Catch::Approx(2.0 * u[codon_index(kCodonUsageRanking[1])]));
  std::set<std::string_view> ranked(kCodonUsageRanking.begin(), kCodonUsageRanking.end());
  CHECK(ranked.size() == 61);
}

TEST_CASE("gene task with zero corruption is unlearnable") {
  const auto g = gen_gene_dataset(GeneParams{1000, 1000, 100, 0.0}, 2).data;
  Rng rng(1);
  auto ex = g.examples;
  rng.shuffle(ex);
  LabeledDataset train{g.vocabulary, {ex.begin(), ex.begin() + 1600}, 2};
  LabeledDataset test{g.vocabulary, {ex.begin() + 1600, ex.end()}, 2};
  const auto nb = train_naive_bayes(train, Featurizer::kmer(4));
  CHECK(std::abs(accuracy(nb, test) - 0.5) < 0.08);
}

TEST_CASE("gene generator is deterministic") {
  GeneParams gp{50, 50, 30, 0.2};
  CHECK(gen_gene_dataset(gp, 8).data == gen_gene_dataset(gp, 8).data);
  CHECK_FALSE(gen_gene_dataset(gp, 8).data == gen_gene_dataset(gp, 9).data);
}

TEST_CASE("graph generator output is valid and learnable") {
  const auto graphs = gen_graph_dataset(GraphParams{}, 3);
  REQUIRE(graphs.size() == 800);
  for (const auto& g : graphs) CHECK(g.graph.is_valid());
  std::vector<LabeledGraph> shuffled = graphs;
  Rng rng(2);
  rng.shuffle(shuffled);
  std::vector<LabeledGraph> train(shuffled.begin(), shuffled.begin() + 640), test(shuffled.begin() + 640, shuffled.end());
  const auto m = train_logistic(std::span<const LabeledGraph>(train));
  CHECK(accuracy(m, test) >= 0.80);

  const auto flat = gen_graph_dataset(GraphParams{400, 20, 0.3, 0.3, 0, 0.7}, 3);
  std::vector<LabeledGraph> fs = flat;
  rng.shuffle(fs);
  std::vector<LabeledGraph> ftrain(fs.begin(), fs.begin() + 640), ftest(fs.begin() + 640, fs.end());
  const auto fm = train_logistic(std::span<const LabeledGraph>(ftrain));
  CHECK(std::abs(accuracy(fm, ftest) - 0.5) < 0.1);
}

TEST_CASE("synthetic embeddings cluster synonym groups") {
  const Vocabulary vocab({"a", "b", "c", "d", "e"});
  const auto t = gen_synthetic_embeddings(vocab, 8, {{0, 1}, {2, 3}}, 4);
  CHECK(t.distance(0, 1) < t.distance(0, 2));
  CHECK(t.distance(0, 1) < t.distance(0, 4));
  const auto nn = nearest_neighbors(t, vocab, 0, 1);
  REQUIRE(nn.size() == 1);
  CHECK(nn[0] == 1);
  CHECK(t == gen_synthetic_embeddings(vocab, 8, {{0, 1}, {2, 3}}, 4));
  CHECK_THROWS_AS(gen_synthetic_embeddings(vocab, 1, {}, 4), ConfigError);
}
