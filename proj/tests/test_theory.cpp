#include "catch_amalgamated.hpp"
#include "test_util.hpp"

using namespace synadv;

namespace {

// Phi(x) for x = -5, -4.5, ..., 0, from a 30-digit evaluation.
constexpr double kPhiNegative[] = {
    2.8665157187919391167e-7, 3.3976731247300604017e-6, 3.1671241833119921254e-5, 2.3262907903552503635e-4,
    1.3498980316300945267e-3, 6.209665325776135167e-3,  0.0227501319481792072,    0.066807201268858066004,
    0.15865525393145705141,   0.30853753872598689636,   0.5};

double phi_reference(int i) {  // i in 0..20 for x = -5 + i/2
  return i <= 10 ? kPhiNegative[i] : 1.0 - kPhiNegative[20 - i];
}

bool near(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

TEST_CASE("normal cdf against reference values") {
  for (int i = 0; i <= 20; ++i) {
    const double x = -5.0 + 0.5 * i;
    CHECK(std::abs(std_normal_cdf(x) - phi_reference(i)) <= 1e-7);
    CHECK(std::abs(std_normal_cdf(-x) - (1.0 - std_normal_cdf(x))) <= 1e-12);
  }
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std::abs(std_normal_cdf(1.96) - 0.97500210485177956586) <= 1e-12);
  double prev = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    CHECK(std_normal_cdf(x) >= prev);
    prev = std_normal_cdf(x);
  }
}

TEST_CASE("normal quantile") {
  for (int i = 0; i <= 20; ++i) {
    const double x = -5.0 + 0.5 * i;
    CHECK(std::abs(std_normal_quantile(std_normal_cdf(x)) - x) <= 1e-6);
  }
  CHECK(std::abs(std_normal_quantile(0.001) - -3.0902323061678135415) < 1e-9);
  CHECK(std::abs(std_normal_quantile(0.025) - -1.9599639845400542355) < 1e-9);
  CHECK(std::abs(std_normal_quantile(0.999999) - 4.7534243088228989482) < 1e-7);
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const double q = 1e-9 + (1 - 2e-9) * rng.uniform();
    CHECK(std::abs(std_normal_cdf(std_normal_quantile(q)) - q) <= 1e-10);
  }
  CHECK_THROWS_AS(std_normal_quantile(0.0), Error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), Error);
}

TEST_CASE("sigma_p") {
  CHECK(sigma_p(0.5, 1.0) == 1.0);
  CHECK(near(sigma_p(0.001, 10000), 0.31606961258558216545, 1e-14));
  CHECK(near(sigma_p(1.0 / 2000, 5000), 0.63229739838148946792, 1e-14));
  for (double p : {0.001, 0.01, 0.1})
    for (double D : {100.0, 1000.0, 10000.0}) {
      CHECK(sigma_p(p, D * 2) < sigma_p(p, D));
      CHECK(sigma_p(p * 2, D) < sigma_p(p, D));
    }
  CHECK_THROWS_AS(sigma_p(0.0, 10), Error);
  CHECK_THROWS_AS(sigma_p(0.5, 0.5), Error);
}

TEST_CASE("expected spurious count") {
  CHECK(near(expected_spurious_count(2000, 0.5, 0.001, 10000), 113.66555305196810917, 1e-9));
  CHECK(near(expected_spurious_count(2000, 0.5, 1.0 / 2000, 5000), 429.07989347890203252, 1e-9));
  CHECK(near(expected_spurious_count(2000, 0.5, 1.0 / 2000, 10000), 263.43307956249932001, 1e-9));
  CHECK(expected_spurious_count(100, 0.0, 0.01, 100) == 50.0);
  CHECK(expected_spurious_count(100, std::numeric_limits<double>::infinity(), 0.01, 100) == 0.0);
  CHECK(expected_spurious_count(100, 1e3, 0.01, 100) < 1e-12);
  for (double g : {0.0, 0.1, 1.0, 3.0})
    for (double D : {10.0, 1e3, 1e6}) {
      const double frac = expected_spurious_count(1000, g, 0.002, D) / 1000;
      CHECK(frac >= 0.0);
      CHECK(frac <= 0.5);
    }
}

TEST_CASE("insertion budget") {
  CHECK(std::abs(std_normal_quantile(std::pow(0.05, 0.001)) - 2.7487390629626344298) < 1e-9);
  CHECK(insertion_budget(0.1, 100, 0.5, 0.001, 10000, 0.05, 1000) == 6);
  CHECK(insertion_budget(0.1, 100, 0.0, 0.001, 10000, 0.05, 1000) == 0);
  try {
    insertion_budget(0.1, 100, 0.5, 0.001, 10000, 0.5, 1);
    FAIL("expected a vacuous-bound error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("vacuous") != std::string::npos);
  }
  std::size_t prev_eta = 0;
  for (double eta = 0.0; eta <= 3.0; eta += 0.1) {
    const auto b = insertion_budget(0.1, 100, eta, 0.001, 10000, 0.05, 1000);
    CHECK(b >= prev_eta);
    prev_eta = b;
  }
  std::size_t prev_r = 0;
  for (double r = 0.0; r < 0.9; r += 0.05) {
    const auto b = insertion_budget(r, 100, 0.5, 0.001, 10000, 0.05, 1000);
    CHECK(b >= prev_r);
    prev_r = b;
  }
}

TEST_CASE("binomial tail and synonym attack bound") {
  CHECK(binomial_tail_at_least(4, 0.5, 2) == Catch::Approx(11.0 / 16.0).epsilon(1e-14));
  CHECK(binomial_tail_at_least(10, 0.3, 0) == 1.0);
  CHECK(binomial_tail_at_least(10, 0.3, 11) == 0.0);
  CHECK(synonym_attack_success_lb(0, 0.1, 50, 1.0, 1.0 / 2000, 5000, 5) == 1.0);
  CHECK(near(synonym_attack_success_lb(5, 0.1, 50, 1.0, 1.0 / 2000, 5000, 5), 0.99999999712804635526, 1e-12));
  CHECK(synonym_attack_success_lb(3, 0.1, 50, 1.0, 1.0 / 2000, 5000, 0) == 0.0);
  CHECK(synonym_attack_success_lb(3, 0.1, 50, 1.0, 1.0 / 2000, 5000, 100000) == Catch::Approx(1.0));
  CHECK_THROWS_AS(synonym_attack_success_lb(46, 0.1, 50, 1.0, 1.0 / 2000, 5000, 2), Error);
  CHECK_THROWS_AS(synonym_attack_success_lb(1, 0.0, 200000, 1.0, 1.0 / 2000, 5000, 2), Error);
}

TEST_CASE("synonym attack bound is monotone in S, eta and r over a grid") {
  for (auto [p, D] : {std::pair{1.0 / 2000, 5000.0}, {1.0 / 500, 2000.0}, {0.01, 1000.0}})
    for (std::size_t L : {20u, 50u})
      for (double eta : {0.25, 0.5, 1.0, 2.0})
        for (double r : {0.05, 0.1, 0.2})
          for (std::size_t S : {1u, 2u, 5u})
            for (std::size_t T : {1u, 2u, 3u, 5u, 8u}) {
              const double v = synonym_attack_success_lb(T, r, L, eta, p, D, S);
              CHECK(v >= 0.0);
              CHECK(v <= 1.0);
              CHECK(synonym_attack_success_lb(T, r, L, eta, p, D, S + 1) >= v - 1e-12);
              CHECK(synonym_attack_success_lb(T, r, L, 2 * eta, p, D, S) <= v + 1e-12);
              CHECK(synonym_attack_success_lb(T, 1.5 * r, L, eta, p, D, S) <= v + 1e-12);
            }
}

TEST_CASE("synonym attack bound falls in T past the binomial mode") {
  const double t3 = synonym_attack_success_lb(3, 0.2, 20, 0.25, 0.01, 1000, 1);
  const double t4 = synonym_attack_success_lb(4, 0.2, 20, 0.25, 0.01, 1000, 1);
  CHECK(near(t3, 0.738905762959026927, 1e-10));
  CHECK(near(t4, 0.717484860346965114, 1e-10));
  CHECK(t4 < t3);
}

TEST_CASE("hoeffding bound") {
  CHECK(near(hoeffding_failure_ub(100, 0.5, 40), 0.13533528323661269189, 1e-14));
  CHECK(hoeffding_failure_ub(100, 0.5, 50) == 1.0);
  try {
    hoeffding_failure_ub(100, 0.5, 60);
    FAIL("expected a validity-region error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("validity") != std::string::npos);
  }
  for (std::size_t n = 1; n <= 30; ++n)
    for (double s : {0.2, 0.5, 0.9})
      for (std::size_t k = 0; static_cast<double>(k) <= n * s; ++k)
        CHECK(hoeffding_failure_ub(static_cast<double>(n), s, static_cast<double>(k)) >= binomial_cdf(n, s, k) - 1e-12);
}

TEST_CASE("lemma 1 Monte Carlo") {
  const auto r = mc_verify_lemma1(5000, 5000, 0.01, 0.01, 10000, 1);
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].predicted == 0.0);
  CHECK(r.checks[1].predicted == Catch::Approx(0.0396));
  CHECK(r.pass());
  const auto half = mc_verify_lemma1(10000, 5000, 0.01, 0.01, 10, 1);
  CHECK(half.checks[1].predicted == Catch::Approx(0.0396 * 0.75));
  CHECK(to_json(r).at("pass") == true);
}

TEST_CASE("lemma 2 Monte Carlo") {
  const auto r = mc_verify_lemma2(1000, 0.3, 0.05, 2000, 2);
  CHECK(r.pass());
  CHECK(r.checks[0].empirical >= 0.9);
}

TEST_CASE("spurious-token census") {
  TheoryParams tp;
  tp.D_docs = 200;
  tp.gamma = 0.5;
  const auto r = mc_verify_spurious(tp, 10, 3);
  INFO(to_json(r).dump());
  CHECK(r.pass());
  tp.gamma = 50.0;
  const auto none = mc_verify_spurious(tp, 2, 3);
  CHECK(none.checks[0].empirical == 0.0);
  CHECK(none.checks[0].predicted < 1e-12);
  TheoryParams more = tp;
  more.gamma = 0.5;
  more.D_docs = 2000;
  TheoryParams fewer = more;
  fewer.D_docs = 1000;
  CHECK(mc_verify_spurious(fewer, 3, 4).checks[0].empirical > mc_verify_spurious(more, 3, 4).checks[0].empirical);
}

TEST_CASE("synonym attack Monte Carlo") {
  TheoryParams tp;
  tp.D_docs = 1000;
  tp.V_inf = 40;
  tp.r = 0.1;
  tp.eta = 1.0;
  tp.S = 5;
  const auto r = mc_verify_synonym_attack(tp, 5, 2, 5, 200);
  INFO(to_json(r).dump());
  CHECK(r.pass());
  double prev = -1.0;
  for (std::size_t T : {1u, 3u, 5u}) {
    const double rate = mc_verify_synonym_attack(tp, T, 1, 6, 200).checks[0].empirical;
    CHECK(rate >= prev);
    prev = rate;
  }
  tp.S = 0;
  const auto zero = mc_verify_synonym_attack(tp, 5, 1, 5, 100);
  CHECK(zero.checks[0].empirical == 0.0);
  CHECK(zero.checks[0].predicted == 0.0);
}

TEST_CASE("closed-form report") {
  TheoryParams tp;
  tp.D_docs = 200;
  tp.V_inf = 20;
  tp.r = 0.1;
  tp.S = 5;
  const auto r = closed_form_report(tp, 5);
  REQUIRE(r.checks.size() == 4);
  CHECK(r.checks[0].name == "sigma_p");
  CHECK(r.checks[0].predicted == sigma_p(tp.p, 5000));
  CHECK(r.pass());
  CHECK(parse_token_count_mode("total") == TokenCountMode::total);
  CHECK_THROWS_AS(parse_token_count_mode("x"), ConfigError);
}
