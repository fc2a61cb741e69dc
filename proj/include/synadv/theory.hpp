#pragma once
// Closed-form spurious-token bounds and their Monte Carlo checks against the
// two-class token model of synthgen.hpp.
//
// Normal CDF: Phi(x) = erfc(-x/sqrt 2)/2 (libm erfc, ~1e-16 relative).
// Quantile: Acklam's rational approximation, polished by Newton steps and,
// if needed, bisection until |Phi(x) - q| <= 1e-10.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "synadv/attack.hpp"
#include "synadv/models.hpp"
#include "synadv/rng.hpp"
#include "synadv/synthgen.hpp"

namespace synadv {

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

inline double std_normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error("std_normal_quantile: q must lie in (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double lo = 0.02425;
  double x;
  if (q < lo) {
    const double t = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  } else if (q <= 1.0 - lo) {
    const double s = q - 0.5, t = s * s;
    x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * s /
        (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
  } else {
    const double t = std::sqrt(-2.0 * std::log1p(-q));
    x = -(((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  }
  for (int it = 0; it < 4; ++it) {
    const double pdf = std_normal_pdf(x);
    if (!(pdf > 0.0)) break;
    x -= (std_normal_cdf(x) - q) / pdf;
  }
  if (std::abs(std_normal_cdf(x) - q) > 1e-10) {
    double l = -40.0, h = 40.0;
    for (int it = 0; it < 200 && std::abs(std_normal_cdf(x) - q) > 1e-10; ++it) {
      x = 0.5 * (l + h);
      (std_normal_cdf(x) < q ? l : h) = x;
    }
  }
  return x;
}

// sigma(p) = sqrt((1/p - 1)/D)
inline double sigma_p(double p, double D) {
  if (!(p > 0.0 && p < 1.0)) throw Error("sigma_p: p must lie in (0,1)");
  if (!(D >= 1.0)) throw Error("sigma_p: D must be >= 1");
  return std::sqrt((1.0 / p - 1.0) / D);
}

// V (1 - Phi(gamma / sigma(p)))
inline double expected_spurious_count(double V, double gamma, double p, double D) {
  if (!(V >= 0.0)) throw Error("expected_spurious_count: V must be >= 0");
  if (!(gamma >= 0.0)) throw Error("expected_spurious_count: gamma must be >= 0");
  const double s = sigma_p(p, D);
  if (std::isinf(gamma)) return 0.0;
  return V * std_normal_cdf(-gamma / s);
}

// ceil(r L eta / (sigma(p) Phi^-1(rho^(1/V))))
inline std::size_t insertion_budget(double r, double L, double eta, double p, double D, double rho, double V) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error("insertion_budget: rho must lie in (0,1)");
  if (!(V >= 1.0)) throw Error("insertion_budget: V must be >= 1");
  if (!(eta >= 0.0) || !(r >= 0.0) || !(L >= 0.0)) throw Error("insertion_budget: r, L, eta must be >= 0");
  const double root = std::exp(std::log(rho) / V);
  if (!(root > 0.5)) throw Error("bound vacuous for these parameters");
  const double value = r * L * eta / (sigma_p(p, D) * std_normal_quantile(root));
  return static_cast<std::size_t>(std::ceil(value));
}

// P[Bin(n, s) >= T], summed in log space.
inline double binomial_tail_at_least(std::size_t n, double s, std::size_t T) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error("binomial tail: probability must lie in [0,1]");
  if (T == 0) return 1.0;
  if (T > n) return 0.0;
  if (s == 0.0) return 0.0;
  if (s == 1.0) return 1.0;
  const double ls = std::log(s), lf = std::log1p(-s);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  double m = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(n - T + 1);
  for (std::size_t t = T; t <= n; ++t) {
    const double lt = lgn - std::lgamma(static_cast<double>(t) + 1.0) -
                      std::lgamma(static_cast<double>(n - t) + 1.0) + static_cast<double>(t) * ls +
                      static_cast<double>(n - t) * lf;
    terms.push_back(lt);
    m = std::max(m, lt);
  }
  double sum = 0.0;
  for (double lt : terms) sum += std::exp(lt - m);
  return std::min(1.0, std::exp(m + std::log(sum)));
}

// P[Bin(n, s) <= k] by direct pmf summation.
inline double binomial_cdf(std::size_t n, double s, std::size_t k) {
  if (k >= n) return 1.0;
  return 1.0 - binomial_tail_at_least(n, s, k + 1);
}

inline constexpr std::size_t kMaxBinomialSupport = 100000;

// sum_{t=T}^{n} C(n,t) (1-phi)^t phi^(n-t), n = (1-r)L,
// phi = Phi(r L eta / (sqrt 2 T sigma(p)))^S.
inline double synonym_attack_success_lb(std::size_t T, double r, std::size_t L, double eta, double p, double D,
                                        std::size_t S) {
  if (!(r >= 0.0 && r < 1.0)) throw Error("synonym_attack_success_lb: r must lie in [0,1)");
  if (!(eta >= 0.0)) throw Error("synonym_attack_success_lb: eta must be >= 0");
  const auto n = static_cast<std::size_t>(std::llround((1.0 - r) * static_cast<double>(L)));
  if (n > kMaxBinomialSupport) throw Error("synonym_attack_success_lb: (1-r)L exceeds 1e5");
  if (T > n) throw Error("synonym_attack_success_lb: T must not exceed (1-r)L");
  if (T == 0) return 1.0;
  const double arg = r * static_cast<double>(L) * eta / (std::numbers::sqrt2 * static_cast<double>(T) * sigma_p(p, D));
  const double phi = std::pow(std_normal_cdf(arg), static_cast<double>(S));
  return binomial_tail_at_least(n, 1.0 - phi, T);
}

// exp(-2 (n p - k)^2 / n), valid for k <= n p.
inline double hoeffding_failure_ub(double n, double success_p, double k) {
  if (!(n > 0.0)) throw Error("hoeffding_failure_ub: n must be positive");
  if (!(success_p >= 0.0 && success_p <= 1.0)) throw Error("hoeffding_failure_ub: p must lie in [0,1]");
  const double mean = n * success_p;
  if (k > mean * (1.0 + 1e-12)) throw Error("outside Hoeffding validity region (k > n p)");
  const double gap = std::max(0.0, mean - k);
  return std::exp(-2.0 * gap * gap / n);
}

// ---------------------------------------------------------------------------
// Verification reports.

enum class CheckKind { within, at_least, info };

struct Check {
  std::string name;
  double predicted = 0.0;
  double empirical = 0.0;
  double standard_error = 0.0;
  double tolerance = 0.0;
  CheckKind kind = CheckKind::within;

  bool pass() const {
    switch (kind) {
      case CheckKind::within: return std::abs(empirical - predicted) <= tolerance;
      case CheckKind::at_least: return empirical >= predicted - tolerance;
      case CheckKind::info: return true;
    }
    return false;
  }
};

struct VerificationReport {
  std::string name;
  std::vector<Check> checks;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  nlohmann::json details = nlohmann::json::object();

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
};

inline std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::within: return "within";
    case CheckKind::at_least: return "at-least";
    case CheckKind::info: return "info";
  }
  return "?";
}

inline nlohmann::json to_json(const VerificationReport& r) {
  auto checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"predicted", c.predicted},
                      {"empirical", c.empirical},
                      {"standard_error", c.standard_error},
                      {"tolerance", c.tolerance},
                      {"kind", to_string(c.kind)},
                      {"pass", c.pass()}});
  return {{"name", r.name}, {"trials", r.trials}, {"seed", r.seed},
          {"pass", r.pass()}, {"checks", checks},  {"details", r.details}};
}

// Which token total stands in for D in sigma(p).
enum class TokenCountMode { per_class, total };

inline std::string to_string(TokenCountMode m) { return m == TokenCountMode::per_class ? "per-class" : "total"; }

inline TokenCountMode parse_token_count_mode(std::string_view s) {
  if (s == "per-class") return TokenCountMode::per_class;
  if (s == "total") return TokenCountMode::total;
  throw ConfigError("unknown token count mode '" + std::string(s) + "' (per-class | total)");
}

inline double token_count(const TheoryParams& tp, TokenCountMode mode) {
  const double total = static_cast<double>(tp.total_tokens());
  return mode == TokenCountMode::per_class ? total / 2.0 : total;
}

namespace detail {

struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double se() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

inline double rate_se(double rate, std::size_t n) {
  return n > 0 ? std::sqrt(rate * (1.0 - rate) / static_cast<double>(n)) : 0.0;
}

// Held-out documents from the same model, on a stream disjoint from training.
inline TheoryDataset held_out(const TheoryParams& tp, std::size_t docs, std::uint64_t seed, std::uint64_t trial) {
  TheoryParams t = tp;
  t.D_docs = docs;
  t.S = 0;
  return gen_theory_dataset(t, Rng::for_stream(seed, 0x100000000ULL + trial).next());
}

}  // namespace detail

// log((X/N)/(Y/M)), X ~ Bin(N,p), Y ~ Bin(M,q); zero draws are redrawn.
// Closed-form quantities for one parameter set, as info checks.
inline VerificationReport closed_form_report(const TheoryParams& tp, std::size_t T,
                                             TokenCountMode mode = TokenCountMode::per_class) {
  tp.validate();
  VerificationReport rep;
  rep.name = "closed-form";
  const double D = token_count(tp, mode);
  const double V = static_cast<double>(tp.V);
  const double sigma = sigma_p(tp.p, D);
  auto info = [&](std::string name, double v) { rep.checks.push_back({std::move(name), v, v, 0.0, 0.0, CheckKind::info}); };
  info("sigma_p", sigma);
  info("expected_spurious_count", expected_spurious_count(V, tp.gamma, tp.p, D));
  try {
    info("insertion_budget", static_cast<double>(
                                 insertion_budget(tp.r, static_cast<double>(tp.L), tp.eta, tp.p, D, tp.rho, V)));
  } catch (const Error& e) {
    rep.details["insertion_budget"] = e.what();
  }
  if (tp.S > 0)
    info("synonym_attack_success_lb", synonym_attack_success_lb(T, tp.r, tp.L, tp.eta, tp.p, D, tp.S));
  rep.details["params"] = tp;
  rep.details["T"] = T;
  rep.details["token_count_mode"] = to_string(mode);
  return rep;
}

inline VerificationReport mc_verify_lemma1(std::size_t N, std::size_t M, double p, double q, std::size_t trials,
                                           std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) throw Error("lemma1: p, q must lie in (0,1)");
  if (N == 0 || M == 0 || trials < 2) throw Error("lemma1: N, M must be positive and trials >= 2");
  detail::RunningStats st;
  std::size_t rejected = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::for_stream(seed, t);
    std::uint64_t x = 0, y = 0;
    while ((x = rng.binomial(N, p)) == 0) ++rejected;
    while ((y = rng.binomial(M, q)) == 0) ++rejected;
    st.add(std::log((static_cast<double>(x) / static_cast<double>(N)) /
                    (static_cast<double>(y) / static_cast<double>(M))));
  }
  const double mean_pred = std::log(p / q);
  const double var_pred = (1.0 - p) / (static_cast<double>(N) * p) + (1.0 - q) / (static_cast<double>(M) * q);
  VerificationReport r{"lemma1", {}, trials, seed, {}};
  r.checks.push_back({"mean", mean_pred, st.mean, st.se(), 4.0 * st.se(), CheckKind::within});
  r.checks.push_back({"variance", var_pred, st.variance(), 0.0, 0.1 * var_pred, CheckKind::within});
  r.details = {{"N", N}, {"M", M}, {"p", p}, {"q", q}, {"zero_draws_rejected", rejected}};
  return r;
}

// Max of n iid N(0, sigma^2) exceeds sigma Phi^-1(rho^(1/n)) with probability
// 1 - rho.
inline VerificationReport mc_verify_lemma2(std::size_t n, double sigma, double rho, std::size_t trials,
                                           std::uint64_t seed) {
  if (n == 0 || !(sigma > 0.0) || !(rho > 0.0 && rho < 1.0) || trials == 0)
    throw Error("lemma2: invalid parameters");
  const double threshold = sigma * std_normal_quantile(std::exp(std::log(rho) / static_cast<double>(n)));
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::for_stream(seed, t);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, sigma * rng.normal());
    hits += m > threshold ? 1 : 0;
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(trials);
  const double se = detail::rate_se(1.0 - rho, trials);
  VerificationReport r{"lemma2", {}, trials, seed, {}};
  r.checks.push_back({"exceed_rate", 1.0 - rho, rate, se, 3.0 * se, CheckKind::at_least});
  r.details = {{"n", n}, {"sigma", sigma}, {"rho", rho}, {"threshold", threshold}};
  return r;
}

// Spurious-token census: NB with alpha = 0 on each synthetic dataset; tokens
// with a zero count in either class are excluded and reported.
inline VerificationReport mc_verify_spurious(const TheoryParams& tp, std::size_t trials, std::uint64_t seed,
                                             TokenCountMode mode = TokenCountMode::per_class) {
  tp.validate();
  if (trials == 0) throw Error("spurious: trials must be positive");
  detail::RunningStats counts, excluded;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto ds = gen_theory_dataset(tp, Rng::for_stream(seed, t).next());
    const auto nb = train_naive_bayes(ds.data, {false, 0.0});
    std::size_t c = 0, z = 0;
    for (std::size_t l = 0; l < tp.V; ++l) {
      if (nb.count(l, 0) == 0.0 || nb.count(l, 1) == 0.0) {
        ++z;
        continue;
      }
      c += nb.log_ratio(l) > tp.gamma ? 1 : 0;
    }
    counts.add(static_cast<double>(c));
    excluded.add(static_cast<double>(z));
  }
  const double V = static_cast<double>(tp.V);
  const double D = token_count(tp, mode);
  const double pred = expected_spurious_count(V, tp.gamma, tp.p, D);
  const double q = pred / V;
  const double tol = std::max(0.2 * pred, 3.0 * std::sqrt(V * q * (1.0 - q)));
  VerificationReport r{"spurious", {}, trials, seed, {}};
  r.checks.push_back({"spurious_count", pred, counts.mean, counts.se(), tol, CheckKind::within});
  r.details = {{"params", tp},
               {"token_count_mode", to_string(mode)},
               {"D", D},
               {"sigma", sigma_p(tp.p, D)},
               {"predicted_per_class_D", expected_spurious_count(V, tp.gamma, tp.p, token_count(tp, TokenCountMode::per_class))},
               {"predicted_total_D", expected_spurious_count(V, tp.gamma, tp.p, token_count(tp, TokenCountMode::total))},
               {"mean_zero_count_tokens_excluded", excluded.mean}};
  return r;
}

// Class-0 held-out documents that NB (alpha = 1) classifies as 0 are attacked
// by swapping T uninformative tokens to synonyms: each position's best synonym
// by delta gain, the T largest positive gains applied.
inline VerificationReport mc_verify_synonym_attack(const TheoryParams& tp, std::size_t T, std::size_t trials,
                                                   std::uint64_t seed, std::size_t test_docs = 200,
                                                   TokenCountMode mode = TokenCountMode::per_class) {
  tp.validate();
  const std::size_t n_un = tp.L - tp.informative_per_doc();
  if (T > n_un) throw Error("synonym attack: T must not exceed (1-r)L");
  std::size_t attacked = 0, flipped = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto ds = gen_theory_dataset(tp, Rng::for_stream(seed, t).next());
    const auto nb = train_naive_bayes(ds.data, {false, 1.0});
    const auto test = detail::held_out(tp, test_docs, seed, t);
    for (const auto& e : test.data.examples) {
      if (e.label != 0 || nb.predict(e.tokens) != 0) continue;
      ++attacked;
      std::vector<std::pair<double, std::size_t>> gains;
      std::vector<TokenId> best_syn(e.tokens.size());
      for (std::size_t i = 0; i < e.tokens.size(); ++i) {
        const TokenId cur = e.tokens[i];
        if (ds.informative[cur]) continue;
        double best = 0.0;
        for (TokenId s : ds.synonyms_of(cur)) {
          const double g = nb.log_ratio(s) - nb.log_ratio(cur);
          if (g > best) {
            best = g;
            best_syn[i] = s;
          }
        }
        if (best > 0.0) gains.emplace_back(best, i);
      }
      std::stable_sort(gains.begin(), gains.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      TokenSequence adv = e.tokens;
      for (std::size_t k = 0; k < gains.size() && k < T; ++k) adv[gains[k].second] = best_syn[gains[k].second];
      flipped += nb.predict(adv) == 1 ? 1 : 0;
    }
  }
  const double rate = attacked ? static_cast<double>(flipped) / static_cast<double>(attacked) : 0.0;
  const double se = detail::rate_se(rate, attacked);
  const double D = token_count(tp, mode);
  const double bound = synonym_attack_success_lb(T, tp.r, tp.L, tp.eta, tp.p, D, tp.S);
  VerificationReport r{"synonym-attack", {}, trials, seed, {}};
  r.checks.push_back({"flip_rate", bound, rate, se, 2.0 * se, CheckKind::at_least});
  r.details = {{"params", tp},
               {"T", T},
               {"attacked_documents", attacked},
               {"token_count_mode", to_string(mode)},
               {"D", D},
               {"bound_per_class_D", synonym_attack_success_lb(T, tp.r, tp.L, tp.eta, tp.p, token_count(tp, TokenCountMode::per_class), tp.S)},
               {"bound_total_D", synonym_attack_success_lb(T, tp.r, tp.L, tp.eta, tp.p, token_count(tp, TokenCountMode::total), tp.S)}};
  return r;
}

// Appends insertion_budget(...) of the highest-delta uninformative tokens to
// held-out class-0 documents that NB (alpha = 1) classifies as 0.
inline VerificationReport mc_verify_concatenative(const TheoryParams& tp, std::size_t trials, std::uint64_t seed,
                                                  std::size_t test_docs = 200,
                                                  TokenCountMode mode = TokenCountMode::per_class) {
  tp.validate();
  const double D = token_count(tp, mode);
  const std::size_t T = insertion_budget(tp.r, static_cast<double>(tp.L), tp.eta, tp.p, D, tp.rho,
                                         static_cast<double>(tp.V));
  std::size_t attacked = 0, flipped = 0, shortfall = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto ds = gen_theory_dataset(tp, Rng::for_stream(seed, t).next());
    const auto nb = train_naive_bayes(ds.data, {false, 1.0});
    std::vector<std::uint8_t> allowed(ds.data.vocabulary.size(), 0);
    for (std::size_t l = 0; l < tp.V; ++l) allowed[l] = 1;
    const auto test = detail::held_out(tp, test_docs, seed, t);
    for (const auto& e : test.data.examples) {
      if (e.label != 0 || nb.predict(e.tokens) != 0) continue;
      ++attacked;
      const auto adv = concatenative_attack(e.tokens, nb, T, 1, 0.0, &allowed);
      shortfall = std::max(shortfall, adv.shortfall);
      flipped += nb.predict(adv.x_adv) == 1 ? 1 : 0;
    }
  }
  const double rate = attacked ? static_cast<double>(flipped) / static_cast<double>(attacked) : 0.0;
  VerificationReport r{"concatenative", {}, trials, seed, {}};
  r.checks.push_back({"flip_rate", 1.0 - tp.rho - 0.05, rate, detail::rate_se(rate, attacked), 0.0, CheckKind::at_least});
  r.details = {{"params", tp},
               {"T", T},
               {"attacked_documents", attacked},
               {"max_shortfall", shortfall},
               {"token_count_mode", to_string(mode)},
               {"D", D},
               {"budget_per_class_D", insertion_budget(tp.r, static_cast<double>(tp.L), tp.eta, tp.p, token_count(tp, TokenCountMode::per_class), tp.rho, static_cast<double>(tp.V))},
               {"budget_total_D", insertion_budget(tp.r, static_cast<double>(tp.L), tp.eta, tp.p, token_count(tp, TokenCountMode::total), tp.rho, static_cast<double>(tp.V))}};
  return r;
}

// For each NB-spurious token (delta_l > gamma, uninformative), does inserting
// it raise a logistic model's class-1 margin by at least gamma? Reported, not
// asserted.
inline VerificationReport check_assumption1_logistic(const TheoryParams& tp, std::uint64_t seed,
                                                     const LogisticHyper& hyper = {}) {
  tp.validate();
  const auto ds = gen_theory_dataset(tp, seed);
  const auto nb = train_naive_bayes(ds.data, {false, 1.0});
  const auto lr = train_logistic(ds.data, Featurizer::bag_of_words(ds.data.vocabulary.size()), hyper);
  std::size_t spurious = 0, moved = 0;
  for (std::size_t l = 0; l < tp.V; ++l) {
    if (!(nb.log_ratio(l) > tp.gamma)) continue;
    ++spurious;
    moved += lr.linear.weight(1, l) - lr.linear.weight(0, l) >= tp.gamma ? 1 : 0;
  }
  const double frac = spurious ? static_cast<double>(moved) / static_cast<double>(spurious) : 0.0;
  VerificationReport r{"assumption1-logistic", {}, 1, seed, {}};
  r.checks.push_back({"fraction_moving_margin_by_gamma", 1.0, frac, detail::rate_se(frac, spurious), 0.0, CheckKind::info});
  r.details = {{"params", tp}, {"spurious_tokens", spurious}, {"moved", moved}};
  return r;
}

}  // namespace synadv
