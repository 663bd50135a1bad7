#include "doctest.h"
#include "oracles.hpp"

#include "mixkde/density.hpp"
#include "mixkde/error.hpp"
#include "mixkde/estimator.hpp"
#include "mixkde/lower_bound.hpp"
#include "mixkde/risk.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace mixkde;

TEST_SUITE_BEGIN("risk");

namespace {

using Q = boost::rational<long long>;

bool
same(const Q& q, long long num, long long den)
{
  const long long g = std::gcd(num, den);
  return q.numerator() == num / g && q.denominator() == den / g;
}

ExperimentConfig
small_experiment(const Density& truth, int s1, int s2, double p, std::size_t replicates = 3)
{
  return make_experiment(truth, strict_product_kernel(s1, s2, 1, 1), p, { 16, 32, 64 }, replicates, 99, 6);
}

} // namespace

TEST_CASE("rate_exponent examples")
{
  const auto mixed = rate_exponent({ 4, 1 }, { 1, 1 }, 2.0, Regime::mixed_upper);
  CHECK(mixed.exact == Q(5, 12));
  CHECK(mixed.value == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  CHECK(rate_exponent({ 4, 1 }, { 1, 1 }, 2.0, Regime::aniso).exact == Q(4, 13));
  CHECK(rate_exponent({ 4, 1 }, { 1, 1 }, 2.0, Regime::classical_min).exact == Q(1, 4));
  for (int s = 1; s <= 4; ++s)
    CHECK(rate_exponent({ s, 2 }, { 2, 1 }, 1.0, Regime::noncompact_lower).exact == Q(0));
  CHECK_THROWS_AS(parse_regime("minimax"), parameter_error);
  CHECK(parse_regime("mixed-upper") == Regime::mixed_upper);
  CHECK(to_rational(1.5) == Q(3, 2));
  CHECK_THROWS_AS(rate_exponent({ 1 }, { 1, 1 }, 2.0, Regime::aniso), parameter_error);
}

TEST_CASE("property: exact rationals for every entry <= 6")
{
  for (int s1 = 1; s1 <= 6; ++s1)
    for (int s2 = 1; s2 <= 6; ++s2)
      for (int d1 = 1; d1 <= 6; ++d1)
        for (int d2 = 1; d2 <= 6; ++d2) {
          const std::vector<int> s{ s1, s2 };
          const std::vector<int> d{ d1, d2 };
          const int S = s1 + s2;
          const int D = d1 + d2;
          const int m = std::min(s1, s2);
          CHECK(same(rate_exponent(s, d, 2.0, Regime::mixed_upper).exact, S, 2 * S + D));
          CHECK(same(rate_exponent(s, d, 2.0, Regime::classical_sum).exact, S, 2 * S + D));
          CHECK(same(rate_exponent(s, d, 2.0, Regime::nu_fold).exact, S, 2 * S + D));
          CHECK(same(rate_exponent(s, d, 2.0, Regime::classical_min).exact, m, 2 * m + D));
          CHECK(same(rate_exponent(s, d, 2.0, Regime::aniso).exact, s1 * s2, 2 * s1 * s2 + d1 * s2 + d2 * s1));
          // S (p - 1) / (S p + D (p - 1)) at p = 3/2 is S / (3 S + D)
          CHECK(same(rate_exponent(s, d, 1.5, Regime::noncompact_lower).exact, S, 3 * S + D));
        }
}

TEST_CASE("fit_rate examples")
{
  std::vector<std::pair<double, double>> line;
  for (double n : { 100.0, 400.0, 1600.0, 6400.0 })
    line.emplace_back(n, 3.0 * std::pow(n, -0.75));
  const auto f = fit_rate(line);
  CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(f.stderr_ <= 1e-12);

  const auto flat = fit_rate({ { 10.0, 2.0 }, { 20.0, 2.0 }, { 40.0, 2.0 } });
  CHECK(std::abs(flat.slope) <= 1e-15);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> delta(-0.01, 0.01);
  std::vector<std::pair<double, double>> noisy;
  std::vector<double> lx;
  std::vector<double> ly;
  for (int k = 8; k <= 14; ++k) {
    const double n = std::ldexp(1.0, k);
    noisy.emplace_back(n, 5.0 * std::pow(n, -0.6) * (1.0 + delta(rng)));
    lx.push_back(std::log(n));
    ly.push_back(std::log(noisy.back().second));
  }
  const auto g = fit_rate(noisy);
  CHECK(std::abs(g.slope + 0.6) <= 0.02);
  CHECK(g.slope == doctest::Approx(oracle::ols_slope(lx, ly)).epsilon(1e-12));

  CHECK_THROWS_AS(fit_rate({ { 10.0, 1.0 }, { 20.0, 0.0 }, { 40.0, 1.0 } }), domain_error);
  CHECK_THROWS_AS(fit_rate({ { 10.0, 1.0 }, { 20.0, 1.0 } }), parameter_error);
}

TEST_CASE("experiment validation")
{
  const auto bump = tensor_bump({ 0.0, 0.0 }, { 1.0, 1.0 });
  auto c = small_experiment(bump, 1, 1, 2.0);
  c.replicates = 0;
  CHECK_THROWS_AS(mc_risk(c), parameter_error);
  auto unsorted = small_experiment(bump, 1, 1, 2.0);
  unsorted.sample_sizes = { 32, 16, 64 };
  CHECK_THROWS_AS(mc_risk(unsorted), parameter_error);
  const auto gauss = tensor_gaussian({ 0.0, 0.0 }, { 0.5, 0.5 });
  CHECK_THROWS_AS(mc_risk(small_experiment(gauss, 1, 1, 1.5)), regime_error);
}

TEST_CASE("mc_risk: determinism, dominance, bandwidths")
{
  const auto truth = tensor_bump({ 0.0, 0.0 }, { 0.8, 1.0 });
  for (double p : { 1.5, 2.0, 3.0 }) {
    auto c = small_experiment(truth, 2, 1, p);
    c.threads = 1;
    const auto a = mc_risk(c);
    c.threads = 4;
    const auto b = mc_risk(c);
    REQUIRE(a.cells.size() == 9);
    CHECK(risk_csv(a) == risk_csv(b));
    CHECK(a.fitted_slope == b.fitted_slope);
    for (const auto& cell : a.cells) {
      CHECK(cell.risk >= 0.0);
      CHECK(cell.h == bandwidth_rule(cell.n, 2, 1, 1, 1));
      CHECK(cell.risk <= std::pow(2.0, p - 1.0) * (cell.bias_p + cell.stochastic_p) + 1e-9);
    }
    CHECK(a.theoretical_exponent == doctest::Approx(p * 3.0 / 8.0).epsilon(1e-12));
  }
  const auto csv = risk_csv(mc_risk(small_experiment(truth, 1, 1, 2.0, 1)));
  CHECK(csv.rfind("n,replicate,seed,h,risk,bias_p,stochastic_p\n", 0) == 0);
}

TEST_CASE("property: bias is non-increasing along the bandwidth rule")
{
  const std::vector<Density> truths{ tensor_bump({ 0.0, 0.0 }, { 1.0, 1.0 }),
                                     tensor_bump({ 0.3, -0.2 }, { 0.7, 1.4 }),
                                     tensor_gaussian({ 0.0, 0.5 }, { 0.6, 0.9 }) };
  for (const auto& t : truths) {
    for (const auto& s : std::vector<std::pair<int, int>>{ { 1, 1 }, { 2, 1 }, { 1, 2 } }) {
      auto c = make_experiment(t, strict_product_kernel(s.first, s.second, 1, 1), 2.0, { 64, 256, 1024, 4096 }, 1, 1, 6);
      const auto r = mc_risk(c);
      for (std::size_t i = 1; i < r.mean_risk.size(); ++i)
        CHECK(r.cells[i].bias_p <= r.cells[i - 1].bias_p + 1e-9);
    }
  }
}

TEST_CASE("brute-force recomputation of a tiny instance")
{
  const auto truth = tensor_bump({ 0.1, -0.1 }, { 0.9, 0.8 });
  auto c = make_experiment(truth, strict_product_kernel(2, 1, 1, 1), 2.0, { 16, 32, 64 }, 1, 2024, 6);
  const auto r = mc_risk(c);
  const double l1 = oracle::adaptive_simpson(oracle::bump, -1.0, 1.0, 1e-15);
  const auto truth_fn = [&](double x, double y) {
    return oracle::bump((x - 0.1) / 0.9) / (0.9 * l1) * oracle::bump((y + 0.1) / 0.8) / (0.8 * l1);
  };
  const auto factor = [](std::size_t axis, double u) {
    return std::abs(u) > 1.0 ? 0.0 : oracle::legendre_kernel(axis == 0 ? 3 : 1, u);
  };
  for (const auto& cell : r.cells) {
    const auto s = sample(truth, cell.seed, cell.n);
    const double ref = oracle::brute_force_risk(s.data, cell.h, factor, truth_fn, c.eval_box.lower().data(),
                                                c.eval_box.upper().data(), c.eval_rule.panels_per_axis.data(),
                                                static_cast<int>(c.eval_rule.nodes_per_panel), 2.0);
    CHECK(std::abs(cell.risk - ref) <= 1e-10 * ref);
  }
}

TEST_CASE("upper_bound_constant")
{
  const auto truth = tensor_bump({ 0.0, 0.0 }, { 1.0, 1.0 });
  const auto k = strict_product_kernel(1, 1, 1, 1);
  const double c0 = upper_bound_constant(k, truth, 2.0, 0.0);
  const double c1 = upper_bound_constant(k, truth, 2.0, 1.0);
  const double c2 = upper_bound_constant(k, truth, 2.0, 2.0);
  CHECK(c2 - c1 == doctest::Approx(c1 - c0).epsilon(1e-12));

  // p = 2: 2 [ (I ||d^(1,1) f||_2)^2 + 2 c ||K||_2^2 ] since ||f||_1 = 1
  const double I = verify_class(k, 1e-8).I_s1_s2;
  const double l1 = oracle::adaptive_simpson(oracle::bump, -1.0, 1.0, 1e-15);
  const auto r = oracle::composite(-1.0, 1.0, 64, 16);
  double d2 = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double u = r.x[i];
    const double dk = oracle::bump(u) * (-2.0 * u) / std::pow(1.0 - u * u, 2) / l1;
    d2 += r.w[i] * dk * dk;
  }
  const double K2 = 0.25;
  const double expect = 2.0 * (std::pow(I * d2, 2) + 2.0 * K2);
  CHECK(std::abs(c1 - expect) <= 1e-8 * expect);
  CHECK(std::pow(q_norm(k, 2.0), 2) == doctest::Approx(K2).epsilon(1e-12));

  CHECK_THROWS_AS(upper_bound_constant(k, truth, 1.5), regime_error);
}

TEST_CASE("verify_lower_hypotheses")
{
  const auto fp = choose_parameters(10000, 17.0, 2.0, 1, 1, 1, 1, true, 8.5);
  const auto fam = build_family(fp);
  const auto h = verify_lower_hypotheses(fam, 10000);
  CHECK(h.condition_L11);
  CHECK(h.rho_n == doctest::Approx(fp.C1 * fp.A * std::pow(fp.N, 2.0 / fp.p)).epsilon(1e-12));
  CHECK(h.threshold == doctest::Approx(std::pow(2.0 * h.rho_n, fp.p)).epsilon(1e-12));
  CHECK(h.c0_estimate <= h.c0_bound * (1.0 + 1e-9));
  CHECK(h.c0_bound == doctest::Approx(std::exp(fp.C2 * 10000.0 * std::pow(fp.N, 4.0) * fp.A * fp.A)).epsilon(1e-12));

  auto single = fam;
  const Word w = fam.code.words().front();
  single.code = Code::from_words(w.size(), { w });
  const auto one = verify_lower_hypotheses(single, 10000);
  CHECK(one.words_averaged == 1);
  CHECK(one.c0_estimate == doctest::Approx(chi2_affinity(fam, w, 10000)).epsilon(1e-14));
}

TEST_SUITE_END();
