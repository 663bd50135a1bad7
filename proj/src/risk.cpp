#include "mixkde/risk.hpp"

#include "mixkde/error.hpp"
#include "mixkde/estimator.hpp"
#include "mixkde/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace mixkde {

void
ExperimentConfig::validate() const
{
  if (sample_sizes.size() < 3)
    throw parameter_error("experiment: at least three sample sizes are required");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < 2)
      throw parameter_error("experiment: sample sizes must be at least 2");
    if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1])
      throw parameter_error("experiment: sample sizes must be strictly increasing");
  }
  if (replicates == 0)
    throw parameter_error("experiment: replicates must be positive");
  if (!(p >= 1.0))
    throw domain_error("experiment: p must satisfy p >= 1");
  if (p < 2.0 && !truth.compact)
    throw regime_error("experiment: p < 2 requires a compactly supported truth");
  if (truth.dim() != kernel.dim() || eval_box.dim() != kernel.dim() ||
      eval_rule.panels_per_axis.size() != kernel.dim())
    throw dimension_error("experiment: truth, kernel, box and rule dimensions differ");
}

ExperimentConfig
make_experiment(Density truth, ProductKernel kernel, double p, std::vector<std::size_t> sample_sizes,
                std::size_t replicates, std::uint64_t master_seed, std::size_t nodes_per_panel)
{
  if (sample_sizes.empty())
    throw parameter_error("experiment: no sample sizes");
  const auto [lo, hi] = std::minmax_element(sample_sizes.begin(), sample_sizes.end());
  const double h_max = bandwidth_rule(*lo, kernel.s1, kernel.s2, kernel.d1, kernel.d2);
  const double h_min = bandwidth_rule(*hi, kernel.s1, kernel.s2, kernel.d1, kernel.d2);
  Box box = truth.field.support.padded(h_max);
  QuadRule rule = QuadRule::for_feature_scale(box, std::min(h_min, truth.feature_scale), nodes_per_panel);
  ExperimentConfig c{ std::move(truth), std::move(kernel), p, std::move(sample_sizes), replicates,
                      std::move(box), std::move(rule), master_seed, 1 };
  return c;
}

RiskReport
mc_risk(const ExperimentConfig& config)
{
  config.validate();
  const auto& k = config.kernel;
  const TensorGrid grid(config.eval_box, config.eval_rule);
  const auto truth = truth_on_grid(config.truth, grid);

  const std::size_t sizes = config.sample_sizes.size();
  std::vector<double> h(sizes);
  std::vector<std::vector<double>> mean(sizes);
  std::vector<double> bias(sizes);
  for (std::size_t i = 0; i < sizes; ++i) {
    h[i] = bandwidth_rule(config.sample_sizes[i], k.s1, k.s2, k.d1, k.d2);
    mean[i] = mean_field_on_grid(k, h[i], config.truth, grid);
    bias[i] = grid_lp_power(grid, mean[i], truth, config.p);
  }

  RiskReport report;
  report.cells.resize(sizes * config.replicates);
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= report.cells.size())
        return;
      try {
        const std::size_t i = c / config.replicates;
        const std::size_t rep = c % config.replicates;
        RiskCell cell;
        cell.n = config.sample_sizes[i];
        cell.replicate = rep;
        cell.seed = cell_seed(config.master_seed, cell.n, rep);
        cell.h = h[i];
        const KdeModel model(k, h[i], sample(config.truth, cell.seed, cell.n));
        const auto fhat = model.on_grid(grid);
        cell.risk = grid_lp_power(grid, fhat, truth, config.p);
        cell.bias_p = bias[i];
        cell.stochastic_p = grid_lp_power(grid, fhat, mean[i], config.p);
        report.cells[c] = cell;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next.store(report.cells.size());
        return;
      }
    }
  };

  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }
  if (failure)
    std::rethrow_exception(failure);

  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < sizes; ++i) {
    double s = 0.0;
    for (std::size_t rep = 0; rep < config.replicates; ++rep)
      s += report.cells[i * config.replicates + rep].risk;
    const double m = s / static_cast<double>(config.replicates);
    report.mean_risk.emplace_back(config.sample_sizes[i], m);
    points.emplace_back(static_cast<double>(config.sample_sizes[i]), m);
  }
  const RateFit fit = fit_rate(points);
  report.fitted_slope = fit.slope;
  report.slope_stderr = fit.stderr_;
  const double S = k.s1 + k.s2;
  const double D = k.d1 + k.d2;
  report.theoretical_exponent = config.p * S / (2.0 * S + D);
  return report;
}

RateFit
fit_rate(const std::vector<std::pair<double, double>>& points)
{
  if (points.size() < 3)
    throw parameter_error("fit_rate: at least three points are required");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [n, risk] : points) {
    if (!(risk > 0.0))
      throw domain_error("fit_rate: risks must be positive");
    if (!(n > 0.0))
      throw domain_error("fit_rate: sample sizes must be positive");
    x.push_back(std::log(n));
    y.push_back(std::log(risk));
  }
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0))
    throw domain_error("fit_rate: sample sizes must not all coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - intercept - fit.slope * x[i];
    ssr += e * e;
  }
  fit.stderr_ = std::sqrt(ssr / (k - 2.0) / sxx);
  return fit;
}

Regime
parse_regime(const std::string& name)
{
  if (name == "mixed-upper")
    return Regime::mixed_upper;
  if (name == "classical-min")
    return Regime::classical_min;
  if (name == "classical-sum")
    return Regime::classical_sum;
  if (name == "aniso")
    return Regime::aniso;
  if (name == "noncompact-lower")
    return Regime::noncompact_lower;
  if (name == "nu-fold")
    return Regime::nu_fold;
  throw parameter_error("unknown regime '" + name + "'");
}

std::string
to_string(Regime r)
{
  switch (r) {
    case Regime::mixed_upper:
      return "mixed-upper";
    case Regime::classical_min:
      return "classical-min";
    case Regime::classical_sum:
      return "classical-sum";
    case Regime::aniso:
      return "aniso";
    case Regime::noncompact_lower:
      return "noncompact-lower";
    case Regime::nu_fold:
      return "nu-fold";
  }
  return "?";
}

boost::rational<long long>
to_rational(double x)
{
  if (!std::isfinite(x))
    throw domain_error("to_rational: non-finite value");
  // continued fraction convergents with denominator at most 10^6
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(v);
    const auto ai = static_cast<long long>(a);
    const long long p2 = ai * p1 + p0;
    const long long q2 = ai * q1 + q0;
    if (q2 > 1000000)
      break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = v - a;
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) < 1e-15 * std::max(1.0, std::abs(x)) ||
        frac == 0.0)
      break;
    v = 1.0 / frac;
  }
  return boost::rational<long long>(p1, q1);
}

RateExponent
rate_exponent(const std::vector<int>& s, const std::vector<int>& d, double p, Regime regime)
{
  using Q = boost::rational<long long>;
  if (s.empty() || s.size() != d.size())
    throw parameter_error("rate_exponent: s and d must be non-empty lists of equal length");
  if (!(p >= 1.0))
    throw domain_error("rate_exponent: p must satisfy p >= 1");
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] < 1 || d[i] < 1)
      throw parameter_error("rate_exponent: smoothness and dimensions must be positive");
  const long long S = std::accumulate(s.begin(), s.end(), 0LL);
  const long long D = std::accumulate(d.begin(), d.end(), 0LL);
  Q q;
  switch (regime) {
    case Regime::mixed_upper:
    case Regime::classical_sum:
    case Regime::nu_fold:
      q = Q(S, 2 * S + D);
      break;
    case Regime::classical_min: {
      const long long m = *std::min_element(s.begin(), s.end());
      q = Q(m, 2 * m + D);
      break;
    }
    case Regime::aniso: {
      Q denom(2);
      for (std::size_t i = 0; i < s.size(); ++i)
        denom += Q(d[i], s[i]);
      q = Q(1) / denom;
      break;
    }
    case Regime::noncompact_lower: {
      const Q P = to_rational(p);
      q = Q(S) * (P - 1) / (Q(S) * P + Q(D) * (P - 1));
      break;
    }
  }
  return RateExponent{ q, boost::rational_cast<double>(q) };
}

namespace {

std::vector<MultiIndex>
top_order_indices(const ProductKernel& k)
{
  std::vector<MultiIndex> out;
  for (const auto& a1 : indices_of_order(k.d1, k.s1)) {
    for (const auto& a2 : indices_of_order(k.d2, k.s2)) {
      MultiIndex a = a1;
      a.insert(a.end(), a2.begin(), a2.end());
      out.push_back(std::move(a));
    }
  }
  return out;
}

double
truth_integral(const Density& truth, const Field& f)
{
  return truth.field.pieces.empty()
           ? integrate(f, truth.field.support,
                       QuadRule::for_feature_scale(truth.field.support, 0.25 * truth.feature_scale, 16))
           : integrate(f, truth.field.pieces, 16);
}

} // namespace

double
upper_bound_constant(const ProductKernel& kernel, const Density& truth, double p, double c_p)
{
  if (!(p >= 2.0))
    throw regime_error("upper_bound_constant: requires p >= 2");
  if (truth.dim() != kernel.dim())
    throw dimension_error("upper_bound_constant: truth dimension differs from d1 + d2");
  const double I = verify_class(kernel, 1e-8).I_s1_s2;
  double derivative_sum = 0.0;
  for (const auto& alpha : top_order_indices(kernel)) {
    const Field f = [&truth, &alpha, p](Point x) { return std::pow(std::abs(truth.field.derivative(x, alpha)), p); };
    derivative_sum += std::pow(truth_integral(truth, f), 1.0 / p);
  }
  const double sup = q_norm(kernel, std::numeric_limits<double>::infinity());
  const double l2 = q_norm(kernel, 2.0);
  const double f_half = truth_integral(truth, [&truth, p](Point x) { return std::pow(std::max(truth(x), 0.0), p / 2.0); });
  return std::pow(2.0, p - 1.0) *
         (std::pow(I * derivative_sum, p) + c_p * std::pow(2.0, p - 2.0) * std::pow(sup, p - 2.0) * l2 * l2 +
          c_p * std::pow(l2, p) * f_half);
}

LowerHypotheses
verify_lower_hypotheses(const LowerBoundFamily& fam, std::size_t n, std::uint64_t seed)
{
  const auto& fp = fam.params;
  const double D = fp.D();
  LowerHypotheses out;
  const double C1 = 0.5 * std::pow(fam.gnorms.p_norm, D) * std::pow(1.0 / (20.0 * fp.kappa), D / fp.p) *
                    std::pow(8.0, -1.0 / fp.p);
  out.rho_n = C1 * fp.A * std::pow(fp.N, D / fp.p);
  out.min_distance = std::pow(fp.A, fp.p) * static_cast<double>(fam.code.min_distance()) *
                     std::pow(fp.sigma, D) * std::pow(fam.gnorms.p_norm, fp.p * D);
  out.threshold = std::pow(2.0 * out.rho_n, fp.p);
  out.condition_L11 = out.min_distance >= out.threshold * (1.0 - 1e-12);

  double sum = 0.0;
  constexpr std::size_t cap = 4096;
  if (fam.code.is_explicit() && fam.code.words().size() <= cap) {
    for (const auto& w : fam.code.words())
      sum += chi2_affinity(fam, w, n);
    out.words_averaged = fam.code.words().size();
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < cap; ++i)
      sum += chi2_affinity(fam, fam.code.random_word(rng), n);
    out.words_averaged = cap;
  }
  out.c0_estimate = sum / static_cast<double>(out.words_averaged);
  const double C2 = std::pow(20.0, -D) * std::pow(fp.kappa, -2.0 * D) * std::pow(fam.gnorms.l2_norm, 2.0 * D);
  out.c0_bound = std::exp(C2 * static_cast<double>(n) * std::pow(fp.N, 2.0 * D) * fp.A * fp.A);
  return out;
}

std::string
risk_csv(const RiskReport& report)
{
  std::string out = "n,replicate,seed,h,risk,bias_p,stochastic_p\n";
  char buf[512];
  for (const auto& c : report.cells) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%llu,%.17g,%.17g,%.17g,%.17g\n", c.n, c.replicate,
                  static_cast<unsigned long long>(c.seed), c.h, c.risk, c.bias_p, c.stochastic_p);
    out += buf;
  }
  return out;
}

} // namespace mixkde
