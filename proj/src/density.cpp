#include "mixkde/density.hpp"

#include "mixkde/bump.hpp"
#include "mixkde/error.hpp"
#include "mixkde/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace mixkde {

MarginalTable::MarginalTable(const std::function<double(double)>& pdf, double lo, double hi,
                             std::size_t knots)
  : lo_(lo)
  , step_((hi - lo) / static_cast<double>(knots - 1))
  , cdf_(knots, 0.0)
{
  if (knots < 2 || !(hi > lo))
    throw parameter_error("MarginalTable: need at least two knots on a non-empty interval");
  double prev = pdf(lo);
  for (std::size_t i = 1; i < knots; ++i) {
    const double cur = pdf(lo + step_ * static_cast<double>(i));
    cdf_[i] = cdf_[i - 1] + 0.5 * step_ * (std::max(prev, 0.0) + std::max(cur, 0.0));
    prev = cur;
  }
  const double total = cdf_.back();
  if (!(total > 0))
    throw sampler_degenerate("MarginalTable: marginal has no mass");
  for (auto& c : cdf_)
    c /= total;
  cdf_.back() = 1.0;
}

double
MarginalTable::cdf(double x) const
{
  const double pos = (x - lo_) / step_;
  if (pos <= 0)
    return 0.0;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= cdf_.size())
    return 1.0;
  const double t = pos - static_cast<double>(i);
  return cdf_[i] + t * (cdf_[i + 1] - cdf_[i]);
}

double
MarginalTable::quantile(double u) const
{
  // first knot with cdf > u, found by bisection
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin())
    return lo_;
  if (it == cdf_.end())
    return lo_ + step_ * static_cast<double>(cdf_.size() - 1);
  const auto i = static_cast<std::size_t>(it - cdf_.begin()) - 1;
  const double span = cdf_[i + 1] - cdf_[i];
  const double t = span > 0 ? (u - cdf_[i]) / span : 0.0;
  return lo_ + step_ * (static_cast<double>(i) + t);
}

Density
product_density(std::vector<Factor> factors, bool compact, double feature_scale)
{
  if (factors.empty())
    throw dimension_error("product_density: no factors");
  std::vector<double> lo;
  std::vector<double> hi;
  for (const auto& f : factors) {
    lo.push_back(f.lo);
    hi.push_back(f.hi);
  }
  auto shared = std::make_shared<const std::vector<Factor>>(factors);

  Density d;
  d.field.support = Box(lo, hi);
  d.field.eval = [shared](Point x) {
    double v = 1.0;
    for (std::size_t i = 0; i < shared->size() && v != 0.0; ++i)
      v *= (*shared)[i].deriv(x[i], 0);
    return v;
  };
  d.field.partial = [shared](Point x, const MultiIndex& alpha) {
    double v = 1.0;
    for (std::size_t i = 0; i < shared->size() && v != 0.0; ++i)
      v *= (*shared)[i].deriv(x[i], alpha[i]);
    return v;
  };

  std::vector<MarginalTable> tables;
  for (const auto& f : factors)
    tables.emplace_back([&f](double x) { return f.deriv(x, 0); }, f.lo, f.hi);
  auto shared_tables = std::make_shared<const std::vector<MarginalTable>>(std::move(tables));
  d.sampler = [shared_tables](std::uint64_t seed, std::size_t count) {
    const std::size_t dim = shared_tables->size();
    SampleSet out(dim);
    out.data.resize(count * dim);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t a = 0; a < dim; ++a)
        out.data[i * dim + a] = (*shared_tables)[a].quantile(uniform01(rng));
    return out;
  };
  d.sampler_kind = SamplerKind::inverse_cdf;
  d.factors = std::move(factors);
  d.compact = compact;
  d.feature_scale = feature_scale;
  return d;
}

Density
tensor_bump(const std::vector<double>& centers, const std::vector<double>& half_widths)
{
  if (centers.empty() || centers.size() != half_widths.size())
    throw dimension_error("tensor_bump: centers and half_widths must have the same positive length");
  std::vector<Factor> factors;
  double scale = half_widths.front();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double c = centers[i];
    const double w = half_widths[i];
    if (!(w > 0))
      throw parameter_error("tensor_bump: half widths must be positive");
    scale = std::min(scale, w);
    factors.push_back(Factor{ [c, w](double x, int j) {
                               return lambda_derivative((x - c) / w, j) / std::pow(w, j + 1);
                             },
                              c - w, c + w });
  }
  return product_density(std::move(factors), true, 0.25 * scale);
}

namespace {

// probabilists' Hermite polynomial He_j
double
hermite(int j, double z)
{
  double h0 = 1.0;
  if (j == 0)
    return h0;
  double h1 = z;
  for (int k = 1; k < j; ++k) {
    const double h2 = z * h1 - k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

} // namespace

Density
tensor_gaussian(const std::vector<double>& means, const std::vector<double>& sds)
{
  if (means.empty() || means.size() != sds.size())
    throw dimension_error("tensor_gaussian: means and sds must have the same positive length");
  std::vector<Factor> factors;
  double scale = sds.front();
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double m = means[i];
    const double s = sds[i];
    if (!(s > 0))
      throw parameter_error("tensor_gaussian: standard deviations must be positive");
    scale = std::min(scale, s);
    factors.push_back(Factor{ [m, s](double x, int j) {
                               const double z = (x - m) / s;
                               if (std::abs(z) > 8.0)
                                 return 0.0;
                               const double phi =
                                 std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
                               const double sign = (j % 2 == 0) ? 1.0 : -1.0;
                               return sign * hermite(j, z) * phi / std::pow(s, j);
                             },
                              m - 8.0 * s, m + 8.0 * s });
  }
  return product_density(std::move(factors), false, 0.5 * scale);
}

Density
lambda_pdf()
{
  return product_density({ Factor{ [](double u, int j) { return lambda_derivative(u, j); }, -1.0,
                                   1.0 } },
                         true, 0.25);
}

SampleSet
sample(const Density& d, std::uint64_t seed, std::size_t count)
{
  if (!d.sampler)
    throw sampler_degenerate("sample: density has no sampler");
  if (count == 0)
    return SampleSet(d.dim());
  return d.sampler(seed, count);
}

PdfCheck
check_pdf(const Density& d, std::size_t grid_per_axis)
{
  PdfCheck c;
  c.mass = d.field.pieces.empty()
             ? integrate(d.field.eval, d.field.support,
                         QuadRule::for_feature_scale(d.field.support, d.feature_scale))
             : integrate(d.field.eval, d.field.pieces, 8);

  const auto& box = d.field.support;
  const std::size_t dim = box.dim();
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> x(dim);
  c.min_value = std::numeric_limits<double>::infinity();
  const auto g = std::max<std::size_t>(grid_per_axis, 2);
  for (bool done = false; !done;) {
    for (std::size_t a = 0; a < dim; ++a)
      x[a] = box.lower()[a] + box.width(a) * static_cast<double>(idx[a]) / static_cast<double>(g - 1);
    c.min_value = std::min(c.min_value, d(Point(x)));
    done = true;
    for (std::size_t a = dim; a-- > 0;) {
      if (++idx[a] < g) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
  }
  c.pass = std::abs(c.mass - 1.0) <= d.is_pdf_tol && c.min_value >= -1e-12;
  return c;
}

} // namespace mixkde
