#pragma once

#include "mixkde/sobolev.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace mixkde {

//! Row-major list of points of a common dimension.
struct SampleSet
{
  std::size_t dim = 0;
  std::vector<double> data;

  SampleSet() = default;
  explicit SampleSet(std::size_t d)
    : dim(d)
  {
  }

  std::size_t size() const { return dim == 0 ? 0 : data.size() / dim; }
  Point point(std::size_t i) const { return Point(data.data() + i * dim, dim); }
  void push(Point x) { data.insert(data.end(), x.begin(), x.end()); }
};

enum class SamplerKind
{
  inverse_cdf,
  rejection
};

using Sampler = std::function<SampleSet(std::uint64_t seed, std::size_t count)>;

//! One axis of a product density: deriv(x, j) is the j-th derivative of the
//! marginal, which vanishes outside [lo, hi].
struct Factor
{
  std::function<double(double, int)> deriv;
  double lo = 0.0;
  double hi = 1.0;
};

struct Density
{
  DifferentiableField field;
  double is_pdf_tol = 1e-8;
  SamplerKind sampler_kind = SamplerKind::inverse_cdf;
  Sampler sampler;
  //! Non-empty exactly when the density is a product of these marginals.
  std::vector<Factor> factors;
  //! False for densities truncated from an unbounded support.
  bool compact = true;
  //! Shortest length scale on which the density varies.
  double feature_scale = 1.0;

  std::size_t dim() const { return field.support.dim(); }
  double operator()(Point x) const { return field.eval(x); }
  bool is_product() const { return !factors.empty(); }
};

//! Product density with closed-form partials and a per-axis inverse-cdf sampler.
Density product_density(std::vector<Factor> factors, bool compact, double feature_scale);

//! prod_l Lambda((x_l - c_l) / w_l) / w_l.
Density tensor_bump(const std::vector<double>& centers, const std::vector<double>& half_widths);

//! Independent normal marginals, truncated at 8 standard deviations.
Density tensor_gaussian(const std::vector<double>& means, const std::vector<double>& sds);

//! The normalized bump Lambda on [-1, 1].
Density lambda_pdf();

//! Draws `count` iid points; identical (seed, count) gives identical output.
SampleSet sample(const Density& d, std::uint64_t seed, std::size_t count);

//! Inverse-cdf sampler for one axis: cumulative trapezoid table at `knots`
//! points, inverted by bisection and linear interpolation.
class MarginalTable
{
public:
  MarginalTable(const std::function<double(double)>& pdf, double lo, double hi,
                std::size_t knots = 8192);
  double cdf(double x) const;
  double quantile(double u) const;

private:
  double lo_;
  double step_;
  std::vector<double> cdf_;
};

struct PdfCheck
{
  double mass = 0.0;
  double min_value = 0.0;
  bool pass = false;
};

//! Mass by quadrature and minimum over an equispaced grid with
//! `grid_per_axis` nodes per axis over the support.
PdfCheck check_pdf(const Density& d, std::size_t grid_per_axis = 256);

} // namespace mixkde
