#include "mixkde/estimator.hpp"

#include "mixkde/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace mixkde {

double
bandwidth_rule(std::size_t n, int s1, int s2, int d1, int d2)
{
  if (n < 2)
    throw parameter_error("bandwidth_rule: n must be at least 2");
  const double e = 2.0 * (s1 + s2) + (d1 + d2);
  const double h = std::pow(static_cast<double>(n), -1.0 / e);
  return std::min(h, std::nextafter(1.0, 0.0));
}

KdeModel::KdeModel(ProductKernel kernel, double h, SampleSet sample)
  : kernel_(std::move(kernel))
  , h_(h)
  , sample_(std::move(sample))
{
  if (!(h_ > 0.0 && h_ < 1.0))
    throw parameter_error("KdeModel: bandwidth must lie in (0, 1)");
  if (sample_.size() == 0)
    throw parameter_error("KdeModel: empty sample");
  if (sample_.dim != kernel_.dim())
    throw dimension_error("KdeModel: sample dimension differs from d1 + d2");
  std::vector<std::size_t> order(sample_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return sample_.point(a)[0] < sample_.point(b)[0];
  });
  sorted_ = SampleSet(sample_.dim);
  sorted_.data.reserve(sample_.data.size());
  for (auto i : order)
    sorted_.push(sample_.point(i));
}

double
KdeModel::operator()(Point x) const
{
  const std::size_t d = kernel_.dim();
  if (x.size() != d)
    throw dimension_error("kde_eval: point dimension differs from d1 + d2");
  const std::size_t n = sorted_.size();
  // binary search on the first coordinate for the window [x0 - h, x0 + h]
  std::size_t lo = 0;
  std::size_t hi = n;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (sorted_.data[mid * d] < x[0] - h_)
      lo = mid + 1;
    else
      hi = mid;
  }
  double sum = 0.0;
  for (std::size_t i = lo; i < n; ++i) {
    const double* xi = sorted_.data.data() + i * d;
    if (xi[0] > x[0] + h_)
      break;
    double v = 1.0;
    for (std::size_t a = 0; a < d && v != 0.0; ++a)
      v *= kernel_.factor(a)((xi[a] - x[a]) / h_);
    sum += v;
  }
  return sum / (static_cast<double>(n) * std::pow(h_, static_cast<double>(d)));
}

namespace {

std::vector<std::size_t>
strides_of(const TensorGrid& grid)
{
  const std::size_t d = grid.dim();
  std::vector<std::size_t> s(d, 1);
  for (std::size_t a = d - 1; a-- > 0;)
    s[a] = s[a + 1] * grid.nodes[a + 1].size();
  return s;
}

// out[offset + sum_a (first_a + k_a) stride_a] += scale * prod_a values_a[k_a]
void
scatter(std::vector<double>& out, const std::vector<std::vector<double>>& values,
        const std::vector<std::size_t>& first, const std::vector<std::size_t>& strides,
        std::size_t axis, std::size_t offset, double scale)
{
  const auto& v = values[axis];
  const std::size_t base = offset + first[axis] * strides[axis];
  if (axis + 1 == values.size()) {
    double* dst = out.data() + base;
    for (std::size_t k = 0; k < v.size(); ++k)
      dst[k] += scale * v[k];
    return;
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] != 0.0)
      scatter(out, values, first, strides, axis + 1, base + k * strides[axis], scale * v[k]);
  }
}

// out[flat] = prod_a values_a[idx_a]
std::vector<double>
outer_product(const TensorGrid& grid, const std::vector<std::vector<double>>& values)
{
  std::vector<double> out(grid.size(), 0.0);
  std::vector<std::size_t> first(grid.dim(), 0);
  scatter(out, values, first, strides_of(grid), 0, 0, 1.0);
  return out;
}

} // namespace

std::vector<double>
KdeModel::on_grid(const TensorGrid& grid) const
{
  const std::size_t d = kernel_.dim();
  if (grid.dim() != d)
    throw dimension_error("KdeModel::on_grid: grid dimension differs from d1 + d2");
  std::vector<double> out(grid.size(), 0.0);
  const auto strides = strides_of(grid);
  std::vector<std::vector<double>> values(d);
  std::vector<std::size_t> first(d);
  for (std::size_t i = 0; i < sample_.size(); ++i) {
    const Point xi = sample_.point(i);
    bool empty = false;
    for (std::size_t a = 0; a < d && !empty; ++a) {
      const auto& nodes = grid.nodes[a];
      const auto lo = std::lower_bound(nodes.begin(), nodes.end(), xi[a] - h_);
      const auto hi = std::upper_bound(lo, nodes.end(), xi[a] + h_);
      first[a] = static_cast<std::size_t>(lo - nodes.begin());
      values[a].clear();
      for (auto it = lo; it != hi; ++it)
        values[a].push_back(kernel_.factor(a)((xi[a] - *it) / h_));
      empty = values[a].empty();
    }
    if (!empty)
      scatter(out, values, first, strides, 0, 0, 1.0);
  }
  const double scale = 1.0 / (static_cast<double>(sample_.size()) * std::pow(h_, static_cast<double>(d)));
  for (auto& v : out)
    v *= scale;
  return out;
}

double
kde_eval(const KdeModel& model, Point x)
{
  return model(x);
}

namespace {

struct KernelRule
{
  std::vector<double> u;
  std::vector<double> w;
};

KernelRule
kernel_rule(std::size_t panels, std::size_t nodes)
{
  KernelRule r;
  composite_nodes(-1.0, 1.0, panels, nodes, r.u, r.w);
  return r;
}

double
convolve_axis(const UnivariateKernel& k, const Factor& f, double h, double x, const KernelRule& r)
{
  double s = 0.0;
  for (std::size_t i = 0; i < r.u.size(); ++i)
    s += r.w[i] * k(r.u[i]) * f.deriv(x + h * r.u[i], 0);
  return s;
}

void
check_h(double h)
{
  if (!(h > 0.0 && h < 1.0))
    throw parameter_error("kernel mean: bandwidth must lie in (0, 1)");
}

} // namespace

Field
kde_mean_field(const ProductKernel& kernel, double h, const Density& truth, std::size_t panels_per_axis,
               std::size_t nodes_per_panel)
{
  check_h(h);
  if (truth.dim() != kernel.dim())
    throw dimension_error("kde_mean_field: truth dimension differs from d1 + d2");
  const auto rule = kernel_rule(panels_per_axis, nodes_per_panel);
  if (truth.is_product()) {
    return [kernel, h, truth, rule](Point x) {
      double v = 1.0;
      for (std::size_t a = 0; a < x.size() && v != 0.0; ++a)
        v *= convolve_axis(kernel.factor(a), truth.factors[a], h, x[a], rule);
      return v;
    };
  }
  const Box cube = Box::cube(kernel.dim(), -1.0, 1.0);
  const QuadRule qr(nodes_per_panel, std::vector<std::size_t>(kernel.dim(), panels_per_axis));
  auto grid = std::make_shared<const TensorGrid>(cube, qr);
  return [kernel, h, truth, grid](Point x) {
    std::vector<double> y(x.size());
    double s = 0.0;
    grid->for_each([&](Point u, double w, std::size_t) {
      const double k = kernel(u);
      if (k == 0.0)
        return;
      for (std::size_t a = 0; a < x.size(); ++a)
        y[a] = x[a] + h * u[a];
      s += w * k * truth(Point(y));
    });
    return s;
  };
}

std::vector<double>
mean_field_on_grid(const ProductKernel& kernel, double h, const Density& truth, const TensorGrid& grid)
{
  check_h(h);
  if (truth.is_product()) {
    const auto rule = kernel_rule(16, 8);
    std::vector<std::vector<double>> values(grid.dim());
    for (std::size_t a = 0; a < grid.dim(); ++a)
      for (double x : grid.nodes[a])
        values[a].push_back(convolve_axis(kernel.factor(a), truth.factors[a], h, x, rule));
    return outer_product(grid, values);
  }
  const Field m = kde_mean_field(kernel, h, truth);
  std::vector<double> out(grid.size());
  grid.for_each([&](Point x, double, std::size_t flat) { out[flat] = m(x); });
  return out;
}

std::vector<double>
truth_on_grid(const Density& truth, const TensorGrid& grid)
{
  if (truth.is_product()) {
    std::vector<std::vector<double>> values(grid.dim());
    for (std::size_t a = 0; a < grid.dim(); ++a)
      for (double x : grid.nodes[a])
        values[a].push_back(truth.factors[a].deriv(x, 0));
    return outer_product(grid, values);
  }
  std::vector<double> out(grid.size());
  grid.for_each([&](Point x, double, std::size_t flat) { out[flat] = truth(x); });
  return out;
}

double
grid_lp_power(const TensorGrid& grid, const std::vector<double>& a, const std::vector<double>& b, double p)
{
  if (a.size() != grid.size() || b.size() != grid.size())
    throw dimension_error("grid_lp_power: value arrays do not match the grid");
  if (!(p >= 1.0))
    throw domain_error("grid_lp_power: p must satisfy p >= 1");
  const auto weights = outer_product(grid, grid.weights);
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    s += weights[i] * (p == 2.0 ? diff * diff : (p == 1.0 ? diff : std::pow(diff, p)));
  }
  return s;
}

double
bias_lp(const ProductKernel& kernel, double h, const Density& truth, double p, const Box& box,
        const QuadRule& rule)
{
  const TensorGrid grid(box, rule);
  const auto mean = mean_field_on_grid(kernel, h, truth, grid);
  const auto f = truth_on_grid(truth, grid);
  return std::pow(grid_lp_power(grid, mean, f, p), 1.0 / p);
}

} // namespace mixkde
