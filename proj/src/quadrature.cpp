#include "mixkde/quadrature.hpp"

#include "mixkde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace mixkde {

Box::Box()
  : Box({ 0.0 }, { 1.0 })
{
}

Box::Box(std::vector<double> lower, std::vector<double> upper)
  : lower_(std::move(lower))
  , upper_(std::move(upper))
{
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw dimension_error("Box: lower and upper must have the same positive length");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      std::ostringstream ss;
      ss << "Box: empty axis " << i << " [" << lower_[i] << ", " << upper_[i] << "]";
      throw domain_error(ss.str());
    }
  }
}

Box
Box::cube(std::size_t dim, double lo, double hi)
{
  return Box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

double
Box::volume() const
{
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i)
    v *= width(i);
  return v;
}

bool
Box::contains(Point x) const
{
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lower_[i] || x[i] > upper_[i])
      return false;
  }
  return true;
}

Box
Box::padded(double pad) const
{
  auto lo = lower_;
  auto hi = upper_;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    lo[i] -= pad;
    hi[i] += pad;
  }
  return Box(lo, hi);
}

QuadRule::QuadRule()
  : QuadRule(8, { 1 })
{
}

QuadRule::QuadRule(std::size_t nodes, std::vector<std::size_t> panels)
  : nodes_per_panel(nodes)
  , panels_per_axis(std::move(panels))
{
  if (nodes_per_panel < 2)
    throw parameter_error("QuadRule: nodes_per_panel must be at least 2");
  if (panels_per_axis.empty())
    throw parameter_error("QuadRule: no axes");
  for (auto p : panels_per_axis) {
    if (p == 0)
      throw parameter_error("QuadRule: panel counts must be positive");
  }
}

QuadRule
QuadRule::uniform(std::size_t dim, std::size_t panels, std::size_t nodes)
{
  return QuadRule(nodes, std::vector<std::size_t>(dim, panels));
}

QuadRule
QuadRule::for_feature_scale(const Box& box, double feature_scale, std::size_t nodes)
{
  if (!(feature_scale > 0))
    throw parameter_error("QuadRule: feature scale must be positive");
  std::vector<std::size_t> panels(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    panels[i] = static_cast<std::size_t>(std::ceil(box.width(i) / (0.5 * feature_scale) - 1e-9));
    panels[i] = std::max<std::size_t>(panels[i], 1);
  }
  return QuadRule(nodes, std::move(panels));
}

std::size_t
QuadRule::node_count() const
{
  std::size_t total = 1;
  for (auto p : panels_per_axis) {
    std::size_t axis = 0;
    if (__builtin_mul_overflow(p, nodes_per_panel, &axis) ||
        __builtin_mul_overflow(total, axis, &total)) {
      throw parameter_error("QuadRule: total node count overflows");
    }
  }
  return total;
}

namespace {

GaussLegendre
compute_gauss_legendre(std::size_t n)
{
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    gl.nodes[n / 2] = 0.0;
  return gl;
}

constexpr std::size_t max_cached_nodes = 64;

} // namespace

const GaussLegendre&
gauss_legendre(std::size_t n)
{
  static const std::vector<GaussLegendre> table = [] {
    std::vector<GaussLegendre> t(max_cached_nodes + 1);
    for (std::size_t k = 1; k <= max_cached_nodes; ++k)
      t[k] = compute_gauss_legendre(k);
    return t;
  }();
  if (n == 0 || n > max_cached_nodes)
    throw parameter_error("gauss_legendre: node count must lie in [1, 64]");
  return table[n];
}

void
composite_nodes(double lo, double hi, std::size_t panels, std::size_t nodes_per_panel,
                std::vector<double>& x, std::vector<double>& w)
{
  const auto& gl = gauss_legendre(nodes_per_panel);
  x.clear();
  w.clear();
  x.reserve(panels * nodes_per_panel);
  w.reserve(panels * nodes_per_panel);
  const double width = (hi - lo) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + width * static_cast<double>(p);
    const double mid = a + 0.5 * width;
    for (std::size_t k = 0; k < nodes_per_panel; ++k) {
      x.push_back(mid + 0.5 * width * gl.nodes[k]);
      w.push_back(0.5 * width * gl.weights[k]);
    }
  }
}

TensorGrid::TensorGrid(const Box& box, const QuadRule& rule)
{
  if (rule.panels_per_axis.size() != box.dim())
    throw dimension_error("TensorGrid: rule and box dimensions differ");
  rule.node_count();
  nodes.resize(box.dim());
  weights.resize(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    composite_nodes(box.lower()[i], box.upper()[i], rule.panels_per_axis[i], rule.nodes_per_panel,
                    nodes[i], weights[i]);
  }
}

std::size_t
TensorGrid::size() const
{
  std::size_t s = 1;
  for (const auto& n : nodes)
    s *= n.size();
  return s;
}

void
TensorGrid::for_each(const std::function<void(Point, double, std::size_t)>& fn) const
{
  const std::size_t d = dim();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> x(d);
  const std::size_t total = size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    double w = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      x[a] = nodes[a][idx[a]];
      w *= weights[a][idx[a]];
    }
    fn(Point(x), w, flat);
    for (std::size_t a = d; a-- > 0;) {
      if (++idx[a] < nodes[a].size())
        break;
      idx[a] = 0;
    }
  }
}

namespace {

[[noreturn]] void
throw_non_finite(Point x, double value)
{
  std::ostringstream ss;
  ss.precision(17);
  ss << "non-finite integrand value " << value << " at node (";
  for (std::size_t i = 0; i < x.size(); ++i)
    ss << (i ? ", " : "") << x[i];
  ss << ")";
  throw evaluation_error(ss.str());
}

template<class Transform>
double
accumulate_grid(const Field& f, const Box& box, const QuadRule& rule, Transform transform)
{
  TensorGrid grid(box, rule);
  double sum = 0.0;
  grid.for_each([&](Point x, double w, std::size_t) {
    const double v = f(x);
    if (!std::isfinite(v))
      throw_non_finite(x, v);
    sum += w * transform(v);
  });
  return sum;
}

void
check_p(double p)
{
  if (!(p >= 1.0) || !std::isfinite(p))
    throw domain_error("lp_norm: p must satisfy p >= 1");
}

double
abs_pow(double v, double p)
{
  const double a = std::abs(v);
  if (p == 1.0)
    return a;
  if (p == 2.0)
    return a * a;
  return std::pow(a, p);
}

} // namespace

double
integrate(const Field& f, const Box& box, const QuadRule& rule)
{
  return accumulate_grid(f, box, rule, [](double v) { return v; });
}

double
integrate(const Field& f, std::span<const Piece> pieces, std::size_t nodes_per_panel)
{
  double sum = 0.0;
  for (const auto& piece : pieces)
    sum += integrate(f, piece.box, QuadRule(nodes_per_panel, piece.panels_per_axis));
  return sum;
}

double
lp_norm(const Field& f, const Box& box, double p, const QuadRule& rule)
{
  check_p(p);
  const double s = accumulate_grid(f, box, rule, [p](double v) { return abs_pow(v, p); });
  return std::pow(s, 1.0 / p);
}

double
lp_norm(const Field& f, std::span<const Piece> pieces, double p, std::size_t nodes_per_panel)
{
  check_p(p);
  double s = 0.0;
  for (const auto& piece : pieces) {
    s += accumulate_grid(f, piece.box, QuadRule(nodes_per_panel, piece.panels_per_axis),
                         [p](double v) { return abs_pow(v, p); });
  }
  return std::pow(s, 1.0 / p);
}

int
order(const MultiIndex& alpha)
{
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

namespace {

double
nested_difference(const Field& f, std::vector<double>& x, MultiIndex& alpha,
                  std::span<const double> steps)
{
  std::size_t axis = 0;
  while (axis < alpha.size() && alpha[axis] == 0)
    ++axis;
  if (axis == alpha.size())
    return f(Point(x));

  --alpha[axis];
  const double h = steps[axis];
  const double x0 = x[axis];
  x[axis] = x0 + h;
  const double fp = nested_difference(f, x, alpha, steps);
  x[axis] = x0 - h;
  const double fm = nested_difference(f, x, alpha, steps);
  x[axis] = x0;
  ++alpha[axis];
  return (fp - fm) / (2.0 * h);
}

void
check_alpha(Point point, const MultiIndex& alpha)
{
  if (alpha.size() != point.size())
    throw dimension_error("partial_fd: multi-index and point dimensions differ");
  for (int a : alpha) {
    if (a < 0)
      throw parameter_error("partial_fd: negative multi-index entry");
  }
  if (order(alpha) > max_fd_order)
    throw unsupported_order("partial_fd: total order above 6 is not supported");
}

} // namespace

double
partial_fd(const Field& f, Point point, const MultiIndex& alpha, double step)
{
  check_alpha(point, alpha);
  if (!(step > 0))
    throw parameter_error("partial_fd: step must be positive");
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> steps(x.size(), step);
  MultiIndex a = alpha;
  return nested_difference(f, x, a, steps);
}

double
partial_fd(const Field& f, Point point, const MultiIndex& alpha)
{
  check_alpha(point, alpha);
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> steps(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    steps[i] = 1e-3 * std::max(1.0, std::abs(x[i]));
  MultiIndex a = alpha;
  return nested_difference(f, x, a, steps);
}

} // namespace mixkde
