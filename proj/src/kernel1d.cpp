#include "mixkde/kernel1d.hpp"

#include "mixkde/error.hpp"

#include <algorithm>
#include <cmath>

namespace mixkde {

double
UnivariateKernel::operator()(double u) const
{
  if (u < -1.0 || u > 1.0)
    return 0.0;
  double v = 0.0;
  for (std::size_t j = poly_coeffs.size(); j-- > 0;)
    v = v * u + poly_coeffs[j];
  return v;
}

std::vector<double>
legendre_coefficients(int m)
{
  std::vector<double> p0{ 1.0 };
  if (m == 0)
    return p0;
  std::vector<double> p1{ 0.0, 1.0 };
  for (int k = 2; k <= m; ++k) {
    // k P_k = (2k - 1) u P_{k-1} - (k - 1) P_{k-2}
    std::vector<double> pk(static_cast<std::size_t>(k) + 1, 0.0);
    for (std::size_t j = 0; j < p1.size(); ++j)
      pk[j + 1] += (2.0 * k - 1.0) * p1[j];
    for (std::size_t j = 0; j < p0.size(); ++j)
      pk[j] -= (k - 1.0) * p0[j];
    for (auto& c : pk)
      c /= k;
    p0 = std::move(p1);
    p1 = std::move(pk);
  }
  return p1;
}

UnivariateKernel
build_order_kernel(int s, bool strict)
{
  if (s < 1 || s > max_kernel_order)
    throw unsupported_order("build_order_kernel: order must lie in [1, 12]");
  const int terms = (strict && s % 2 == 0) ? s + 1 : s;

  UnivariateKernel k;
  k.order = s;
  k.strict = strict;
  k.poly_coeffs.assign(static_cast<std::size_t>(terms), 0.0);
  for (int m = 0; m < terms; m += 2) { // P_m(0) = 0 for odd m
    const auto pm = legendre_coefficients(m);
    const double at_zero = pm[0];
    const double scale = 0.5 * (2.0 * m + 1.0) * at_zero;
    for (std::size_t j = 0; j < pm.size(); j += 2)
      k.poly_coeffs[j] += scale * pm[j];
  }
  while (k.poly_coeffs.size() > 1 && k.poly_coeffs.back() == 0.0)
    k.poly_coeffs.pop_back();
  return k;
}

UnivariateKernel
uniform_kernel(int order)
{
  return UnivariateKernel{ order, { 0.5 }, false };
}

double
moment(const UnivariateKernel& k, int nu)
{
  if (nu < 0)
    throw parameter_error("moment: nu must be non-negative");
  const std::size_t degree = k.degree() + static_cast<std::size_t>(nu);
  const std::size_t nodes = std::max<std::size_t>(2, degree / 2 + 1);
  const auto& gl = gauss_legendre(nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double u = gl.nodes[i];
    sum += gl.weights[i] * std::pow(u, nu) * k(u);
  }
  return sum;
}

namespace {

// Sign changes of K on [-1, 1] plus the origin, as integration breakpoints.
std::vector<double>
breakpoints(const UnivariateKernel& k)
{
  std::vector<double> bp{ -1.0, 0.0, 1.0 };
  constexpr int scan = 4096;
  double prev_u = -1.0;
  double prev_v = k(prev_u);
  for (int i = 1; i <= scan; ++i) {
    const double u = -1.0 + 2.0 * i / scan;
    const double v = k(u);
    if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
      double a = prev_u;
      double b = u;
      double fa = prev_v;
      for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = k(m);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      bp.push_back(0.5 * (a + b));
    }
    prev_u = u;
    prev_v = v;
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

} // namespace

double
absolute_moment(const UnivariateKernel& k, double nu, double q)
{
  return absolute_moment(k, nu, q, 16, 16);
}

double
absolute_moment(const UnivariateKernel& k, double nu, double q, std::size_t panels,
                std::size_t nodes_per_panel)
{
  const auto bp = breakpoints(k);
  std::vector<double> x;
  std::vector<double> w;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    composite_nodes(bp[i], bp[i + 1], panels, nodes_per_panel, x, w);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = std::abs(k(x[j]));
      sum += w[j] * std::pow(std::abs(x[j]), nu) * (q == 1.0 ? v : std::pow(v, q));
    }
  }
  return sum;
}

double
lq_norm(const UnivariateKernel& k, double q)
{
  if (std::isinf(q))
    return sup_norm(k);
  if (!(q >= 1.0))
    throw domain_error("lq_norm: q must satisfy q >= 1");
  return std::pow(absolute_moment(k, 0.0, q), 1.0 / q);
}

double
sup_norm(const UnivariateKernel& k)
{
  double m = 0.0;
  constexpr int points = 10001;
  for (int i = 0; i < points; ++i) {
    const double u = -1.0 + 2.0 * i / (points - 1);
    m = std::max(m, std::abs(k(u)));
  }
  return m;
}

OrderReport
verify_order(const UnivariateKernel& k, int s, double tol)
{
  if (!(tol > 0))
    throw parameter_error("verify_order: tol must be positive");
  OrderReport r;
  double worst = std::abs(moment(k, 0) - 1.0);
  const int last = k.strict ? s : s - 1;
  for (int nu = 1; nu <= last; ++nu)
    worst = std::max(worst, std::abs(moment(k, nu)));
  r.worst_violation = worst;
  r.absolute_moment_s = absolute_moment(k, s);
  const double sup = sup_norm(k);
  r.pass = worst <= tol && std::isfinite(r.absolute_moment_s) && std::isfinite(sup);
  return r;
}

} // namespace mixkde
