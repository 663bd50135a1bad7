#include "mixkde/product_kernel.hpp"

#include "mixkde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mixkde {

double
ProductKernel::operator()(Point u) const
{
  if (u.size() != dim())
    throw dimension_error("ProductKernel: argument dimension differs from d1 + d2");
  double v = 1.0;
  for (std::size_t i = 0; i < u.size() && v != 0.0; ++i)
    v *= factor(i)(u[i]);
  return v;
}

ProductKernel
tensor_kernel(UnivariateKernel kappa1, int d1, UnivariateKernel kappa2, int d2, int s1, int s2)
{
  if (d1 < 1 || d2 < 1 || s1 < 1 || s2 < 1)
    throw parameter_error("tensor_kernel: d1, d2, s1, s2 must be positive");
  if (kappa1.poly_coeffs.empty() || kappa2.poly_coeffs.empty())
    throw parameter_error("tensor_kernel: empty factor polynomial");
  return ProductKernel{ std::move(kappa1), std::move(kappa2), d1, d2, s1, s2 };
}

ProductKernel
strict_product_kernel(int s1, int s2, int d1, int d2)
{
  return tensor_kernel(build_order_kernel(s1, true), d1, build_order_kernel(s2, true), d2, s1, s2);
}

double
eval(const ProductKernel& k, Point u)
{
  return k(u);
}

std::vector<MultiIndex>
indices_of_order(int d, int total)
{
  std::vector<MultiIndex> out;
  MultiIndex a(static_cast<std::size_t>(d), 0);
  // odometer over compositions of `total` into d parts, first axis slowest
  auto rec = [&](auto&& self, std::size_t axis, int left) -> void {
    if (axis + 1 == a.size()) {
      a[axis] = left;
      out.push_back(a);
      return;
    }
    for (int v = left; v >= 0; --v) {
      a[axis] = v;
      self(self, axis + 1, left - v);
    }
  };
  if (d >= 1 && total >= 0)
    rec(rec, 0, total);
  return out;
}

namespace {

MultiIndex
concat(const MultiIndex& a, const MultiIndex& b)
{
  MultiIndex c = a;
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

void
check_alpha(const ProductKernel& k, const MultiIndex& alpha)
{
  if (alpha.size() != k.dim())
    throw dimension_error("product kernel moment: multi-index length differs from d1 + d2");
}

} // namespace

std::vector<MultiIndex>
required_moment_indices(const ProductKernel& k)
{
  std::vector<MultiIndex> out;
  for (int n1 = 0; n1 <= k.s1; ++n1) {
    for (int n2 = 0; n2 <= k.s2; ++n2) {
      const int total = n1 + n2;
      if (total < 1 || total >= k.s1 + k.s2)
        continue;
      for (const auto& a1 : indices_of_order(k.d1, n1))
        for (const auto& a2 : indices_of_order(k.d2, n2))
          out.push_back(concat(a1, a2));
    }
  }
  return out;
}

double
mixed_moment(const ProductKernel& k, const MultiIndex& alpha)
{
  check_alpha(k, alpha);
  double v = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    v *= moment(k.factor(i), alpha[i]);
  return v;
}

namespace {

double
absolute_product(const ProductKernel& k, const MultiIndex& alpha, std::size_t panels,
                 std::size_t nodes)
{
  double v = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    v *= absolute_moment(k.factor(i), alpha[i], 1.0, panels, nodes);
  return v;
}

} // namespace

double
mixed_absolute_moment(const ProductKernel& k, const MultiIndex& alpha)
{
  check_alpha(k, alpha);
  return absolute_product(k, alpha, 16, 16);
}

ClassReport
verify_class(const ProductKernel& k, double tol, const QuadRule& rule)
{
  if (!(tol > 0))
    throw parameter_error("verify_class: tol must be positive");
  ClassReport r;
  r.markov_defect = std::abs(mixed_moment(k, MultiIndex(k.dim(), 0)) - 1.0);
  for (const auto& a : required_moment_indices(k))
    r.worst_moment = std::max(r.worst_moment, std::abs(mixed_moment(k, a)));

  const std::size_t panels = rule.panels_per_axis.front();
  for (const auto& a1 : indices_of_order(k.d1, k.s1))
    for (const auto& a2 : indices_of_order(k.d2, k.s2))
      r.I_s1_s2 = std::max(r.I_s1_s2, absolute_product(k, concat(a1, a2), panels, rule.nodes_per_panel));

  r.sup_norm = q_norm(k, std::numeric_limits<double>::infinity());
  r.pass = r.markov_defect <= tol && r.worst_moment <= tol && std::isfinite(r.I_s1_s2) &&
           std::isfinite(r.sup_norm);
  return r;
}

ClassReport
verify_class(const ProductKernel& k, double tol)
{
  return verify_class(k, tol, QuadRule::uniform(1, 16, 16));
}

double
q_norm(const ProductKernel& k, double q)
{
  if (!(q >= 1.0))
    throw domain_error("q_norm: q must satisfy q >= 1");
  return std::pow(lq_norm(k.kappa1, q), k.d1) * std::pow(lq_norm(k.kappa2, q), k.d2);
}

} // namespace mixkde
