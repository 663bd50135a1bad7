#pragma once

#include "mixkde/kernel1d.hpp"
#include "mixkde/quadrature.hpp"

#include <vector>

namespace mixkde {

//! Tensor kernel kappa1^{(x) d1} (x) kappa2^{(x) d2} on R^{d1} x R^{d2}.
struct ProductKernel
{
  UnivariateKernel kappa1;
  UnivariateKernel kappa2;
  int d1 = 1;
  int d2 = 1;
  int s1 = 1;
  int s2 = 1;

  std::size_t dim() const { return static_cast<std::size_t>(d1 + d2); }
  const UnivariateKernel& factor(std::size_t axis) const
  {
    return axis < static_cast<std::size_t>(d1) ? kappa1 : kappa2;
  }
  double operator()(Point u) const;
};

ProductKernel tensor_kernel(UnivariateKernel kappa1, int d1, UnivariateKernel kappa2, int d2,
                            int s1, int s2);

//! Strict Legendre factors of orders s1 and s2.
ProductKernel strict_product_kernel(int s1, int s2, int d1, int d2);

double eval(const ProductKernel& k, Point u);

struct ClassReport
{
  double markov_defect = 0.0;
  double worst_moment = 0.0;
  double I_s1_s2 = 0.0;
  double sup_norm = 0.0;
  bool pass = false;
};

//! All multi-indices of length d whose entries sum to `total`.
std::vector<MultiIndex> indices_of_order(int d, int total);

//! Every (alpha1, alpha2), concatenated, with 1 <= |alpha| < s1 + s2,
//! |alpha1| <= s1 and |alpha2| <= s2.
std::vector<MultiIndex> required_moment_indices(const ProductKernel& k);

//! \int u^alpha K(u) du by factorization.
double mixed_moment(const ProductKernel& k, const MultiIndex& alpha);

//! \int |u^alpha| |K(u)| du by factorization.
double mixed_absolute_moment(const ProductKernel& k, const MultiIndex& alpha);

//! The univariate absolute moments are integrated with rule.nodes_per_panel
//! Gauss nodes on each of rule.panels_per_axis[0] panels between sign changes.
ClassReport verify_class(const ProductKernel& k, double tol, const QuadRule& rule);
ClassReport verify_class(const ProductKernel& k, double tol);

//! ||K||_q as a product of univariate norms; q may be +infinity.
double q_norm(const ProductKernel& k, double q);

} // namespace mixkde
