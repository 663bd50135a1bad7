#pragma once

#include "mixkde/quadrature.hpp"

#include <vector>

namespace mixkde {

//! Polynomial kernel on [-1, 1], zero outside.
//!
//! `poly_coeffs[j]` multiplies u^j. `strict` records that the moments vanish
//! through order s (not only s - 1).
struct UnivariateKernel
{
  int order = 1;
  std::vector<double> poly_coeffs;
  bool strict = false;

  double operator()(double u) const;
  std::size_t degree() const { return poly_coeffs.empty() ? 0 : poly_coeffs.size() - 1; }
};

inline constexpr int max_kernel_order = 12;

//! Legendre projection kernel K(u) = sum_{m<t} phi_m(0) phi_m(u), where
//! phi_m is the orthonormal Legendre basis on [-1, 1]; t = s, or s + 1 when
//! strict and s is even.
UnivariateKernel build_order_kernel(int s, bool strict);

//! The uniform density 1/2 on [-1, 1] tagged with the given order.
UnivariateKernel uniform_kernel(int order = 2);

//! \int u^nu K(u) du.
double moment(const UnivariateKernel& k, int nu);

//! \int |u|^nu |K(u)|^q du, integrated piecewise between sign changes.
double absolute_moment(const UnivariateKernel& k, double nu, double q = 1.0);

//! As above with an explicit composite rule on every piece.
double absolute_moment(const UnivariateKernel& k, double nu, double q, std::size_t panels,
                       std::size_t nodes_per_panel);

//! \int |K|^q to the power 1/q.
double lq_norm(const UnivariateKernel& k, double q);

//! sup |K| on a 10001-point grid of [-1, 1].
double sup_norm(const UnivariateKernel& k);

struct OrderReport
{
  bool pass = false;
  double worst_violation = 0.0;
  double absolute_moment_s = 0.0;
};

//! Checks normalization, vanishing moments 1..s-1 (1..s when k.strict),
//! finiteness of \int |u|^s |K| and boundedness.
OrderReport verify_order(const UnivariateKernel& k, int s, double tol);

//! Coefficients (ascending powers) of the Legendre polynomial P_m.
std::vector<double> legendre_coefficients(int m);

} // namespace mixkde
