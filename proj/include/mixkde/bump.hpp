#pragma once

#include <vector>

namespace mixkde {

//! k(u) = exp(-1/(1-u^2)) on (-1, 1), zero elsewhere.
double bump_k(double u);

inline constexpr int max_bump_derivative = 24;

//! Coefficients (ascending) of P_j with k^{(j)}(u) = P_j(u) (1-u^2)^{-2j} k(u).
const std::vector<double>& bump_derivative_polynomial(int j);

//! k^{(j)}(u); zero outside (-1, 1) and at the endpoints.
double bump_k_derivative(double u, int j);

//! ||k||_1.
double bump_l1_norm();

//! Lambda = k / ||k||_1 and its derivatives.
double lambda(double u);
double lambda_derivative(double u, int j);

//! Cumulative integral of Lambda: 0 below -1, 1 above 1, monotone cubic
//! Hermite interpolation of a 16384-knot table in between.
double lambda_bar(double u);

//! g(t) = 2 Lambda_bar(t) - Lambda_bar(t - 1) - Lambda_bar(t + 1), the
//! convolution of Lambda with 1_[0,1] - 1_[-1,0]; j-th derivative for j > 0.
double g_function(double t);
double g_derivative(double t, int j);

} // namespace mixkde
