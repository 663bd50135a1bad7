#pragma once

// Reference implementations used only by the tests. Nothing here calls into
// the library's quadrature, kernel or estimator code.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

//! Adaptive Simpson on [a, b] to absolute tolerance `tol`.
inline double
simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol)
    return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double
adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                 int max_depth = 48)
{
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

struct Rule
{
  std::vector<double> x;
  std::vector<double> w;
};

//! n-point Gauss-Legendre rule on [-1, 1] from the eigen-decomposition of
//! the Jacobi matrix (Golub-Welsch).
inline Rule
golub_welsch(int n)
{
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  for (int i = 0; i < n; ++i) {
    r.x.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.w.push_back(2.0 * v * v);
  }
  return r;
}

//! Composite rule with `panels` equal panels of an n-point rule on [lo, hi].
inline Rule
composite(double lo, double hi, int panels, int n)
{
  const Rule base = golub_welsch(n);
  Rule r;
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    for (int i = 0; i < n; ++i) {
      r.x.push_back(a + 0.5 * width * (base.x[i] + 1.0));
      r.w.push_back(0.5 * width * base.w[i]);
    }
  }
  return r;
}

//! exp(-1/(1-u^2)) on (-1, 1).
inline double
bump(double u)
{
  if (u <= -1.0 || u >= 1.0)
    return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

//! Bisection on the sign of f over [a, b].
inline double
bisect(const std::function<double(double)>& f, double a, double b)
{
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

//! Coefficients of the order-s Legendre kernel from the Legendre sum, built
//! with the three-term recurrence evaluated pointwise.
inline double
legendre_p(int m, double u)
{
  double p0 = 1.0;
  if (m == 0)
    return p0;
  double p1 = u;
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * u * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

inline double
legendre_kernel(int terms, double u)
{
  if (u < -1.0 || u > 1.0)
    return 0.0;
  double v = 0.0;
  for (int m = 0; m < terms; ++m)
    v += 0.5 * (2.0 * m + 1.0) * legendre_p(m, 0.0) * legendre_p(m, u);
  return v;
}

//! Direct O(n) kernel sum of a product kernel with identical factor shape
//! per block. `factor(axis, u)` gives the univariate kernel value.
inline double
kde_direct(const std::vector<double>& data, std::size_t dim, double h,
           const std::function<double(std::size_t, double)>& factor, const double* x)
{
  const std::size_t n = data.size() / dim;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double k = 1.0;
    for (std::size_t a = 0; a < dim && k != 0.0; ++a)
      k *= factor(a, (data[i * dim + a] - x[a]) / h);
    sum += k;
  }
  return sum / (static_cast<double>(n) * std::pow(h, static_cast<double>(dim)));
}

//! Ordinary least squares slope of y on x.
inline double
ols_slope(const std::vector<double>& x, const std::vector<double>& y)
{
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

//! Sum of w |fhat - f|^p over a 2-d composite Gauss grid, with fhat the
//! direct kernel sum and the kernel given pointwise by `factor`.
inline double
brute_force_risk(const std::vector<double>& data, double h,
                 const std::function<double(std::size_t, double)>& factor,
                 const std::function<double(double, double)>& truth, const double* lo, const double* hi,
                 const std::size_t* panels, int nodes, double p)
{
  const Rule rx = composite(lo[0], hi[0], static_cast<int>(panels[0]), nodes);
  const Rule ry = composite(lo[1], hi[1], static_cast<int>(panels[1]), nodes);
  double total = 0.0;
  for (std::size_t i = 0; i < rx.x.size(); ++i) {
    for (std::size_t j = 0; j < ry.x.size(); ++j) {
      const double x[] = { rx.x[i], ry.x[j] };
      const double fhat = kde_direct(data, 2, h, factor, x);
      total += rx.w[i] * ry.w[j] * std::pow(std::abs(fhat - truth(x[0], x[1])), p);
    }
  }
  return total;
}

} // namespace oracle
