#include "mixkde/bump.hpp"

#include "mixkde/error.hpp"
#include "mixkde/quadrature.hpp"

#include <array>
#include <cmath>

namespace mixkde {

double
bump_k(double u)
{
  if (!(u > -1.0 && u < 1.0))
    return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

namespace {

using Poly = std::vector<double>;

Poly
next_polynomial(const Poly& pj, int j)
{
  // P_{j+1} = w^2 P_j' + 4 j u w P_j - 2 u P_j with w = 1 - u^2
  Poly out(pj.size() + 3, 0.0);
  for (std::size_t i = 1; i < pj.size(); ++i) {
    const double d = static_cast<double>(i) * pj[i]; // coefficient of u^{i-1} in P_j'
    out[i - 1] += d;
    out[i + 1] -= 2.0 * d;
    out[i + 3] += d;
  }
  for (std::size_t i = 0; i < pj.size(); ++i) {
    out[i + 1] += (4.0 * j - 2.0) * pj[i];
    out[i + 3] -= 4.0 * j * pj[i];
  }
  while (out.size() > 1 && out.back() == 0.0)
    out.pop_back();
  return out;
}

double
horner(const Poly& c, double u)
{
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;)
    v = v * u + c[i];
  return v;
}

void
check_order(int j)
{
  if (j < 0 || j > max_bump_derivative)
    throw unsupported_order("bump derivative order must lie in [0, 24]");
}

constexpr std::size_t table_knots = 16384;

struct LambdaTable
{
  double norm = 0.0;
  double step = 0.0;
  std::vector<double> cumulative;
  std::vector<double> slope;

  LambdaTable()
  {
    step = 2.0 / static_cast<double>(table_knots - 1);
    cumulative.assign(table_knots, 0.0);
    const auto& gl = gauss_legendre(8);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < table_knots; ++i) {
      const double a = -1.0 + step * static_cast<double>(i);
      double part = 0.0;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k)
        part += gl.weights[k] * bump_k(a + 0.5 * step * (gl.nodes[k] + 1.0));
      acc += 0.5 * step * part;
      cumulative[i + 1] = acc;
    }
    norm = acc;
    slope.resize(table_knots);
    for (std::size_t i = 0; i < table_knots; ++i) {
      cumulative[i] /= norm;
      slope[i] = bump_k(-1.0 + step * static_cast<double>(i)) / norm;
    }
    cumulative.back() = 1.0;
  }
};

const LambdaTable&
table()
{
  static const LambdaTable t;
  return t;
}

} // namespace

const std::vector<double>&
bump_derivative_polynomial(int j)
{
  check_order(j);
  static const std::vector<Poly> polys = [] {
    std::vector<Poly> p{ Poly{ 1.0 } };
    for (int i = 0; i < max_bump_derivative; ++i)
      p.push_back(next_polynomial(p.back(), i));
    return p;
  }();
  return polys[static_cast<std::size_t>(j)];
}

double
bump_k_derivative(double u, int j)
{
  check_order(j);
  if (!(u > -1.0 && u < 1.0))
    return 0.0;
  const double w = 1.0 - u * u;
  const double p = horner(bump_derivative_polynomial(j), u);
  return p * std::exp(-1.0 / w - 2.0 * j * std::log(w));
}

double
bump_l1_norm()
{
  return table().norm;
}

double
lambda(double u)
{
  return bump_k(u) / table().norm;
}

double
lambda_derivative(double u, int j)
{
  return bump_k_derivative(u, j) / table().norm;
}

double
lambda_bar(double u)
{
  if (u <= -1.0)
    return 0.0;
  if (u >= 1.0)
    return 1.0;
  const auto& t = table();
  const double pos = (u + 1.0) / t.step;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= table_knots - 1)
    i = table_knots - 2;
  const double x = pos - static_cast<double>(i);
  const double y0 = t.cumulative[i];
  const double y1 = t.cumulative[i + 1];
  double m0 = t.slope[i] * t.step;
  double m1 = t.slope[i + 1] * t.step;
  const double delta = y1 - y0;
  if (delta <= 0.0) {
    m0 = 0.0;
    m1 = 0.0;
  } else {
    // Fritsch-Carlson limiter keeps each piece monotone
    const double a = m0 / delta;
    const double b = m1 / delta;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      m0 *= tau;
      m1 *= tau;
    }
  }
  const double x2 = x * x;
  const double x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * y0 + (x3 - 2 * x2 + x) * m0 + (-2 * x3 + 3 * x2) * y1 +
         (x3 - x2) * m1;
}

double
g_function(double t)
{
  return 2.0 * lambda_bar(t) - lambda_bar(t - 1.0) - lambda_bar(t + 1.0);
}

double
g_derivative(double t, int j)
{
  if (j == 0)
    return g_function(t);
  return 2.0 * lambda_derivative(t, j - 1) - lambda_derivative(t - 1.0, j - 1) -
         lambda_derivative(t + 1.0, j - 1);
}

} // namespace mixkde
