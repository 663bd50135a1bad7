#include "doctest.h"
#include "oracles.hpp"

#include "mixkde/error.hpp"
#include "mixkde/kernel1d.hpp"

#include <cmath>

using namespace mixkde;

TEST_SUITE_BEGIN("kernel1d");

TEST_CASE("order 2 is the uniform kernel")
{
  const auto k = build_order_kernel(2, false);
  REQUIRE(k.poly_coeffs.size() == 1);
  CHECK(k.poly_coeffs[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(k(0.3) == doctest::Approx(0.5));
  CHECK(k(1.2) == 0.0);
}

TEST_CASE("order 4 is (9 - 15 u^2) / 8")
{
  const auto k = build_order_kernel(4, false);
  for (double u : { -0.9, -0.2, 0.0, 0.45, 1.0 })
    CHECK(std::abs(k(u) - (9.0 - 15.0 * u * u) / 8.0) < 1e-14);
  const auto f = [&](double u) { return k(u); };
  const auto f2 = [&](double u) { return u * u * k(u); };
  CHECK(std::abs(oracle::adaptive_simpson(f, -1.0, 1.0) - 1.0) < 1e-10);
  CHECK(std::abs(oracle::adaptive_simpson(f2, -1.0, 1.0)) < 1e-10);
}

TEST_CASE("matches the pointwise Legendre sum")
{
  for (int s = 1; s <= max_kernel_order; ++s) {
    for (bool strict : { false, true }) {
      const auto k = build_order_kernel(s, strict);
      const int terms = (strict && s % 2 == 0) ? s + 1 : s;
      for (double u = -1.0; u <= 1.0; u += 0.0625)
        CHECK(std::abs(k(u) - oracle::legendre_kernel(terms, u)) < 1e-9 * std::max(1.0, std::abs(k(u))));
    }
  }
}

TEST_CASE("moment examples")
{
  CHECK(std::abs(moment(build_order_kernel(2, false), 0) - 1.0) < 1e-10);
  CHECK(std::abs(moment(build_order_kernel(4, false), 2)) < 1e-8);
  CHECK(moment(uniform_kernel(), 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  for (int s = 1; s <= 8; ++s)
    for (int nu = 1; nu <= 15; nu += 2)
      CHECK(std::abs(moment(build_order_kernel(s, true), nu)) < 1e-12);
}

TEST_CASE("verify_order examples")
{
  CHECK(verify_order(build_order_kernel(4, false), 4, 1e-8).pass);
  CHECK_FALSE(verify_order(uniform_kernel(3), 3, 1e-8).pass);
  CHECK(verify_order(build_order_kernel(2, false), 2, 1e-8).pass);
}

TEST_CASE("errors")
{
  CHECK_THROWS_AS(build_order_kernel(0, false), unsupported_order);
  CHECK_THROWS_AS(build_order_kernel(13, true), unsupported_order);
  CHECK_THROWS_AS(moment(uniform_kernel(), -1), parameter_error);
}

TEST_CASE("property: symmetric, verified, idempotent")
{
  for (int s = 1; s <= 8; ++s) {
    for (bool strict : { false, true }) {
      const auto k = build_order_kernel(s, strict);
      for (std::size_t j = 1; j < k.poly_coeffs.size(); j += 2)
        CHECK(k.poly_coeffs[j] == 0.0);
      for (double u = 0.0; u <= 1.0; u += 0.1)
        CHECK(k(u) == k(-u));
      CHECK(verify_order(k, s, 1e-8).pass);
      const auto again = build_order_kernel(s, strict);
      CHECK(again.poly_coeffs == k.poly_coeffs);
    }
  }
}

TEST_CASE("absolute moments against the adaptive oracle")
{
  for (int s : { 3, 4, 6 }) {
    const auto k = build_order_kernel(s, true);
    const auto f = [&](double u) { return std::pow(std::abs(u), s) * std::abs(k(u)); };
    // split at the sign changes so Simpson sees smooth pieces
    std::vector<double> cuts{ -1.0 };
    double prev = k(-1.0);
    for (int i = 1; i <= 2000; ++i) {
      const double u = -1.0 + i / 1000.0;
      const double v = k(u);
      if ((prev < 0.0) != (v < 0.0))
        cuts.push_back(oracle::bisect([&](double x) { return k(x); }, u - 1e-3, u));
      prev = v;
    }
    cuts.push_back(1.0);
    double ref = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      ref += oracle::adaptive_simpson(f, cuts[i], cuts[i + 1], 1e-14);
    CHECK(std::abs(absolute_moment(k, s) - ref) < 1e-10 * ref);
  }
}

TEST_CASE("lq_norm of the order 4 kernel")
{
  const auto k = build_order_kernel(4, false);
  // \int ((9 - 15u^2)/8)^2 = (1/64) \int 81 - 270 u^2 + 225 u^4 = (1/64)(162 - 180 + 90)
  CHECK(std::pow(lq_norm(k, 2.0), 2.0) == doctest::Approx(72.0 / 64.0).epsilon(1e-12));
  CHECK(sup_norm(k) == doctest::Approx(9.0 / 8.0).epsilon(1e-12));
  CHECK_THROWS_AS(lq_norm(k, 0.5), domain_error);
}

TEST_SUITE_END();
