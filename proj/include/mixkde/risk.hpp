#pragma once

#include "mixkde/density.hpp"
#include "mixkde/lower_bound.hpp"
#include "mixkde/product_kernel.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mixkde {

struct ExperimentConfig
{
  Density truth;
  ProductKernel kernel;
  double p = 2.0;
  std::vector<std::size_t> sample_sizes;
  std::size_t replicates = 100;
  Box eval_box;
  QuadRule eval_rule;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;

  void validate() const;
};

//! Evaluation box = truth support padded by the largest bandwidth; panels no
//! wider than min(smallest bandwidth, truth feature scale) / 2.
ExperimentConfig make_experiment(Density truth, ProductKernel kernel, double p,
                                 std::vector<std::size_t> sample_sizes, std::size_t replicates,
                                 std::uint64_t master_seed, std::size_t nodes_per_panel = 8);

struct RiskCell
{
  std::size_t n = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double h = 0.0;
  double risk = 0.0;
  double bias_p = 0.0;
  double stochastic_p = 0.0;
};

struct RiskReport
{
  std::vector<RiskCell> cells;
  //! (n, mean risk over replicates), in increasing n.
  std::vector<std::pair<std::size_t, double>> mean_risk;
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  double theoretical_exponent = 0.0;
};

RiskReport mc_risk(const ExperimentConfig& config);

struct RateFit
{
  double slope = 0.0;
  double stderr_ = 0.0;
};

//! Least squares of log risk on log n.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

enum class Regime
{
  mixed_upper,
  classical_min,
  classical_sum,
  aniso,
  noncompact_lower,
  nu_fold
};

Regime parse_regime(const std::string& name);
std::string to_string(Regime r);

struct RateExponent
{
  boost::rational<long long> exact;
  double value = 0.0;
};

//! Exponent of n (per unit of p) in the named bound, reduced to lowest terms.
RateExponent rate_exponent(const std::vector<int>& s, const std::vector<int>& d, double p, Regime regime);

//! p is converted to a rational with denominator at most 10^6.
boost::rational<long long> to_rational(double x);

//! 2^{p-1} [ (I sum ||d^alpha f||_p)^p + c_p 2^{p-2} ||K||_inf^{p-2} ||K||_2^2
//!          + c_p ||K||_2^p ||f||_{p/2}^{p/2} ], the sum over |alpha1| = s1, |alpha2| = s2.
double upper_bound_constant(const ProductKernel& kernel, const Density& truth, double p, double c_p = 1.0);

struct LowerHypotheses
{
  double rho_n = 0.0;
  double min_distance = 0.0; //!< smallest ||f_w - f_w'||_p^p over the code
  double threshold = 0.0; //!< (2 rho_n)^p
  bool condition_L11 = false;
  double c0_estimate = 0.0;
  double c0_bound = 0.0; //!< exp(C_2 n N^{2D} A^2)
  std::size_t words_averaged = 0;
};

LowerHypotheses verify_lower_hypotheses(const LowerBoundFamily& fam, std::size_t n, std::uint64_t seed = 0);

//! CSV with header n,replicate,seed,h,risk,bias_p,stochastic_p.
std::string risk_csv(const RiskReport& report);

} // namespace mixkde
