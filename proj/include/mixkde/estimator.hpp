#pragma once

#include "mixkde/density.hpp"
#include "mixkde/product_kernel.hpp"

#include <vector>

namespace mixkde {

//! h = n^{-1/(2(s1+s2) + d1 + d2)}, kept strictly below 1.
double bandwidth_rule(std::size_t n, int s1, int s2, int d1, int d2);

//! Product kernel estimator (1 / (n h^D)) sum_i K((X_i - x) / h).
class KdeModel
{
public:
  KdeModel(ProductKernel kernel, double h, SampleSet sample);

  const ProductKernel& kernel() const { return kernel_; }
  double bandwidth() const { return h_; }
  const SampleSet& sample() const { return sample_; }
  std::size_t size() const { return sample_.size(); }

  double operator()(Point x) const;

  //! Estimator values at every node of `grid` (last axis fastest).
  std::vector<double> on_grid(const TensorGrid& grid) const;

private:
  ProductKernel kernel_;
  double h_;
  SampleSet sample_;
  //! Sample points sorted on the first coordinate.
  SampleSet sorted_;
};

double kde_eval(const KdeModel& model, Point x);

//! E_f[f_hat](x) = \int K(u) f(x + h u) du, integrated over [-1, 1]^D in the
//! kernel variable. Product truths are convolved axis by axis.
Field kde_mean_field(const ProductKernel& kernel, double h, const Density& truth,
                     std::size_t panels_per_axis = 16, std::size_t nodes_per_panel = 8);

//! kde_mean_field at every node of `grid`.
std::vector<double> mean_field_on_grid(const ProductKernel& kernel, double h, const Density& truth,
                                       const TensorGrid& grid);

//! Truth values at every node of `grid`.
std::vector<double> truth_on_grid(const Density& truth, const TensorGrid& grid);

//! || E f_hat - f ||_p over `box`.
double bias_lp(const ProductKernel& kernel, double h, const Density& truth, double p, const Box& box,
               const QuadRule& rule);

//! (sum_k w_k |a_k - b_k|^p) over grid nodes, i.e. the p-th power of the
//! grid L^p distance.
double grid_lp_power(const TensorGrid& grid, const std::vector<double>& a, const std::vector<double>& b,
                     double p);

} // namespace mixkde
