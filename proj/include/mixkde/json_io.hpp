#pragma once

#include "mixkde/lower_bound.hpp"
#include "mixkde/product_kernel.hpp"
#include "mixkde/risk.hpp"

#include "json.hpp"

#include <string>

namespace mixkde {

using json = nlohmann::json;

//! Serializes with every floating-point number at 17 significant digits.
std::string dump_json(const json& j, int indent = 2);

json to_json(const UnivariateKernel& k);
UnivariateKernel univariate_kernel_from_json(const json& j);

json to_json(const ProductKernel& k);
ProductKernel product_kernel_from_json(const json& j);

json to_json(const OrderReport& r);
json to_json(const ClassReport& r);
json to_json(const FamilyParams& fp);
json to_json(const LowerHypotheses& h);

//! Registered densities: {"name": "tensor_bump", "centers": [...], "half_widths": [...]},
//! {"name": "tensor_gaussian", "means": [...], "sds": [...]}.
Density density_from_json(const json& j);

//! A kernel given either as a product record or as
//! {"s": [s1, s2], "d": [d1, d2], "strict": true}.
ProductKernel experiment_kernel_from_json(const json& j);

struct ExperimentSpec
{
  ExperimentConfig config;
  double slope_tolerance = 0.15;
};

ExperimentSpec experiment_from_json(const json& j);

json risk_summary(const RiskReport& report, double slope_tolerance);

} // namespace mixkde
