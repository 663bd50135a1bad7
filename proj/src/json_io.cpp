#include "mixkde/json_io.hpp"

#include "mixkde/error.hpp"
#include "mixkde/estimator.hpp"

#include <cmath>
#include <cstdio>

namespace mixkde {

namespace {

void
dump(const json& j, int indent, int depth, std::string& out)
{
  const auto pad = [&](int d) {
    if (indent >= 0)
      out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  const char* nl = indent >= 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        pad(depth + 1);
        out += json(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        dump(it.value(), indent, depth + 1, out);
      }
      out += nl;
      pad(depth);
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i)
          out += indent >= 0 ? ", " : ",";
        dump(j[i], indent, depth + 1, out);
      }
      out += "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

std::vector<int>
int_pair(const json& j, const char* key)
{
  auto v = j.at(key).get<std::vector<int>>();
  if (v.size() != 2)
    throw parameter_error(std::string("expected two entries in '") + key + "'");
  return v;
}

} // namespace

std::string
dump_json(const json& j, int indent)
{
  std::string out;
  dump(j, indent, 0, out);
  out += "\n";
  return out;
}

json
to_json(const UnivariateKernel& k)
{
  return json{ { "order", k.order }, { "strict", k.strict }, { "poly_coeffs", k.poly_coeffs } };
}

UnivariateKernel
univariate_kernel_from_json(const json& j)
{
  UnivariateKernel k;
  k.order = j.at("order").get<int>();
  k.strict = j.value("strict", false);
  k.poly_coeffs = j.at("poly_coeffs").get<std::vector<double>>();
  if (k.poly_coeffs.empty())
    throw parameter_error("kernel record has no coefficients");
  return k;
}

json
to_json(const ProductKernel& k)
{
  return json{ { "s1", k.s1 }, { "s2", k.s2 }, { "d1", k.d1 }, { "d2", k.d2 },
               { "kappa1", to_json(k.kappa1) }, { "kappa2", to_json(k.kappa2) } };
}

ProductKernel
product_kernel_from_json(const json& j)
{
  return tensor_kernel(univariate_kernel_from_json(j.at("kappa1")), j.at("d1").get<int>(),
                       univariate_kernel_from_json(j.at("kappa2")), j.at("d2").get<int>(),
                       j.at("s1").get<int>(), j.at("s2").get<int>());
}

json
to_json(const OrderReport& r)
{
  return json{ { "pass", r.pass }, { "worst_violation", r.worst_violation },
               { "absolute_moment_s", r.absolute_moment_s } };
}

json
to_json(const ClassReport& r)
{
  return json{ { "pass", r.pass },          { "markov_defect", r.markov_defect },
               { "worst_moment", r.worst_moment }, { "I_s1_s2", r.I_s1_s2 },
               { "sup_norm", r.sup_norm } };
}

json
to_json(const FamilyParams& fp)
{
  return json{ { "s1", fp.s1 },
               { "s2", fp.s2 },
               { "d1", fp.d1 },
               { "d2", fp.d2 },
               { "p", fp.p },
               { "r", fp.r },
               { "N", fp.N },
               { "kappa", fp.kappa },
               { "sigma", fp.sigma },
               { "A", fp.A },
               { "M", fp.M },
               { "epsilon", fp.epsilon },
               { "r_star", fp.r_star },
               { "compact_regime", fp.compact_regime },
               { "n", fp.n },
               { "constants",
                 { { "C0", fp.C0 }, { "C1", fp.C1 }, { "C2", fp.C2 }, { "C3", fp.C3 }, { "C4", fp.C4 },
                   { "C5", fp.C5 }, { "C6", fp.C6 }, { "C7", fp.C7 } } } };
}

json
to_json(const LowerHypotheses& h)
{
  return json{ { "rho_n", h.rho_n },
               { "min_distance", h.min_distance },
               { "threshold", h.threshold },
               { "condition_L11", h.condition_L11 },
               { "c0_estimate", h.c0_estimate },
               { "c0_bound", h.c0_bound },
               { "words_averaged", h.words_averaged } };
}

Density
density_from_json(const json& j)
{
  const auto name = j.at("name").get<std::string>();
  if (name == "tensor_bump")
    return tensor_bump(j.at("centers").get<std::vector<double>>(),
                       j.at("half_widths").get<std::vector<double>>());
  if (name == "tensor_gaussian")
    return tensor_gaussian(j.at("means").get<std::vector<double>>(), j.at("sds").get<std::vector<double>>());
  throw parameter_error("unknown density '" + name + "'");
}

ProductKernel
experiment_kernel_from_json(const json& j)
{
  if (j.contains("kappa1"))
    return product_kernel_from_json(j);
  const auto s = int_pair(j, "s");
  const auto d = int_pair(j, "d");
  const bool strict = j.value("strict", true);
  return tensor_kernel(build_order_kernel(s[0], strict), d[0], build_order_kernel(s[1], strict), d[1],
                       s[0], s[1]);
}

ExperimentSpec
experiment_from_json(const json& j)
{
  Density truth = density_from_json(j.at("truth"));
  ProductKernel kernel = experiment_kernel_from_json(j.at("kernel"));
  ExperimentSpec spec{ make_experiment(std::move(truth), std::move(kernel), j.value("p", 2.0),
                                       j.at("sample_sizes").get<std::vector<std::size_t>>(),
                                       j.value("replicates", std::size_t{ 100 }),
                                       j.value("master_seed", std::uint64_t{ 0 }),
                                       j.value("nodes_per_panel", std::size_t{ 8 })),
                       j.value("slope_tolerance", 0.15) };
  if (j.contains("eval_box")) {
    spec.config.eval_box = Box(j.at("eval_box").at("lower").get<std::vector<double>>(),
                               j.at("eval_box").at("upper").get<std::vector<double>>());
    if (!j.contains("panels_per_axis")) {
      const double h_min = bandwidth_rule(spec.config.sample_sizes.back(), spec.config.kernel.s1,
                                          spec.config.kernel.s2, spec.config.kernel.d1, spec.config.kernel.d2);
      spec.config.eval_rule = QuadRule::for_feature_scale(
        spec.config.eval_box, std::min(h_min, spec.config.truth.feature_scale), spec.config.eval_rule.nodes_per_panel);
    }
  }
  if (j.contains("panels_per_axis"))
    spec.config.eval_rule = QuadRule(spec.config.eval_rule.nodes_per_panel,
                                     j.at("panels_per_axis").get<std::vector<std::size_t>>());
  spec.config.threads = j.value("threads", 1u);
  return spec;
}

json
risk_summary(const RiskReport& report, double slope_tolerance)
{
  json means = json::array();
  for (const auto& [n, m] : report.mean_risk)
    means.push_back(json{ { "n", n }, { "mean_risk", m } });
  const bool pass = std::abs(report.fitted_slope + report.theoretical_exponent) <= slope_tolerance;
  return json{ { "fitted_slope", report.fitted_slope },
               { "slope_stderr", report.slope_stderr },
               { "theoretical_exponent", report.theoretical_exponent },
               { "slope_tolerance", slope_tolerance },
               { "mean_risk", means },
               { "pass", pass } };
}

} // namespace mixkde
