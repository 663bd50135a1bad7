#include "mixkde/cli.hpp"

#include "CLI11.hpp"
#include "mixkde/error.hpp"
#include "mixkde/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace mixkde::cli {

namespace {

struct Options
{
  std::vector<int> s;
  std::vector<int> d;
  double p = 2.0;
  double r = 2.0;
  std::string regime;
  int order = 0;
  bool strict = false;
  double tol = 1e-8;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t replicates = 0;
  std::size_t n = 1000;
  double N = 20.0;
};

void
write_text(const std::string& path, const std::string& text, std::ostream& out)
{
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

json
read_json(const std::string& path)
{
  std::ifstream f(path);
  if (!f)
    throw std::runtime_error("cannot open '" + path + "'");
  return json::parse(f);
}

void
require_pair(const std::vector<int>& v, const char* flag)
{
  if (v.size() != 2)
    throw CLI::ValidationError(flag, "expects two comma-separated integers");
}

int
kernel_build(const Options& o, std::ostream& out)
{
  if (!o.s.empty() || !o.d.empty()) {
    require_pair(o.s, "--s");
    require_pair(o.d, "--d");
    const auto k = tensor_kernel(build_order_kernel(o.s[0], o.strict), o.d[0],
                                 build_order_kernel(o.s[1], o.strict), o.d[1], o.s[0], o.s[1]);
    write_text(o.out, dump_json(to_json(k)), out);
    return exit_ok;
  }
  write_text(o.out, dump_json(to_json(build_order_kernel(o.order, o.strict))), out);
  return exit_ok;
}

int
kernel_verify(const Options& o, std::ostream& out)
{
  const json j = read_json(o.config);
  if (j.contains("kappa1")) {
    const auto report = verify_class(product_kernel_from_json(j), o.tol);
    write_text(o.out, dump_json(to_json(report)), out);
    return report.pass ? exit_ok : exit_verification_failed;
  }
  const auto k = univariate_kernel_from_json(j);
  const auto report = verify_order(k, o.order > 0 ? o.order : k.order, o.tol);
  write_text(o.out, dump_json(to_json(report)), out);
  return report.pass ? exit_ok : exit_verification_failed;
}

int
rate(const Options& o, std::ostream& out)
{
  const auto e = rate_exponent(o.s, o.d, o.p, parse_regime(o.regime));
  char buf[128];
  std::snprintf(buf, sizeof buf, "%lld/%lld %.15g\n", e.exact.numerator(), e.exact.denominator(), e.value);
  write_text(o.out, buf, out);
  return exit_ok;
}

LowerBoundFamily
family_from(const Options& o)
{
  require_pair(o.s, "--s");
  require_pair(o.d, "--d");
  bool compact = true;
  if (o.regime == "noncompact")
    compact = false;
  else if (!o.regime.empty() && o.regime != "compact")
    throw CLI::ValidationError("--regime", "family regimes are 'compact' and 'noncompact'");
  const auto params = choose_parameters(o.n, o.r, o.p, o.s[0], o.s[1], o.d[0], o.d[1], compact, o.N);
  return build_family(params, o.seed);
}

json
family_json(const LowerBoundFamily& fam)
{
  return json{ { "params", to_json(fam.params) },
               { "code",
                 { { "length", fam.code.length() },
                   { "log2_size", fam.code.log2_size() },
                   { "min_distance", fam.code.min_distance() },
                   { "explicit", fam.code.is_explicit() } } },
               { "g_norms",
                 { { "p", fam.gnorms.p_norm }, { "l2", fam.gnorms.l2_norm }, { "sobolev", fam.gnorms.sobolev } } } };
}

int
family_build(const Options& o, std::ostream& out)
{
  write_text(o.out, dump_json(family_json(family_from(o))), out);
  return exit_ok;
}

int
family_verify(const Options& o, std::ostream& out)
{
  const auto fam = family_from(o);
  const auto h = verify_lower_hypotheses(fam, o.n, o.seed);
  const bool c0_ok = h.c0_estimate <= h.c0_bound * (1.0 + 1e-9);
  json j = family_json(fam);
  j["hypotheses"] = to_json(h);
  j["c0_within_bound"] = c0_ok;
  j["pass"] = h.condition_L11 && c0_ok;
  write_text(o.out, dump_json(j), out);
  return h.condition_L11 && c0_ok ? exit_ok : exit_verification_failed;
}

int
risk_run(const Options& o, const CLI::App& sub, std::ostream& out)
{
  const json j = read_json(o.config);
  auto spec = experiment_from_json(j);
  if (sub.count("--replicates") > 0)
    spec.config.replicates = o.replicates;
  if (sub.count("--seed") > 0)
    spec.config.master_seed = o.seed;
  if (sub.count("--threads") > 0)
    spec.config.threads = o.threads;
  const auto report = mc_risk(spec.config);
  const json summary = risk_summary(report, spec.slope_tolerance);
  if (o.out.empty()) {
    out << dump_json(summary);
  } else {
    write_text(o.out, risk_csv(report), out);
    std::filesystem::path p(o.out);
    p.replace_extension("summary.json");
    write_text(p.string(), dump_json(summary), out);
  }
  return summary.at("pass").get<bool>() ? exit_ok : exit_verification_failed;
}

} // namespace

int
run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Product-kernel density estimation under mixed smoothness", "mixkde" };
  app.require_subcommand(1, 1);
  Options o;

  auto* kb = app.add_subcommand("kernel-build", "Build a Legendre kernel of a given order");
  kb->add_option("--order", o.order, "kernel order s (1..12)");
  kb->add_flag("--strict", o.strict, "vanishing moments through order s");
  kb->add_option("--s", o.s, "orders s1,s2 of a product kernel")->delimiter(',');
  kb->add_option("--d", o.d, "dimensions d1,d2 of a product kernel")->delimiter(',');
  kb->add_option("--out", o.out, "output JSON path (stdout when absent)");

  auto* kv = app.add_subcommand("kernel-verify", "Verify a kernel record");
  kv->add_option("--config", o.config, "kernel JSON record")->required()->check(CLI::ExistingFile);
  kv->add_option("--order", o.order, "claimed order (defaults to the record's)");
  kv->add_option("--tol", o.tol, "moment tolerance");
  kv->add_option("--out", o.out, "output JSON path (stdout when absent)");

  auto* rt = app.add_subcommand("rate", "Exact rate exponent of a named bound");
  rt->add_option("--s", o.s, "smoothness list, comma separated")->required()->delimiter(',');
  rt->add_option("--d", o.d, "dimension list, comma separated")->required()->delimiter(',');
  rt->add_option("--p", o.p, "integrability exponent p >= 1");
  rt->add_option("--regime", o.regime,
                 "mixed-upper | classical-min | classical-sum | aniso | noncompact-lower | nu-fold")
    ->required();
  rt->add_option("--out", o.out, "output path (stdout when absent)");

  std::vector<CLI::App*> family_cmds{
    app.add_subcommand("family-build", "Choose parameters and build the lower-bound family"),
    app.add_subcommand("family-verify", "Check the separation and affinity hypotheses of the family"),
  };
  for (auto* f : family_cmds) {
    f->add_option("--s", o.s, "s1,s2")->required()->delimiter(',');
    f->add_option("--d", o.d, "d1,d2")->required()->delimiter(',');
    f->add_option("--p", o.p, "p >= 1");
    f->add_option("--r", o.r, "ball radius");
    f->add_option("--n", o.n, "sample size");
    f->add_option("--N", o.N, "plateau scale, N > 8");
    f->add_option("--regime", o.regime, "compact | noncompact");
    f->add_option("--seed", o.seed, "code construction and subsampling seed");
    f->add_option("--out", o.out, "output JSON path (stdout when absent)");
  }

  auto* rr = app.add_subcommand("risk-run", "Monte Carlo risk experiment");
  rr->add_option("--config", o.config, "experiment JSON")->required()->check(CLI::ExistingFile);
  rr->add_option("--out", o.out, "CSV path; the summary goes to <stem>.summary.json");
  rr->add_option("--seed", o.seed, "master seed override");
  rr->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  rr->add_option("--replicates", o.replicates, "replicates override")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (kb->parsed()) {
      if (o.s.empty() && o.d.empty() && o.order == 0)
        throw CLI::ValidationError("--order", "required unless --s and --d are given");
      return kernel_build(o, out);
    }
    if (kv->parsed())
      return kernel_verify(o, out);
    if (rt->parsed())
      return rate(o, out);
    if (family_cmds[0]->parsed())
      return family_build(o, out);
    if (family_cmds[1]->parsed())
      return family_verify(o, out);
    if (rr->parsed())
      return risk_run(o, *rr, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

} // namespace mixkde::cli
