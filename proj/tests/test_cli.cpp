#include "doctest.h"

#include "mixkde/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

TEST_SUITE_BEGIN("cli");

namespace {

namespace fs = std::filesystem;

struct Result
{
  int code = -1;
  std::string out;
  std::string err;
};

Result
run_cli(std::vector<std::string> args)
{
  args.insert(args.begin(), "mixkde");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = mixkde::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

//! Runs the installed binary and returns its exit status.
int
run_binary(const std::string& args)
{
  const std::string cmd = std::string(MIXKDE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path
scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / "mixkde_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_CASE("rate prints the exact exponent")
{
  const auto r = run_cli({ "rate", "--s", "4,1", "--d", "1,1", "--regime", "mixed-upper" });
  CHECK(r.code == 0);
  CHECK(r.out.rfind("5/12 ", 0) == 0);
  CHECK(r.out.find("0.416666666666667") != std::string::npos);
  CHECK(run_cli({ "rate", "--s", "4,1", "--d", "1,1", "--regime", "aniso" }).out.rfind("4/13", 0) == 0);
  CHECK(run_binary("rate --s 4,1 --d 1,1 --regime mixed-upper") == 0);
}

TEST_CASE("kernel-verify fails on a mislabelled uniform kernel")
{
  const auto path = scratch("uniform3.json");
  {
    std::ofstream f(path);
    f << R"({"order": 3, "strict": false, "poly_coeffs": [0.5]})";
  }
  CHECK(run_cli({ "kernel-verify", "--config", path.string() }).code == 1);
  CHECK(run_binary("kernel-verify --config " + path.string()) == 1);

  const auto good = scratch("order4.json");
  CHECK(run_cli({ "kernel-build", "--order", "4", "--out", good.string() }).code == 0);
  CHECK(run_cli({ "kernel-verify", "--config", good.string() }).code == 0);
}

TEST_CASE("usage errors exit 2")
{
  const auto r = run_cli({ "risk-run", "--config", "missing.json" });
  CHECK(r.code == 2);
  CHECK(r.err.find("missing.json") != std::string::npos);
  CHECK(run_binary("risk-run --config missing.json") == 2);

  const auto bad = run_cli({ "rate", "--s", "4,1", "--d", "1,1", "--regime", "aniso", "--bogus", "3" });
  CHECK(bad.code == 2);
  CHECK(bad.err.find("--bogus") != std::string::npos);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({ "rate", "--s", "4,1", "--d", "1,1", "--regime", "nope" }).code == 2);
}

TEST_CASE("help lists every flag")
{
  const std::vector<std::pair<std::string, std::vector<std::string>>> subs{
    { "kernel-build", { "--order", "--strict", "--s", "--d", "--out" } },
    { "kernel-verify", { "--config", "--order", "--tol", "--out" } },
    { "rate", { "--s", "--d", "--p", "--regime", "--out" } },
    { "family-build", { "--s", "--d", "--p", "--r", "--n", "--N", "--regime", "--seed", "--out" } },
    { "family-verify", { "--s", "--d", "--p", "--r", "--n", "--N", "--regime", "--seed", "--out" } },
    { "risk-run", { "--config", "--out", "--seed", "--threads", "--replicates" } },
  };
  for (const auto& [name, flags] : subs) {
    const auto r = run_cli({ name, "--help" });
    CHECK(r.code == 0);
    for (const auto& f : flags)
      CHECK_MESSAGE(r.out.find(f) != std::string::npos, name << " help lacks " << f);
    CHECK(run_binary(name + " --help") == 0);
  }
  CHECK(run_cli({ "--help" }).code == 0);
}

TEST_CASE("outputs are byte-identical across invocations")
{
  const auto config = scratch("risk.json");
  {
    std::ofstream f(config);
    f << R"({"truth": {"name": "tensor_bump", "centers": [0, 0], "half_widths": [1, 1]},
             "kernel": {"s": [1, 1], "d": [1, 1]},
             "p": 2, "sample_sizes": [16, 32, 64], "replicates": 2, "master_seed": 5,
             "nodes_per_panel": 4})";
  }
  const auto a = scratch("a.csv");
  const auto b = scratch("b.csv");
  const int ca = run_cli({ "risk-run", "--config", config.string(), "--out", a.string() }).code;
  const int cb = run_cli({ "risk-run", "--config", config.string(), "--out", b.string(), "--threads", "3" }).code;
  CHECK(ca == cb);
  CHECK((ca == 0 || ca == 1));
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("n,replicate,seed,h,risk,bias_p,stochastic_p\n", 0) == 0);
  CHECK(slurp(scratch("a.summary.json")) == slurp(scratch("b.summary.json")));

  const auto k1 = run_cli({ "kernel-build", "--s", "2,1", "--d", "1,1", "--strict" });
  const auto k2 = run_cli({ "kernel-build", "--s", "2,1", "--d", "1,1", "--strict" });
  CHECK(k1.code == 0);
  CHECK(k1.out == k2.out);

  const std::vector<std::string> fam{ "family-build", "--s", "1,1", "--d", "1,1", "--p", "2", "--r", "17",
                                      "--n", "10000", "--N", "8.5" };
  const auto f1 = run_cli(fam);
  const auto f2 = run_cli(fam);
  CHECK(f1.code == 0);
  CHECK(f1.out == f2.out);

  auto verify = fam;
  verify[0] = "family-verify";
  CHECK(run_cli(verify).code == 0);
  CHECK(run_binary("family-verify --s 1,1 --d 1,1 --p 2 --r 17 --n 1000 --N 8.5") == 2);
}

TEST_SUITE_END();
