#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cknlab/cli.hpp"
#include "cknlab/errors.hpp"

using namespace cknlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cknlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("cknlab_test_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("config parsing and precedence") {
  const auto file = cli::parse_config_text("n=3\np=2\na=0\nb=0\nc=2\nlambda=5\n# comment\n\n");
  const auto cfg = cli::resolve_config(file, {}, nullptr);
  CHECK(cfg.lambda == 5.0);
  CHECK(cfg.nodes == 4096);
  CHECK(cfg.tol == 1e-10);
  CHECK(cfg.effective_ratio() == doctest::Approx(std::pow(10.0, 12.0 / 4095.0)));
  CHECK(cli::resolve_config(file, {{"lambda", "1"}}, nullptr).lambda == 1.0);
  CHECK(cli::resolve_config(file, {}, "envdir").out_dir == "envdir");
  CHECK(cli::resolve_config({{"out_dir", "filedir"}}, {{"out_dir", "flagdir"}}, "envdir").out_dir == "flagdir");
  CHECK_THROWS_AS(cli::resolve_config(cli::parse_config_text("n=3\np=4"), {}, nullptr), ParameterError);
  CHECK_THROWS_AS(cli::parse_config_text("bogus=1"), InputError);
  CHECK_THROWS_AS(cli::parse_config_text("n 3"), InputError);
  CHECK_THROWS_AS(cli::resolve_config({{"n", "three"}}, {}, nullptr), InputError);
  CHECK_THROWS_AS(cli::resolve_config({}, {{"format", "xml"}}, nullptr), InputError);
  CHECK_THROWS_AS(cli::resolve_config({}, {{"nodes", "8"}}, nullptr), InputError);
  CHECK(cli::config_keys().size() == 16);
}

TEST_CASE("params subcommand writes JSON and manifest") {
  const auto dir = scratch_dir("params");
  const auto r = run_cli({"params", "--n=3", "--p=2", "--a=0", "--b=0", "--c=2", "--out_dir=" + dir.string()});
  REQUIRE(r.code == cli::Exit::ok);
  const auto j = load(dir / "params.json");
  CHECK(j["q"] == 6.0);
  CHECK(j["d"] == 1.0);
  CHECK(json::parse(r.out)["q"] == 6.0);
  const auto m = load(dir / "manifest.json");
  for (const char* k : {"subcommand", "config", "version", "timestamp", "outputs", "exit_code"}) CHECK(m.contains(k));
  CHECK(m["subcommand"] == "params");
  for (const auto& f : m["outputs"]) CHECK(fs::exists(dir / f.get<std::string>()));
  CHECK_FALSE(fs::exists(dir / "manifest.json.tmp"));
}

TEST_CASE("exit code contract") {
  const auto dir = scratch_dir("exits");
  const std::string od = "--out_dir=" + dir.string();
  CHECK(run_cli({"params", "--p=4", od}).code == cli::Exit::validation);
  CHECK(run_cli({"nosuch", od}).code == cli::Exit::validation);
  CHECK(run_cli({"params", "--bogus=1", od}).code == cli::Exit::validation);
  const auto sw = run_cli({"sweep", "--eps_count=3", od});
  CHECK(sw.code == cli::Exit::validation);
  CHECK(sw.err.find("at least 5 eps values") != std::string::npos);
  const auto sv = run_cli({"solve", "--n=5", "--lambda=30", "--nodes=512", od});
  CHECK(sv.code == cli::Exit::nonconvergence);
  CHECK(sv.err.find("nonpositive quotient direction") != std::string::npos);
  CHECK(run_cli({"probe", "--lambda=1", od}).code == cli::Exit::validation);

  fs::create_directories(dir);
  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  CHECK(run_cli({"params", "--out_dir=" + (blocker / "sub").string()}).code == cli::Exit::io);
}

TEST_CASE("config file with flag override") {
  const auto dir = scratch_dir("cfgfile");
  fs::create_directories(dir);
  const auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "n=5\np=2\na=0\nb=0\nc=2\nlambda=5\nnodes=512\n";
  const auto r = run_cli({"params", "--config", cfg.string(), "--lambda=1", "--out_dir=" + (dir / "o").string()});
  REQUIRE(r.code == 0);
  const auto m = load(dir / "o" / "manifest.json");
  CHECK(m["config"]["lambda"] == 1.0);
  CHECK(m["config"]["n"] == 5.0);
  CHECK(run_cli({"params", "--config", (dir / "missing.cfg").string()}).code == cli::Exit::validation);
}

TEST_CASE("deterministic outputs and documented fields") {
  const auto d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
  for (const auto& d : {d1, d2}) {
    REQUIRE(run_cli({"solve", "--n=5", "--lambda=10", "--nodes=512", "--format=quiet", "--out_dir=" + d.string()})
                .code == 0);
  }
  CHECK(slurp(d1 / "solve.json") == slurp(d2 / "solve.json"));
  CHECK(slurp(d1 / "solution.csv") == slurp(d2 / "solution.csv"));
  const auto j = load(d1 / "solve.json");
  for (const char* k : {"lambda", "quotient", "energy", "t_star", "threshold", "margin", "pde_residual",
                        "pohozaev_relative", "concentration_fraction", "converged", "status"}) {
    CHECK(j.contains(k));
  }
  CHECK(slurp(d1 / "solution.csv").rfind("r,u\n", 0) == 0);

  const auto ds = scratch_dir("sweep");
  const auto r = run_cli({"sweep", "--n=5", "--nodes=1024", "--eps_min=1e-4", "--eps_count=5", "--format=table",
                          "--out_dir=" + ds.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("paper") != std::string::npos);
  CHECK(r.out.find("scaling") != std::string::npos);
  CHECK(r.out.find("fitted") != std::string::npos);
  const auto csv = slurp(ds / "sweep.csv");
  CHECK(csv.rfind("eps,grad_p,grad_corr,alpha1,alpha2,alphapm2,alphapm1,pert,qnorm\n", 0) == 0);
  const auto rates = load(ds / "rates.json");
  REQUIRE(rates.contains("fits"));
  for (const auto& [name, fit] : rates["fits"].items()) {
    for (const char* k : {"slope", "intercept", "stderr", "r_squared", "log_factor"}) CHECK(fit.contains(k));
  }

  const auto de = scratch_dir("eigen");
  REQUIRE(run_cli({"eigen", "--nodes=1024", "--format=quiet", "--out_dir=" + de.string()}).code == 0);
  const auto e = load(de / "eigen.json");
  CHECK(e["lambda1"].get<double>() == doctest::Approx(9.8696).epsilon(2e-3));
  CHECK(fs::exists(de / "eigenfunction.csv"));
}
