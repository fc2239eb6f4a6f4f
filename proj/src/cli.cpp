#include "cknlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cknlab/bubble.hpp"
#include "cknlab/eigensolver.hpp"
#include "cknlab/errors.hpp"
#include "cknlab/extremal.hpp"
#include "cknlab/pohozaev.hpp"
#include "cknlab/rates.hpp"
#include "cknlab/solver.hpp"

namespace cknlab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

double ConfigDoc::effective_ratio() const { return ratio ? *ratio : RadialGrid::default_ratio(nodes); }

CknParams ConfigDoc::params() const { return validate_params(n, p, a, b, c); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"n",       "p",       "a",         "b",   "c",         "lambda",
                                             "R",       "nodes",   "ratio",     "eps_min", "eps_max", "eps_count",
                                             "tol",     "max_iters", "out_dir", "format"};
  return keys;
}

namespace {

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v)) {
    throw InputError("config: unparsable value for " + key + ": '" + value + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InputError("config: " + key + " must be an integer");
  return static_cast<int>(v);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void set_key(ConfigDoc& cfg, const std::string& key, const std::string& value) {
  if (key == "n") cfg.n = to_double(key, value);
  else if (key == "p") cfg.p = to_double(key, value);
  else if (key == "a") cfg.a = to_double(key, value);
  else if (key == "b") cfg.b = to_double(key, value);
  else if (key == "c") cfg.c = to_double(key, value);
  else if (key == "lambda") cfg.lambda = to_double(key, value);
  else if (key == "R") cfg.R = to_double(key, value);
  else if (key == "nodes") cfg.nodes = to_int(key, value);
  else if (key == "ratio") cfg.ratio = to_double(key, value);
  else if (key == "eps_min") cfg.eps_min = to_double(key, value);
  else if (key == "eps_max") cfg.eps_max = to_double(key, value);
  else if (key == "eps_count") cfg.eps_count = to_int(key, value);
  else if (key == "tol") cfg.tol = to_double(key, value);
  else if (key == "max_iters") cfg.max_iters = to_int(key, value);
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "format") {
    if (value != "json" && value != "table" && value != "quiet") {
      throw InputError("config: format must be json, table or quiet");
    }
    cfg.format = value;
  } else {
    throw InputError("config: unknown key '" + key + "'");
  }
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config: line " + std::to_string(lineno) + " is not key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw InputError("config: unknown key '" + key + "'");
    }
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigDoc resolve_config(const std::map<std::string, std::string>& file,
                         const std::map<std::string, std::string>& flags, const char* env_out) {
  ConfigDoc cfg;
  for (const auto& [k, v] : file) set_key(cfg, k, v);
  if (env_out && *env_out) cfg.out_dir = env_out;
  for (const auto& [k, v] : flags) set_key(cfg, k, v);
  (void)cfg.params();
  if (!(cfg.R > 0.0)) throw InputError("config: R must be positive");
  if (cfg.nodes < 16) throw InputError("config: nodes must be >= 16");
  if (!(cfg.effective_ratio() > 1.0)) throw InputError("config: ratio must exceed 1");
  if (!(cfg.eps_min > 0.0 && cfg.eps_max >= cfg.eps_min)) throw InputError("config: need 0 < eps_min <= eps_max");
  if (cfg.eps_count < 1) throw InputError("config: eps_count must be positive");
  if (!(cfg.tol > 0.0)) throw InputError("config: tol must be positive");
  if (cfg.max_iters < 1) throw InputError("config: max_iters must be positive");
  return cfg;
}

namespace {

json config_json(const ConfigDoc& c) {
  return json{{"n", c.n},           {"p", c.p},           {"a", c.a},
              {"b", c.b},           {"c", c.c},           {"lambda", c.lambda},
              {"R", c.R},           {"nodes", c.nodes},   {"ratio", c.effective_ratio()},
              {"eps_min", c.eps_min}, {"eps_max", c.eps_max}, {"eps_count", c.eps_count},
              {"tol", c.tol},       {"max_iters", c.max_iters}, {"out_dir", c.out_dir},
              {"format", c.format}};
}

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json identity_json(const IdentityReport& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}, {"relative", r.relative}};
}

json record_json(const BubbleRecord& r) {
  return {{"eps", r.eps},
          {"grad_p", r.grad_p},
          {"grad_corr", r.grad_correction},
          {"alpha1", r.grad_alpha[0]},
          {"alpha2", r.grad_alpha[1]},
          {"alphapm2", r.grad_alpha[2]},
          {"alphapm1", r.grad_alpha[3]},
          {"pert", r.pert},
          {"qnorm", r.qnorm}};
}

json fit_json(const RateFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"stderr", f.stderr_slope},
          {"r_squared", f.r_squared},
          {"log_factor", f.log_factor}};
}

std::string field_csv(const RadialField& f) {
  std::ostringstream os;
  write_csv(os, f);
  return os.str();
}

struct Result {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  json main;
  std::string table;  // optional text rendering
  int exit_code = Exit::ok;
};

GridPtr make_grid(const ConfigDoc& cfg) {
  return RadialGrid::build(static_cast<int>(cfg.n), cfg.R, cfg.nodes, cfg.effective_ratio());
}

void add_json(Result& res, const std::string& name, const json& doc) {
  res.files.emplace_back(name, doc.dump(2) + "\n");
}

Result do_params(const ConfigDoc& cfg) {
  const auto prm = cfg.params();
  const auto ex = derive_exponents(prm);
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j{{"n", prm.n()},
         {"p", prm.p()},
         {"a", prm.a()},
         {"b", prm.b()},
         {"c", prm.c()},
         {"d", ex.d},
         {"q", ex.q},
         {"cstar", ex.cstar},
         {"gap_coeff", ex.gap_coeff},
         {"eta", opt(ex.eta)},
         {"c0", opt(ex.c0)},
         {"nehari_exp", opt(ex.nehari_exp)},
         {"hardy_endpoint", prm.hardy_endpoint()},
         {"solver_supported", !prm.hardy_endpoint()}};
  Result res;
  res.main = j;
  add_json(res, "params.json", j);
  return res;
}

Result do_sbest(const ConfigDoc& cfg) {
  const auto prm = cfg.params();
  require_positive_d(prm, "sbest");
  const auto ex = derive_exponents(prm);
  const auto s = s_radial(prm);
  json dil = json::array();
  for (double eps : {1.0, 1e-2}) {
    // k(eps) U_eps is U dilated by eps^{1/eta}.
    const auto sd = s_radial(prm, std::pow(eps, 1.0 / *ex.eta));
    dil.push_back({{"eps", eps}, {"grad_p", sd.grad_p}, {"q_int", sd.q_int}, {"quotient", sd.value}});
  }
  json j{{"s_radial", s.value},
         {"grad_p", s.grad_p},
         {"q_int", s.q_int},
         {"achieved_tol", s.achieved_tol},
         {"threshold", threshold(prm)},
         {"gap_coeff", ex.gap_coeff},
         {"nehari_exp", *ex.nehari_exp},
         {"constant_class", "radial"},
         {"dilation_norms", dil},
         {"dilation_note",
          "the gradient and q-norms of k(eps)U_eps change with eps; only their quotient is eps-invariant"}};
  if (prm.a() < 0.0) {
    j["symmetry_note"] =
        "a < 0: the best constant over all functions may lie below this radial value; the threshold uses the "
        "radial constant";
  }
  Result res;
  res.main = j;
  add_json(res, "sbest.json", j);
  return res;
}

Result do_eigen(const ConfigDoc& cfg) {
  const auto prm = cfg.params();
  const auto eig = first_eigenpair(prm, make_grid(cfg), EigenOptions{cfg.tol, cfg.max_iters});
  json j{{"lambda1", eig.lambda1}, {"iterations", eig.iterations}, {"residual", eig.residual}};
  Result res;
  res.main = j;
  add_json(res, "eigen.json", j);
  res.files.emplace_back("eigenfunction.csv", field_csv(eig.e1));
  if (!eig.converged) res.exit_code = Exit::nonconvergence;
  return res;
}

Result do_bubble(const ConfigDoc& cfg) {
  const auto prm = cfg.params();
  const auto grid = make_grid(cfg);
  const auto rec = bubble_report(prm, grid, cfg.eps_min);
  Result res;
  res.main = record_json(rec);
  add_json(res, "bubble.json", res.main);
  res.files.emplace_back("bubble.csv", field_csv(make_bubble(prm, grid, cfg.eps_min)));
  return res;
}

Result do_sweep(const ConfigDoc& cfg) {
  if (cfg.eps_count < 5) throw InputError("sweep: at least 5 eps values are required for a rate fit");
  const auto prm = cfg.params();
  require_positive_d(prm, "sweep");
  const auto grid = make_grid(cfg);
  const auto eps = geometric_eps(cfg.eps_min, cfg.eps_max, cfg.eps_count);
  const auto records = sweep(prm, grid, eps);

  std::ostringstream csv;
  csv << "eps,grad_p,grad_corr,alpha1,alpha2,alphapm2,alphapm1,pert,qnorm\n";
  for (const auto& r : records) {
    csv << fmt17(r.eps) << ',' << fmt17(r.grad_p) << ',' << fmt17(r.grad_correction);
    for (double v : r.grad_alpha) csv << ',' << fmt17(v);
    csv << ',' << fmt17(r.pert) << ',' << fmt17(r.qnorm) << '\n';
  }

  const auto window = asymptotic_window(prm, cfg.R, records);
  json fits = json::object();
  std::map<RateQuantity, std::optional<RateFit>> fitted;
  for (auto qty : {RateQuantity::grad_correction, RateQuantity::alpha1, RateQuantity::alpha2, RateQuantity::alpha_pm2,
                   RateQuantity::alpha_pm1, RateQuantity::pert}) {
    try {
      const auto f = fit_rate(window, qty);
      fitted[qty] = f;
      fits[to_string(qty)] = fit_json(f);
    } catch (const InputError& e) {
      fits[to_string(qty)] = {{"error", e.what()}};
    }
  }

  const auto table = rate_table(prm);
  json items = json::array();
  std::ostringstream txt;
  txt << std::left << std::setw(14) << "item" << std::setw(11) << "quantity" << std::setw(16) << "paper_claimed"
      << std::setw(17) << "scaling_derived" << "fitted\n";
  auto row = [&](const std::string& item, RateQuantity qty, const RateExponent& paper, const RateExponent& scal) {
    const auto& f = fitted[qty];
    json r{{"item", item},
           {"quantity", to_string(qty)},
           {"paper_claimed", paper.exponent},
           {"paper_log_factor", paper.log_factor},
           {"scaling_derived", scal.exponent},
           {"scaling_log_factor", scal.log_factor},
           {"fitted", f ? json(f->slope) : json(nullptr)},
           {"fitted_log_factor", f ? json(f->log_factor) : json(nullptr)}};
    items.push_back(r);
    auto cell = [](double v, bool lg) {
      std::ostringstream o;
      o << std::setprecision(6) << v << (lg ? "*log" : "");
      return o.str();
    };
    txt << std::setw(14) << item << std::setw(11) << to_string(qty) << std::setw(16)
        << cell(paper.exponent, paper.log_factor) << std::setw(17) << cell(scal.exponent, scal.log_factor)
        << (f ? cell(f->slope, f->log_factor) : std::string("n/a")) << '\n';
  };
  row("1", RateQuantity::grad_correction, table.paper_item1, table.scaling_item1);
  const RateQuantity alpha_q[4] = {RateQuantity::alpha1, RateQuantity::alpha2, RateQuantity::alpha_pm2,
                                   RateQuantity::alpha_pm1};
  for (std::size_t i = 0; i < 4; ++i) {
    if (table.alphas[i] < 0.0) continue;
    std::ostringstream name;
    name << "2(alpha=" << table.alphas[i] << ")";
    row(name.str(), alpha_q[i], table.paper_item2[i], table.scaling_item2[i]);
  }
  row("3(" + table.regime + ")", RateQuantity::pert, table.paper_item3, table.scaling_item3);

  const double delta = 0.2 * cfg.R;
  std::ostringstream atom;
  atom << "eps,delta,nu_atom,mu_atom,slack\n";
  for (const auto& a : atom_check(prm, grid, eps, delta)) {
    atom << fmt17(a.eps) << ',' << fmt17(a.delta) << ',' << fmt17(a.nu_atom) << ',' << fmt17(a.mu_atom) << ','
         << fmt17(a.slack) << '\n';
  }

  json j{{"fits", fits},
         {"items", items},
         {"regime", table.regime},
         {"window", {{"eps_max", window.front().eps}, {"eps_min", window.back().eps}, {"count", window.size()}}},
         {"sweep_count", records.size()}};
  Result res;
  res.main = j;
  res.table = txt.str();
  res.files.emplace_back("sweep.csv", csv.str());
  add_json(res, "rates.json", j);
  res.files.emplace_back("atom.csv", atom.str());
  return res;
}

SolveOptions solve_options(const ConfigDoc& cfg) {
  SolveOptions o;
  o.tol = cfg.tol;
  o.max_iters = cfg.max_iters;
  o.eps_min = cfg.eps_min;
  o.eps_max = cfg.eps_max;
  o.eps_count = cfg.eps_count;
  return o;
}

json solve_json(const SolveReport& r) {
  return {{"lambda", r.lambda},
          {"quotient", r.quotient},
          {"energy", r.energy},
          {"t_star", r.t_star},
          {"threshold", r.threshold},
          {"margin", r.margin},
          {"pde_residual", r.pde_residual},
          {"pohozaev_relative", r.pohozaev_relative},
          {"concentration_fraction", r.concentration_fraction},
          {"converged", r.converged},
          {"status", r.status}};
}

Result do_solve(const ConfigDoc& cfg) {
  const auto prm = cfg.params();
  const auto rep = ground_state(prm, make_grid(cfg), cfg.lambda, solve_options(cfg));
  Result res;
  res.main = solve_json(rep);
  add_json(res, "solve.json", res.main);
  res.files.emplace_back("solution.csv", field_csv(rep.field));
  if (!rep.converged) res.exit_code = Exit::nonconvergence;
  return res;
}

Result do_pohozaev(const ConfigDoc& cfg) {
  const auto prm = cfg.params();
  Result res;
  json j;
  {
    // Manufactured solutions of the unweighted Laplacian in R^3 on B_1.
    const auto ref = validate_params(3, 2, 0, 0, prm.c());
    const auto g1 = RadialGrid::build(3, 1.0, cfg.nodes, cfg.effective_ratio());
    const auto u1 = RadialField::sample(g1, [](double r) { return 1.0 - r * r; });
    const auto u2 = RadialField::sample(g1, [](double r) { return 1.0 - r; });
    j["pucci_serrin"] = {{"constant6", identity_json(pucci_serrin_check(ref, u1, make_source("constant6", ref, u1)))},
                         {"inverse_r", identity_json(pucci_serrin_check(ref, u2, make_source("inverse_r", ref, u2)))},
                         {"setting", "n=3, p=2, a=0, R=1"}};
  }
  const auto grid = make_grid(cfg);
  std::optional<RadialField> cand;
  std::string label;
  if (cfg.lambda > 0.0) {
    try {
      const auto rep = ground_state(prm, grid, cfg.lambda, solve_options(cfg));
      cand = rep.field;
      label = "ground_state:" + rep.status;
    } catch (const QuotientSignError&) {
      label = "eigenfunction (lambda >= lambda_1)";
    }
  } else {
    label = "eigenfunction";
  }
  if (!cand) cand = first_eigenpair(prm, grid).e1;
  j["candidate"] = label;
  j["pohozaev"] = identity_json(pohozaev_residual(prm, *cand, cfg.lambda));
  if (prm.a() != 0.0) j["pohozaev_unweighted"] = identity_json(pohozaev_residual_unweighted(prm, *cand, cfg.lambda));
  if (cfg.lambda <= 0.0) j["certificate"] = nonexistence_certificate(prm, *cand, cfg.lambda);
  res.main = j;
  add_json(res, "pohozaev.json", j);
  return res;
}

Result do_probe(const ConfigDoc& cfg) {
  const auto prm = cfg.params();
  if (cfg.lambda > 0.0) throw InputError("probe: requires lambda <= 0");
  const std::vector<int> levels{cfg.nodes / 4, cfg.nodes / 2, cfg.nodes};
  if (levels.front() < 16) throw InputError("probe: nodes/4 must be >= 16");
  const auto rep = nonexistence_probe(prm, cfg.R, cfg.lambda, levels, solve_options(cfg));
  json lv = json::array();
  bool any_converged = false;
  for (const auto& l : rep.levels) {
    any_converged = any_converged || l.converged;
    lv.push_back({{"nodes", l.nodes},
                  {"quotient", l.quotient},
                  {"concentration_fraction", l.concentration_fraction},
                  {"certificate", l.certificate},
                  {"min_certificate", std::isfinite(l.min_certificate) ? json(l.min_certificate) : json(nullptr)},
                  {"amplitude", l.amplitude},
                  {"converged", l.converged},
                  {"status", l.status}});
  }
  json j{{"lambda", rep.lambda}, {"s_radial", rep.s_r}, {"levels", lv}, {"nontrivial_solution_found", any_converged}};
  Result res;
  res.main = j;
  add_json(res, "probe.json", j);
  return res;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << contents;
  os.flush();
  if (!os) throw IoError("failed writing " + path.string());
}

void emit(const std::string& sub, const ConfigDoc& cfg, const Result& res) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  json outputs = json::array();
  for (const auto& [name, contents] : res.files) {
    write_file(dir / name, contents);
    outputs.push_back(name);
  }
  json manifest{{"subcommand", sub},
                {"config", config_json(cfg)},
                {"version", kVersion},
                {"timestamp", timestamp()},
                {"outputs", outputs},
                {"exit_code", res.exit_code}};
  const auto tmp = dir / "manifest.json.tmp";
  write_file(tmp, manifest.dump(2) + "\n");
  fs::rename(tmp, dir / "manifest.json", ec);
  if (ec) throw IoError("cannot finalize manifest: " + ec.message());
}

Result dispatch(const std::string& sub, const ConfigDoc& cfg) {
  if (sub == "params") return do_params(cfg);
  if (sub == "sbest") return do_sbest(cfg);
  if (sub == "eigen") return do_eigen(cfg);
  if (sub == "bubble") return do_bubble(cfg);
  if (sub == "sweep") return do_sweep(cfg);
  if (sub == "solve") return do_solve(cfg);
  if (sub == "pohozaev") return do_pohozaev(cfg);
  if (sub == "probe") return do_probe(cfg);
  throw InputError("unknown subcommand '" + sub + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted critical-exponent numerical laboratory", "cknlab"};
  std::string sub, config_path;
  app.add_option("subcommand", sub, "params|sbest|eigen|bubble|sweep|solve|pohozaev|probe")->required();
  app.add_option("--config", config_path, "key=value configuration file");
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_opts;
  for (const auto& k : config_keys()) flag_opts[k] = app.add_option("--" + k, flag_values[k]);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return Exit::validation;
  }

  ConfigDoc cfg;
  try {
    std::map<std::string, std::string> file;
    if (!config_path.empty()) file = parse_config_text(read_text(config_path));
    std::map<std::string, std::string> flags;
    for (const auto& [k, opt] : flag_opts) {
      if (opt->count() > 0) flags[k] = flag_values[k];
    }
    cfg = resolve_config(file, flags, std::getenv("CKNLAB_OUT"));
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return Exit::validation;
  }

  Result res;
  try {
    res = dispatch(sub, cfg);
  } catch (const QuotientSignError& e) {
    err << "error: " << e.what() << " (lambda >= lambda_1: Phi - lambda J <= 0 along the first eigenfunction)\n";
    return Exit::nonconvergence;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return Exit::nonconvergence;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return Exit::validation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return Exit::validation;
  }

  try {
    emit(sub, cfg, res);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return Exit::io;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return Exit::io;
  }
  if (cfg.format == "json") out << res.main.dump(2) << '\n';
  else if (cfg.format == "table") out << (res.table.empty() ? res.main.dump(2) + "\n" : res.table);
  return res.exit_code;
}

}  // namespace cknlab::cli
