#include "vsclab/pipeline.hpp"

#include "util.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace vsclab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("config error at " + path + ": " + msg);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) config_error(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) config_error(path + "." + item.key(), "unknown key");
  }
}

double get_number(const json& j, const std::string& path, const char* key, double fallback,
                  double lo, double hi) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) config_error(path + "." + key, "expected a number");
  const double v = j.at(key).get<double>();
  if (v < lo || v > hi) {
    config_error(path + "." + key, "value " + std::to_string(v) + " outside [" +
                                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

int get_int(const json& j, const std::string& path, const char* key, int fallback, int lo, int hi) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) config_error(path + "." + key, "expected an integer");
  const int v = j.at(key).get<int>();
  if (v < lo || v > hi) config_error(path + "." + key, "integer " + std::to_string(v) + " out of range");
  return v;
}

Vector parse_coefficients(const json& j, const std::string& path, const char* key) {
  const json& spec = j.at(key);
  if (spec.is_array()) {
    const auto raw = spec.get<std::vector<double>>();
    return Eigen::Map<const Vector>(raw.data(), static_cast<Eigen::Index>(raw.size()));
  }
  check_keys(spec, path + "." + std::string(key), {"power", "random_unit"});
  if (spec.contains("power")) {
    const json& p = spec.at("power");
    check_keys(p, path + "." + key + ".power", {"n", "exponent"});
    const int n = get_int(p, path, "n", 0, 1, 1000000);
    const double e = get_number(p, path, "exponent", 1.0, -10.0, 10.0);
    if (n == 0) config_error(path + "." + key + ".power.n", "required");
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = std::pow(double(i + 1), -e);
    return v;
  }
  const json& p = spec.at("random_unit");
  check_keys(p, path + "." + key + ".random_unit", {"n", "seed"});
  const int n = get_int(p, path, "n", 0, 1, 1000000);
  if (n == 0) config_error(path + "." + key + ".random_unit.n", "required");
  const auto seed = static_cast<std::uint64_t>(get_int(p, path, "seed", 0, 0, 1 << 30));
  std::mt19937_64 rng(detail::mix_seed(seed, 0));
  return detail::unit_vector(rng, n);
}

ProblemInstance parse_problem(const json& j) {
  const std::string path = "problem";
  if (!j.contains("kind")) config_error(path + ".kind", "required");
  const std::string kind = j.at("kind").get<std::string>();

  if (kind == "linear_hilbert") {
    check_keys(j, path, {"kind", "singular_values", "coeffs", "mode", "null_dim", "normalize_coeffs"});
    if (!j.contains("singular_values")) config_error(path + ".singular_values", "required");
    if (!j.contains("coeffs")) config_error(path + ".coeffs", "required");
    Vector sigma = parse_coefficients(j, path, "singular_values");
    Vector coeffs = parse_coefficients(j, path, "coeffs");
    if (coeffs.size() != sigma.size() && coeffs.size() == 0)
      config_error(path + ".coeffs", "empty coefficient list");
    const bool normalize = j.value("normalize_coeffs", true);
    if (normalize && coeffs.norm() > 0.0) coeffs /= coeffs.norm();
    const std::string mode = j.value("mode", std::string("source_element"));
    SourceMode source_mode;
    if (mode == "source_element") source_mode = SourceMode::SourceElement;
    else if (mode == "direct") source_mode = SourceMode::DirectXdagger;
    else config_error(path + ".mode", "expected 'source_element' or 'direct'");
    const int null_dim = get_int(j, path, "null_dim", 0, 0, 1000000);
    return make_linear_hilbert(sigma, coeffs, source_mode, null_dim);
  }

  if (kind == "autoconvolution") {
    check_keys(j, path, {"kind", "x_dagger"});
    if (!j.contains("x_dagger")) config_error(path + ".x_dagger", "required");
    const json& xspec = j.at("x_dagger");
    Vector xdagger;
    if (xspec.is_array()) {
      const auto raw = xspec.get<std::vector<double>>();
      xdagger = Eigen::Map<const Vector>(raw.data(), static_cast<Eigen::Index>(raw.size()));
    } else {
      check_keys(xspec, path + ".x_dagger", {"smooth"});
      const json& s = xspec.at("smooth");
      check_keys(s, path + ".x_dagger.smooth", {"n"});
      const int n = get_int(s, path, "n", 0, 1, 100000);
      if (n == 0) config_error(path + ".x_dagger.smooth.n", "required");
      xdagger.resize(n);
      const double h = 1.0 / n;
      for (int i = 0; i < n; ++i) {
        const double s_mid = (i + 0.5) * h;
        xdagger[i] = 1.0 + 0.5 * std::sin(M_PI * s_mid);
      }
    }
    return make_autoconvolution(xdagger);
  }

  if (kind == "l1_linear") {
    check_keys(j, path, {"kind", "matrix", "random", "x_dagger"});
    Matrix A;
    if (j.contains("matrix")) {
      const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
      if (rows.empty()) config_error(path + ".matrix", "empty matrix");
      A.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
      for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) config_error(path + ".matrix", "ragged rows");
        for (size_t c = 0; c < rows[r].size(); ++c)
          A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    } else if (j.contains("random")) {
      const json& r = j.at("random");
      check_keys(r, path + ".random", {"n", "m", "seed"});
      const int n = get_int(r, path, "n", 0, 1, 10000);
      const int m = get_int(r, path, "m", n, 1, 10000);
      if (n == 0) config_error(path + ".random.n", "required");
      const auto seed = static_cast<std::uint64_t>(get_int(r, path, "seed", 0, 0, 1 << 30));
      std::mt19937_64 rng(detail::mix_seed(seed, 0));
      A.resize(m, n);
      std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(double(m)));
      for (int i = 0; i < m; ++i)
        for (int c = 0; c < n; ++c) A(i, c) = normal(rng);
    } else {
      config_error(path, "l1_linear needs 'matrix' or 'random'");
    }

    if (!j.contains("x_dagger")) config_error(path + ".x_dagger", "required");
    const json& xspec = j.at("x_dagger");
    Vector xdagger;
    if (xspec.is_array()) {
      const auto raw = xspec.get<std::vector<double>>();
      xdagger = Eigen::Map<const Vector>(raw.data(), static_cast<Eigen::Index>(raw.size()));
    } else {
      check_keys(xspec, path + ".x_dagger", {"sparse_random"});
      const json& s = xspec.at("sparse_random");
      check_keys(s, path + ".x_dagger.sparse_random", {"k", "seed"});
      const int k = get_int(s, path, "k", 1, 1, 10000);
      const auto seed = static_cast<std::uint64_t>(get_int(s, path, "seed", 0, 0, 1 << 30));
      std::mt19937_64 rng(detail::mix_seed(seed, 1));
      xdagger = Vector::Zero(A.cols());
      std::uniform_int_distribution<int> pick(0, static_cast<int>(A.cols()) - 1);
      std::uniform_real_distribution<double> mag(0.5, 1.5);
      for (int placed = 0; placed < k;) {
        const int pos = pick(rng);
        if (xdagger[pos] != 0.0) continue;
        xdagger[pos] = (pick(rng) % 2 == 0 ? 1.0 : -1.0) * mag(rng);
        ++placed;
      }
    }
    return make_l1_linear(A, xdagger);
  }

  config_error(path + ".kind", "unknown problem kind '" + kind + "'");
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
}

void write_json(const fs::path& file, const json& j) { write_text(file, j.dump(2) + "\n"); }

json read_json(const fs::path& file, const std::string& stage_hint) {
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("missing artifact " + file.string() + ": run the " + stage_hint +
                             " stage first");
  }
  json j;
  in >> j;
  return j;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ProblemInstance load_problem_artifact(const fs::path& out) {
  return read_json(out / "problem.json", "problem").get<ProblemInstance>();
}

std::vector<double> config_t_grid(const RunConfig& cfg) {
  const double scale = std::max(cfg.problem.y_dagger.norm(), 1e-12);
  std::vector<double> grid{0.0};
  const double lo = cfg.indexfun.t_min_factor * scale;
  const double hi = cfg.indexfun.t_max_factor * scale;
  const double ratio = std::pow(hi / lo, 1.0 / (cfg.indexfun.num_points - 1));
  for (int i = 0; i < cfg.indexfun.num_points; ++i) grid.push_back(lo * std::pow(ratio, i));
  return grid;
}

std::vector<double> config_delta_list(const RunConfig& cfg) {
  const double scale = std::max(cfg.problem.y_dagger.norm(), 1e-12);
  const double hi = cfg.rates.delta_max_factor * scale;
  const double lo = cfg.rates.delta_min_factor * scale;
  std::vector<double> deltas;
  const double ratio = std::pow(lo / hi, 1.0 / (cfg.rates.num_deltas - 1));
  for (int i = 0; i < cfg.rates.num_deltas; ++i) deltas.push_back(hi * std::pow(ratio, i));
  return deltas;
}

}  // namespace

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed config " + path.string() + ": " + e.what());
  }

  check_keys(j, "<root>",
             {"problem", "beta", "distfun", "indexfun", "vsc", "rates", "solve", "solver", "seed",
              "output_dir"});
  if (!j.contains("problem")) config_error("problem", "required");

  RunConfig cfg;
  cfg.problem = parse_problem(j.at("problem"));
  cfg.beta = get_number(j, "<root>", "beta", 0.5, 0.0, 1.0);
  if (cfg.beta <= 0.0 || cfg.beta >= 1.0) config_error("beta", "must lie strictly inside (0, 1)");

  if (j.contains("distfun")) {
    const json& d = j.at("distfun");
    check_keys(d, "distfun", {"r_min", "r_max", "num_points", "multistart"});
    cfg.distfun.r_min = get_number(d, "distfun", "r_min", cfg.distfun.r_min, 0.0, 1e12);
    cfg.distfun.r_max = get_number(d, "distfun", "r_max", cfg.distfun.r_max, 0.0, 1e15);
    cfg.distfun.num_points = get_int(d, "distfun", "num_points", cfg.distfun.num_points, 2, 100000);
    cfg.distfun.multistart = get_int(d, "distfun", "multistart", cfg.distfun.multistart, 0, 1024);
    if (cfg.distfun.r_min >= cfg.distfun.r_max) config_error("distfun.r_min", "must be < r_max");
  }
  if (j.contains("indexfun")) {
    const json& d = j.at("indexfun");
    check_keys(d, "indexfun", {"t_min_factor", "t_max_factor", "num_points", "decay_tol", "trivial_slope"});
    cfg.indexfun.t_min_factor = get_number(d, "indexfun", "t_min_factor", cfg.indexfun.t_min_factor, 1e-15, 1e6);
    cfg.indexfun.t_max_factor = get_number(d, "indexfun", "t_max_factor", cfg.indexfun.t_max_factor, 1e-12, 1e9);
    cfg.indexfun.num_points = get_int(d, "indexfun", "num_points", cfg.indexfun.num_points, 2, 100000);
    cfg.indexfun.decay_tol = get_number(d, "indexfun", "decay_tol", cfg.indexfun.decay_tol, -1.0, 1e6);
    cfg.indexfun.trivial_slope = get_number(d, "indexfun", "trivial_slope", cfg.indexfun.trivial_slope, 1e-12, 1e12);
    if (cfg.indexfun.t_min_factor >= cfg.indexfun.t_max_factor)
      config_error("indexfun.t_min_factor", "must be < t_max_factor");
  }
  if (j.contains("vsc")) {
    const json& d = j.at("vsc");
    check_keys(d, "vsc", {"num_samples", "tolerance", "scales"});
    cfg.vsc.num_samples = get_int(d, "vsc", "num_samples", cfg.vsc.num_samples, 1, 100000000);
    cfg.vsc.tolerance = get_number(d, "vsc", "tolerance", cfg.vsc.tolerance, 0.0, 1e6);
    if (d.contains("scales")) {
      cfg.vsc.scales = d.at("scales").get<std::vector<double>>();
      if (cfg.vsc.scales.empty()) config_error("vsc.scales", "must be nonempty");
      for (double s : cfg.vsc.scales)
        if (s <= 0.0) config_error("vsc.scales", "scales must be positive");
    }
  }
  if (j.contains("rates")) {
    const json& d = j.at("rates");
    check_keys(d, "rates", {"delta_min_factor", "delta_max_factor", "num_deltas", "replicates", "rule"});
    cfg.rates.delta_min_factor = get_number(d, "rates", "delta_min_factor", cfg.rates.delta_min_factor, 1e-15, 1e3);
    cfg.rates.delta_max_factor = get_number(d, "rates", "delta_max_factor", cfg.rates.delta_max_factor, 1e-12, 1e6);
    cfg.rates.num_deltas = get_int(d, "rates", "num_deltas", cfg.rates.num_deltas, 1, 10000);
    cfg.rates.replicates = get_int(d, "rates", "replicates", cfg.rates.replicates, 1, 100000);
    if (d.contains("rule")) {
      const std::string rule = d.at("rule").get<std::string>();
      if (rule == "a_priori_phi") cfg.rates.rule = AlphaRule::APrioriPhi;
      else if (rule == "discrepancy") cfg.rates.rule = AlphaRule::Discrepancy;
      else config_error("rates.rule", "expected 'a_priori_phi' or 'discrepancy'");
    }
    if (cfg.rates.delta_min_factor >= cfg.rates.delta_max_factor)
      config_error("rates.delta_min_factor", "must be < delta_max_factor");
  }
  if (j.contains("solve")) {
    const json& d = j.at("solve");
    check_keys(d, "solve", {"alpha", "delta"});
    cfg.solve.alpha = get_number(d, "solve", "alpha", cfg.solve.alpha, 1e-300, 1e12);
    cfg.solve.delta = get_number(d, "solve", "delta", cfg.solve.delta, 0.0, 1e12);
  }
  if (j.contains("solver")) {
    const json& d = j.at("solver");
    check_keys(d, "solver", {"tol", "max_iter", "starts"});
    cfg.solver.tol = get_number(d, "solver", "tol", cfg.solver.tol, 1e-16, 1.0);
    cfg.solver.max_iter = get_int(d, "solver", "max_iter", cfg.solver.max_iter, 1, 100000000);
    cfg.solver.starts = get_int(d, "solver", "starts", cfg.solver.starts, 1, 4096);
  }
  cfg.seed = static_cast<std::uint64_t>(get_int(j, "<root>", "seed", 1, 0, 1 << 30));
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  return cfg;
}

void write_distance_profile(const DistanceProfile& profile, const fs::path& out) {
  std::string csv = "r,D,exact,residual_of_maximizer\n";
  for (size_t i = 0; i < profile.r_grid.size(); ++i) {
    csv += format_value(profile.r_grid[i]) + "," + format_value(profile.values[i]) + "," +
           std::to_string(int(profile.exact[i])) + "," + format_value(profile.residuals[i]) + "\n";
  }
  write_text(out / "distance_profile.csv", csv);

  json j{{"beta", profile.beta},
         {"r_grid", profile.r_grid},
         {"values", profile.values},
         {"residuals", profile.residuals},
         {"trivial_vsc", profile.trivial_vsc},
         {"linear_vsc", profile.linear_vsc},
         {"linear_slope", profile.linear_slope}};
  j["exact"] = json::array();
  j["maximizers"] = json::array();
  for (size_t i = 0; i < profile.exact.size(); ++i) {
    j["exact"].push_back(profile.exact[i] != 0);
    j["maximizers"].push_back(to_std(profile.maximizers[i]));
  }
  write_json(out / "distance_profile.json", j);
}

DistanceProfile read_distance_profile(const fs::path& out) {
  const json j = read_json(out / "distance_profile.json", "distfun");
  DistanceProfile profile;
  profile.beta = j.at("beta").get<double>();
  profile.r_grid = j.at("r_grid").get<std::vector<double>>();
  profile.values = j.at("values").get<std::vector<double>>();
  profile.residuals = j.at("residuals").get<std::vector<double>>();
  profile.trivial_vsc = j.at("trivial_vsc").get<bool>();
  profile.linear_vsc = j.at("linear_vsc").get<bool>();
  profile.linear_slope = j.at("linear_slope").get<double>();
  for (const auto& e : j.at("exact")) profile.exact.push_back(e.get<bool>() ? 1 : 0);
  for (const auto& m : j.at("maximizers"))
    profile.maximizers.push_back(from_std(m.get<std::vector<double>>()));
  return profile;
}

void write_index_function(const IndexFunction& phi, const fs::path& out) {
  std::string csv = "t,phi,slope\n";
  for (size_t i = 0; i < phi.t_grid.size(); ++i) {
    csv += format_value(phi.t_grid[i]) + "," + format_value(phi.values[i]) + "," +
           format_value(phi.slopes_used[i]) + "\n";
  }
  write_text(out / "index_function.csv", csv);
  write_json(out / "index_function.json", json{{"t_grid", phi.t_grid},
                                               {"values", phi.values},
                                               {"slopes_used", phi.slopes_used},
                                               {"trivial", phi.trivial}});
}

IndexFunction read_index_function(const fs::path& out) {
  const json j = read_json(out / "index_function.json", "indexfun");
  IndexFunction phi;
  phi.t_grid = j.at("t_grid").get<std::vector<double>>();
  phi.values = j.at("values").get<std::vector<double>>();
  phi.slopes_used = j.at("slopes_used").get<std::vector<double>>();
  phi.trivial = j.at("trivial").get<bool>();
  return phi;
}

void stage_problem(const RunConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  write_json(out / "problem.json", json(cfg.problem));
}

void stage_solve(const RunConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  const ProblemInstance problem = fs::exists(out / "problem.json")
                                      ? load_problem_artifact(out)
                                      : cfg.problem;
  const Vector y_obs = add_noise(problem.y_dagger, cfg.solve.delta, detail::mix_seed(cfg.seed, 99));
  SolverOptions opts = cfg.solver;
  opts.seed = detail::mix_seed(cfg.seed, 100);
  const TikhonovSolution sol = solve(problem, y_obs, cfg.solve.alpha, opts);
  write_json(out / "tikhonov_solution.json",
             json{{"alpha", sol.alpha},
                  {"residual_norm", sol.residual_norm},
                  {"omega_value", sol.omega_value},
                  {"objective", sol.objective},
                  {"iterations", sol.iterations},
                  {"converged", sol.converged},
                  {"x", to_std(sol.x)}});
}

void stage_distfun(const RunConfig& cfg, const fs::path& out) {
  stage_problem(cfg, out);
  AscentOptions opts;
  opts.multistart = cfg.distfun.multistart;
  opts.seed = detail::mix_seed(cfg.seed, 2);
  const DistanceProfile profile = distance_profile(
      cfg.problem, cfg.beta, cfg.distfun.r_min, cfg.distfun.r_max, cfg.distfun.num_points, opts);
  write_distance_profile(profile, out);
}

void stage_indexfun(const RunConfig& cfg, const fs::path& out) {
  const DistanceProfile profile = read_distance_profile(out);
  const IndexFunction phi = index_from_distance(profile, config_t_grid(cfg),
                                                cfg.indexfun.decay_tol, cfg.indexfun.trivial_slope);
  write_index_function(phi, out);
}

void stage_verify(const RunConfig& cfg, const fs::path& out) {
  const ProblemInstance problem = load_problem_artifact(out);
  const DistanceProfile profile = read_distance_profile(out);
  const IndexFunction phi = read_index_function(out);

  SamplingSpec spec;
  spec.num_random = cfg.vsc.num_samples;
  spec.scales = cfg.vsc.scales;
  spec.seed = detail::mix_seed(cfg.seed, 3);
  spec.extra_points = profile.maximizers;

  // A few Tikhonov minimizers from noisy solves join the sample pool.
  const double ynorm = problem.y_dagger.norm();
  for (int i = 0; i < 3 && ynorm > 0.0; ++i) {
    const double delta = std::pow(10.0, -(i + 1)) * ynorm;
    if (evaluate(phi, delta) <= 0.0) continue;
    const Vector y_obs = add_noise(problem.y_dagger, delta, detail::mix_seed(cfg.seed, 50 + i));
    SolverOptions opts = cfg.solver;
    opts.seed = detail::mix_seed(cfg.seed, 60 + i);
    const double alpha = std::pow(delta, problem.p) / evaluate(phi, delta);
    spec.extra_points.push_back(solve(problem, y_obs, alpha, opts).x);
  }

  const ViolationReport report = verify_vsc(problem, cfg.beta, phi, spec, cfg.vsc.tolerance);
  write_json(out / "vsc_report.json", json{{"num_samples", report.num_samples},
                                           {"num_violations", report.num_violations},
                                           {"worst_gap", report.worst_gap},
                                           {"worst_point", to_std(report.worst_point)},
                                           {"tolerance", report.tolerance}});
}

void stage_rates(const RunConfig& cfg, const fs::path& out) {
  const ProblemInstance problem = fs::exists(out / "problem.json")
                                      ? load_problem_artifact(out)
                                      : cfg.problem;
  const IndexFunction phi = read_index_function(out);
  SolverOptions opts = cfg.solver;
  const RateReport report =
      run_rate_experiment(problem, cfg.beta, phi, config_delta_list(cfg), cfg.rates.replicates,
                          cfg.rates.rule, detail::mix_seed(cfg.seed, 4), opts);

  std::string csv = "delta,median_error,phi,alpha,failures\n";
  for (size_t i = 0; i < report.deltas.size(); ++i) {
    csv += format_value(report.deltas[i]) + "," + format_value(report.errors[i]) + "," +
           format_value(report.phi_values[i]) + "," + format_value(report.alphas[i]) + "," +
           std::to_string(report.failures[i]) + "\n";
  }
  write_text(out / "rate_report.csv", csv);

  std::string long_csv = "delta,replicate,error,alpha,converged\n";
  for (const RateCell& cell : report.cells) {
    long_csv += format_value(cell.delta) + "," + std::to_string(cell.replicate) + "," +
                format_value(cell.error) + "," + format_value(cell.alpha) + "," +
                std::to_string(int(cell.converged)) + "\n";
  }
  write_text(out / "rate_report_long.csv", long_csv);

  write_json(out / "rate_report.json",
             json{{"deltas", report.deltas},
                  {"median_errors", report.errors},
                  {"phi_values", report.phi_values},
                  {"alphas", report.alphas},
                  {"failures", report.failures},
                  {"fitted_exponent", report.fitted_exponent},
                  {"envelope_constant", report.envelope_constant},
                  {"replicates", report.replicates}});
}

int run_pipeline(const RunConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  json summary{{"status", "ok"}, {"failed_stage", nullptr}};
  try {
    stage_distfun(cfg, out);
    const DistanceProfile profile = read_distance_profile(out);
    summary["trivial_vsc"] = profile.trivial_vsc;
    summary["linear_vsc"] = profile.linear_vsc;
    int exact_count = 0;
    for (char e : profile.exact) exact_count += (e != 0);
    summary["certified_fraction"] =
        double(exact_count) / double(std::max<size_t>(profile.exact.size(), 1));

    stage_indexfun(cfg, out);
    stage_verify(cfg, out);
    const json vsc_report = read_json(out / "vsc_report.json", "verify");
    summary["num_violations"] = vsc_report.at("num_violations");
    summary["worst_gap"] = vsc_report.at("worst_gap");

    stage_rates(cfg, out);
    const json rate_report = read_json(out / "rate_report.json", "rates");
    summary["fitted_exponent"] = rate_report.at("fitted_exponent");
    summary["envelope_constant"] = rate_report.at("envelope_constant");

    if (vsc_report.at("num_violations").get<int>() > 0) {
      summary["status"] = "vsc_violations";
      write_json(out / "summary.json", summary);
      return 2;
    }
    write_json(out / "summary.json", summary);
    return 0;
  } catch (const std::exception& e) {
    summary["status"] = "error";
    summary["message"] = e.what();
    write_json(out / "summary.json", summary);
    throw;
  }
}

}  // namespace vsclab
