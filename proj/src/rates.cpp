#include "vsclab/rates.hpp"

#include "util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsclab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

Vector add_noise(const Vector& y_dagger, double delta, std::uint64_t seed) {
  require(delta >= 0.0, "delta must be nonnegative");
  if (delta == 0.0) return y_dagger;
  std::mt19937_64 rng(seed);
  return y_dagger + delta * detail::unit_vector(rng, static_cast<int>(y_dagger.size()));
}

double choose_alpha(double delta, double p, const IndexFunction& phi, AlphaRule rule,
                    const ProblemInstance& problem, const Vector& y_obs,
                    const SolverOptions& opts) {
  if (rule == AlphaRule::APrioriPhi) {
    require(delta > 0.0, "a-priori rule needs delta > 0");
    const double phi_delta = evaluate(phi, delta);
    if (phi_delta <= 0.0) {
      throw std::runtime_error("degenerate index function: phi(delta) = 0 at delta > 0");
    }
    return std::pow(delta, p) / phi_delta;
  }

  // Discrepancy: walk a geometric alpha ladder until the residual drops
  // below tau * delta.
  const double tau = 1.5;
  double alpha = std::pow(std::max(y_obs.norm(), 1e-8), p);
  for (int step = 0; step < 60; ++step) {
    const TikhonovSolution sol = solve(problem, y_obs, alpha, opts);
    if (sol.residual_norm <= tau * delta) return alpha;
    alpha *= 0.5;
  }
  throw std::runtime_error("discrepancy ladder exhausted after 60 steps");
}

RateReport run_rate_experiment(const ProblemInstance& problem, double beta,
                               const IndexFunction& phi, const std::vector<double>& delta_list,
                               int replicates, AlphaRule rule, std::uint64_t seed,
                               const SolverOptions& opts) {
  (void)beta;
  require(!delta_list.empty(), "delta list must be nonempty");
  require(replicates >= 1, "need at least one replicate");
  for (size_t i = 0; i < delta_list.size(); ++i) {
    require(delta_list[i] > 0.0, "deltas must be positive");
    if (i > 0) require(delta_list[i] < delta_list[i - 1], "deltas must be strictly decreasing");
  }

  RateReport report;
  report.deltas = delta_list;
  report.replicates = replicates;
  report.seed = seed;

  const int num_deltas = static_cast<int>(delta_list.size());
  const int total = num_deltas * replicates;
  report.cells.assign(static_cast<size_t>(total), RateCell{});

  detail::parallel_for(total, [&](int cell) {
    const int d = cell / replicates;
    const int rep = cell % replicates;
    const double delta = delta_list[static_cast<size_t>(d)];
    RateCell& out = report.cells[static_cast<size_t>(cell)];
    out.delta = delta;
    out.replicate = rep;
    const std::uint64_t cell_seed = detail::mix_seed(seed, static_cast<std::uint64_t>(cell));
    const Vector y_obs = add_noise(problem.y_dagger, delta, cell_seed);
    SolverOptions cell_opts = opts;
    cell_opts.seed = detail::mix_seed(cell_seed, 1);
    out.alpha = choose_alpha(delta, problem.p, phi, rule, problem, y_obs, cell_opts);
    const TikhonovSolution sol = solve(problem, y_obs, out.alpha, cell_opts);
    out.converged = sol.converged;
    out.error = error_functional(problem, sol.x);
  });

  report.envelope_constant = 0.0;
  for (int d = 0; d < num_deltas; ++d) {
    std::vector<double> errs, alphas;
    int failures = 0;
    for (int rep = 0; rep < replicates; ++rep) {
      const RateCell& cell = report.cells[static_cast<size_t>(d * replicates + rep)];
      if (cell.converged) {
        errs.push_back(cell.error);
        alphas.push_back(cell.alpha);
      } else {
        ++failures;
      }
    }
    report.errors.push_back(median(errs));
    report.alphas.push_back(median(alphas));
    report.failures.push_back(failures);
    const double phi_delta = evaluate(phi, delta_list[static_cast<size_t>(d)]);
    report.phi_values.push_back(phi_delta);
    if (phi_delta > 0.0 && std::isfinite(report.errors.back())) {
      report.envelope_constant = std::max(report.envelope_constant, report.errors.back() / phi_delta);
    }
  }

  try {
    report.fitted_exponent = fit_exponent(report.deltas, report.errors);
  } catch (const std::invalid_argument&) {
    report.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

double fit_exponent(const std::vector<double>& deltas, const std::vector<double>& errors) {
  require(deltas.size() == errors.size(), "deltas and errors must have equal length");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] > 0.0 && errors[i] > 0.0 && std::isfinite(errors[i])) {
      lx.push_back(std::log(deltas[i]));
      ly.push_back(std::log(errors[i]));
    }
  }
  require(lx.size() >= 3, "fewer than 3 usable points for the exponent fit");
  const double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace vsclab
