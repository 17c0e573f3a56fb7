#ifndef VSCLAB_RATES_HPP
#define VSCLAB_RATES_HPP

#include "vsclab/indexfun.hpp"
#include "vsclab/problems.hpp"
#include "vsclab/tikhonov.hpp"

#include <vector>

namespace vsclab {

enum class AlphaRule { APrioriPhi, Discrepancy };

struct RateCell {
  double delta = 0.0;
  int replicate = 0;
  double error = 0.0;
  double alpha = 0.0;
  bool converged = false;
};

struct RateReport {
  std::vector<double> deltas;  // strictly decreasing
  std::vector<double> errors;  // median E over converged replicates
  std::vector<double> phi_values;
  std::vector<double> alphas;  // median alpha per delta
  std::vector<int> failures;   // non-converged replicates per delta
  double fitted_exponent = 0.0;
  double envelope_constant = 0.0;  // min C with errors <= C * phi_values pointwise
  int replicates = 0;
  std::uint64_t seed = 0;
  std::vector<RateCell> cells;  // per-(delta, replicate) records, row-major in delta
};

/// y_delta = y_dagger + delta * u with u a uniformly random unit vector,
/// so ||y_delta - y_dagger|| = delta exactly.
Vector add_noise(const Vector& y_dagger, double delta, std::uint64_t seed);

/// APrioriPhi: alpha = delta^p / phi(delta). Discrepancy: first alpha on the
/// geometric ladder alpha_0 = ||y_obs||^p, factor 0.5, whose Tikhonov solution
/// satisfies residual <= 1.5 delta.
double choose_alpha(double delta, double p, const IndexFunction& phi, AlphaRule rule,
                    const ProblemInstance& problem, const Vector& y_obs,
                    const SolverOptions& opts = {});

RateReport run_rate_experiment(const ProblemInstance& problem, double beta,
                               const IndexFunction& phi, const std::vector<double>& delta_list,
                               int replicates, AlphaRule rule, std::uint64_t seed,
                               const SolverOptions& opts = {});

/// Least-squares slope of log(errors) versus log(deltas); zero and negative
/// entries are excluded, fewer than 3 usable points is an error.
double fit_exponent(const std::vector<double>& deltas, const std::vector<double>& errors);

}  // namespace vsclab

#endif
