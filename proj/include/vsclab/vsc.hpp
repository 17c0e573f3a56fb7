#ifndef VSCLAB_VSC_HPP
#define VSCLAB_VSC_HPP

#include "vsclab/indexfun.hpp"
#include "vsclab/problems.hpp"

#include <vector>

namespace vsclab {

struct ViolationReport {
  int num_samples = 0;
  int num_violations = 0;
  double worst_gap = 0.0;  // max of beta E(x) - Omega(x) + Omega_dagger - phi(||F(x)-y_dagger||)
  Vector worst_point;
  double tolerance = 0.0;
};

struct SamplingSpec {
  int num_random = 10000;
  std::vector<double> scales{0.1, 1.0, 10.0};  // Gaussian widths relative to ||x_dagger||
  std::uint64_t seed = 0;
  std::vector<Vector> extra_points;  // stored maximizers, Tikhonov minimizers, ...
};

/// Checks beta E(x) <= Omega(x) - Omega_dagger + phi(||F(x)-y_dagger||) on
/// Gaussian draws around +/- x_dagger plus the supplied extra points.
ViolationReport verify_vsc(const ProblemInstance& problem, double beta, const IndexFunction& phi,
                           const SamplingSpec& samples, double tolerance = 1e-6);

/// The exact-solution inequality beta E(x*) <= Omega(x*) - Omega_dagger.
bool check_solution_inequality(const ProblemInstance& problem, double beta,
                               const std::vector<Vector>& solution_samples);

/// Empirical sup of beta_tilde E(x) - Omega(x) over growing sample boxes.
/// bounded_flag is set when two successive box doublings move the sup by < 1%.
std::pair<double, bool> coercivity_margin(const ProblemInstance& problem, double beta_tilde,
                                          double sample_box, int num_samples,
                                          std::uint64_t seed = 0);

/// Omega(x) - Omega(x_dagger) - <xi_dagger, x - x_dagger>. Throws when
/// xi_dagger is not a subgradient of Omega at x_dagger.
double bregman_distance(OmegaKind omega_kind, const Vector& x, const Vector& x_dagger,
                        const Vector& xi_dagger);

/// Supremum of admissible beta in the Bregman setting, c1 / (c1 + ||xi_dagger||).
double admissible_beta_bregman(double c1, double xi_norm);

}  // namespace vsclab

#endif
