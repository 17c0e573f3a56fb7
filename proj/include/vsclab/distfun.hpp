#ifndef VSCLAB_DISTFUN_HPP
#define VSCLAB_DISTFUN_HPP

#include "vsclab/problems.hpp"

#include <vector>

namespace vsclab {

/// Sampled distance function D_beta on an r-grid.
struct DistanceProfile {
  double beta = 0.0;
  std::vector<double> r_grid;
  std::vector<double> values;
  std::vector<char> exact;  // true where the inner maximization is certified
  std::vector<Vector> maximizers;
  std::vector<double> residuals;  // ||F(x_hat) - y_dagger|| per grid point
  bool trivial_vsc = false;       // D_beta(0) <= 0
  bool linear_vsc = false;        // some D_beta(r) < 0 at r > 0
  double linear_slope = 0.0;      // the r witnessing linear_vsc
};

struct MaximizeResult {
  Vector x_hat;
  double value = 0.0;
  bool certified = false;
};

struct AscentOptions {
  double tol = 1e-10;
  int max_iter = 3000;
  int multistart = 8;
  std::uint64_t seed = 0;
};

/// The objective of the sup in the distance function,
/// g(x) = beta E(x) - Omega(x) + Omega_dagger - r ||F(x) - y_dagger||.
double distance_objective(const ProblemInstance& problem, double beta, double r, const Vector& x);

/// Inner maximization of the distance function at one r.
///
/// For LinearHilbert instances (squared penalty and error) g is concave and the
/// problem dualizes to a trust-region subproblem that is diagonal in singular
/// coordinates; it is solved to machine precision and certified. Other kinds
/// fall back to multistart subgradient ascent; the returned value is g at the
/// best point found and hence a lower bound for D_beta(r).
MaximizeResult maximize_objective(const ProblemInstance& problem, double beta, double r,
                                  const Vector& start, const AscentOptions& opts = {});

/// Evaluates maximize_objective on {0} followed by a geometric r-grid, with
/// warm-started continuation. Non-certified points get a backward consistency
/// pass: every stored maximizer is re-scored at every smaller r, which enforces
/// monotonicity without leaving lower-bound semantics.
DistanceProfile distance_profile(const ProblemInstance& problem, double beta, double r_min,
                                 double r_max, int num_points, const AscentOptions& opts = {});

/// Independent oracle: dense-grid maximum of g over [-box_halfwidth, box_halfwidth]^n,
/// optionally refined by re-gridding a shrinking box around the incumbent.
double brute_force_distance(const ProblemInstance& problem, double beta, double r,
                            double box_halfwidth, int points_per_dim, int refine_levels = 0);

}  // namespace vsclab

#endif
