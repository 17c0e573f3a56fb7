#ifndef VSCLAB_TIKHONOV_HPP
#define VSCLAB_TIKHONOV_HPP

#include "vsclab/problems.hpp"

namespace vsclab {

struct TikhonovSolution {
  Vector x;
  double alpha = 0.0;
  double residual_norm = 0.0;
  double omega_value = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  int best_start = -1;  // multistart index that produced x (nonlinear solver)
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 5000;
  int starts = 16;
  std::uint64_t seed = 0;
};

/// Exact spectral-filter minimizer of ||Ax - y||^2 + alpha ||x||^2.
TikhonovSolution solve_linear_hilbert(const ProblemInstance& problem, const Vector& y_obs,
                                      double alpha);

Vector soft_threshold(const Vector& v, double tau);

/// FISTA for ||Ax - y||^2 + alpha ||x||_1.
TikhonovSolution solve_l1(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                          double tol = 1e-12, int max_iter = 20000);

/// Multistart gradient descent with backtracking for the autoconvolution
/// functional ||F(x) - y||^2 + alpha ||x||^2. Warm starts at +/- a mass-matched
/// constant profile derived from y_obs, remaining starts are random draws.
TikhonovSolution solve_nonlinear(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                                 const SolverOptions& opts = {});

/// Single descent run of the nonlinear solver from a caller-supplied start.
TikhonovSolution solve_nonlinear_from(const ProblemInstance& problem, const Vector& y_obs,
                                      double alpha, const Vector& x0, double tol = 1e-10,
                                      int max_iter = 5000);

/// Dispatch on problem kind.
TikhonovSolution solve(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                       const SolverOptions& opts = {});

/// Tikhonov objective ||F(x) - y||^p + alpha Omega(x).
double tikhonov_objective(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                          const Vector& x);

}  // namespace vsclab

#endif
