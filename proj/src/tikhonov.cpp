#include "vsclab/tikhonov.hpp"

#include "util.hpp"

#include <cmath>
#include <stdexcept>

namespace vsclab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

TikhonovSolution finalize(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                          Vector x, int iterations, bool converged) {
  TikhonovSolution sol;
  sol.x = std::move(x);
  sol.alpha = alpha;
  sol.residual_norm = (apply_forward(problem, sol.x) - y_obs).norm();
  sol.omega_value = omega(problem, sol.x);
  sol.objective = std::pow(sol.residual_norm, problem.p) + alpha * sol.omega_value;
  sol.iterations = iterations;
  sol.converged = converged;
  return sol;
}

}  // namespace

double tikhonov_objective(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                          const Vector& x) {
  return std::pow((apply_forward(problem, x) - y_obs).norm(), problem.p) +
         alpha * omega(problem, x);
}

TikhonovSolution solve_linear_hilbert(const ProblemInstance& problem, const Vector& y_obs,
                                      double alpha) {
  require(problem.kind == ProblemKind::LinearHilbert, "solve_linear_hilbert needs a LinearHilbert instance");
  require(alpha > 0.0, "alpha must be positive");
  require(y_obs.size() == problem.m, "data length must match the codomain dimension");

  const int k = problem.rank();
  const Vector coeff = problem.has_factors() ? Vector(problem.U.transpose() * y_obs)
                                             : Vector(y_obs.head(k));
  Vector filtered(k);
  for (int i = 0; i < k; ++i) {
    const double s = problem.sigma[i];
    filtered[i] = s * coeff[i] / (s * s + alpha);
  }
  Vector x = Vector::Zero(problem.n);
  if (problem.has_factors()) {
    x = problem.V * filtered;
  } else {
    x.head(k) = filtered;
  }
  return finalize(problem, y_obs, alpha, std::move(x), 0, true);
}

Vector soft_threshold(const Vector& v, double tau) {
  require(tau >= 0.0, "threshold must be nonnegative");
  return v.unaryExpr([tau](double t) {
    const double mag = std::abs(t) - tau;
    return mag > 0.0 ? (t > 0.0 ? mag : -mag) : 0.0;
  });
}

TikhonovSolution solve_l1(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                          double tol, int max_iter) {
  require(problem.kind == ProblemKind::L1Linear, "solve_l1 needs an L1Linear instance");
  require(problem.p == 2.0, "solve_l1 assumes p = 2");
  require(alpha > 0.0, "alpha must be positive");
  require(tol > 0.0, "tol must be positive");
  require(y_obs.size() == problem.m, "data length must match the codomain dimension");

  const double L = problem.sigma.maxCoeff() * problem.sigma.maxCoeff();
  const double step = 1.0 / L;
  const double tau = alpha / (2.0 * L);

  auto prox_step = [&](const Vector& z) {
    const Vector grad = apply_jacobian_adjoint(problem, z, apply_forward(problem, z) - y_obs);
    return soft_threshold(z - step * grad, tau);
  };

  Vector x = Vector::Zero(problem.n);
  Vector momentum = x;
  double t = 1.0;
  double prev_obj = tikhonov_objective(problem, y_obs, alpha, x);
  bool converged = false;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const Vector x_next = prox_step(momentum);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    momentum = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x = x_next;
    t = t_next;

    const double obj = tikhonov_objective(problem, y_obs, alpha, x);
    const double rel_decrease = std::abs(prev_obj - obj) / std::max(1.0, std::abs(prev_obj));
    prev_obj = obj;
    if (rel_decrease < tol) {
      const double fp_residual = (x - prox_step(x)).lpNorm<Eigen::Infinity>();
      if (fp_residual <= tol * (1.0 + x.lpNorm<Eigen::Infinity>())) {
        converged = true;
        ++iter;
        break;
      }
    }
  }
  return finalize(problem, y_obs, alpha, std::move(x), iter, converged);
}

namespace {

// Armijo backtracking descent on the nonlinear Tikhonov functional.
struct DescentResult {
  Vector x;
  double objective;
  double grad_norm;
  int iterations;
};

DescentResult descend(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                      Vector x, double tol, int max_iter) {
  auto objective = [&](const Vector& z) { return tikhonov_objective(problem, y_obs, alpha, z); };
  auto gradient = [&](const Vector& z) {
    const Vector residual = apply_forward(problem, z) - y_obs;
    return Vector(2.0 * apply_jacobian_adjoint(problem, z, residual) + 2.0 * alpha * z);
  };

  double f = objective(x);
  double step = 1.0;
  Vector g = gradient(x);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const double gnorm = g.norm();
    if (gnorm < tol) break;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Vector trial = x - step * g;
      const double f_trial = objective(trial);
      if (f_trial <= f - 1e-4 * step * gnorm * gnorm) {
        x = trial;
        f = f_trial;
        g = gradient(x);
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // line search stalled at machine precision
  }
  return {std::move(x), f, g.norm(), iter};
}

Vector mass_matched_start(const ProblemInstance& problem, const Vector& y_obs) {
  // For constant x = c the integral of F(x) is c^2, so match total mass.
  const double mass = problem.h * y_obs.sum();
  const double c = mass > 0.0 ? std::sqrt(mass) : std::sqrt(y_obs.norm());
  return Vector::Constant(problem.n, c);
}

}  // namespace

TikhonovSolution solve_nonlinear(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                                 const SolverOptions& opts) {
  require(problem.kind == ProblemKind::Autoconvolution, "solve_nonlinear needs an Autoconvolution instance");
  require(problem.p == 2.0, "solve_nonlinear assumes p = 2");
  require(alpha > 0.0, "alpha must be positive");
  require(opts.starts >= 1, "at least one start is required");
  require(y_obs.size() == problem.m, "data length must match the codomain dimension");

  const Vector warm = mass_matched_start(problem, y_obs);

  DescentResult best{};
  int best_start = -1;
  int total_iterations = 0;
  bool best_converged = false;
  for (int s = 0; s < opts.starts; ++s) {
    Vector x0;
    if (s == 0) {
      x0 = warm;
    } else if (s == 1) {
      x0 = -warm;
    } else {
      std::mt19937_64 rng(detail::mix_seed(opts.seed, static_cast<std::uint64_t>(s)));
      const double scale = std::max(warm.norm() / std::sqrt(double(problem.n)), 1e-2);
      x0 = (s % 2 == 0 ? warm : Vector(-warm)) + scale * detail::gaussian_vector(rng, problem.n);
    }
    DescentResult run = descend(problem, y_obs, alpha, std::move(x0), opts.tol, opts.max_iter);
    total_iterations += run.iterations;
    if (best_start < 0 || run.objective < best.objective) {
      best = std::move(run);
      best_start = s;
      best_converged = best.grad_norm < opts.tol;
    }
  }

  TikhonovSolution sol =
      finalize(problem, y_obs, alpha, std::move(best.x), total_iterations, best_converged);
  sol.best_start = best_start;
  return sol;
}

TikhonovSolution solve_nonlinear_from(const ProblemInstance& problem, const Vector& y_obs,
                                      double alpha, const Vector& x0, double tol, int max_iter) {
  require(problem.kind == ProblemKind::Autoconvolution, "solve_nonlinear_from needs an Autoconvolution instance");
  require(alpha > 0.0, "alpha must be positive");
  require(x0.size() == problem.n, "start length must match the domain dimension");
  DescentResult run = descend(problem, y_obs, alpha, x0, tol, max_iter);
  const bool converged = run.grad_norm < tol;
  TikhonovSolution sol = finalize(problem, y_obs, alpha, std::move(run.x), run.iterations, converged);
  sol.best_start = 0;
  return sol;
}

TikhonovSolution solve(const ProblemInstance& problem, const Vector& y_obs, double alpha,
                       const SolverOptions& opts) {
  switch (problem.kind) {
    case ProblemKind::LinearHilbert: return solve_linear_hilbert(problem, y_obs, alpha);
    case ProblemKind::L1Linear: return solve_l1(problem, y_obs, alpha, opts.tol, opts.max_iter);
    case ProblemKind::Autoconvolution: return solve_nonlinear(problem, y_obs, alpha, opts);
  }
  throw std::logic_error("unreachable problem kind");
}

}  // namespace vsclab
