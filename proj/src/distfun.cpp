#include "vsclab/distfun.hpp"

#include "util.hpp"

#include <cmath>
#include <stdexcept>

namespace vsclab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool certified_kind(const ProblemInstance& problem) {
  return problem.kind == ProblemKind::LinearHilbert &&
         problem.omega_kind == OmegaKind::SquaredNorm2 &&
         problem.error_kind == ErrorKind::SquaredNormToXdagger;
}

// Exact maximization for the concave linear-Hilbert case.
//
// Writing the norm term through its dual ball and swapping min and max turns
//   sup_x  beta ||x - xd||^2 - ||x||^2 + ||xd||^2 - r ||A x - yd||
// into the trust-region subproblem
//   min_{||u|| <= r}  (1/2) u^T H u + b^T u + const,
// H = A A^T / (2 (1 - beta)),  b = beta/(1-beta) A xd + yd,
// which is diagonal in the singular coordinates of A. The primal maximizer is
// recovered as x = -(2 beta xd + A^T u) / (2 (1 - beta)).
MaximizeResult maximize_linear_hilbert(const ProblemInstance& problem, double beta, double r) {
  const int k = problem.rank();
  const double one_minus = 1.0 - beta;
  const Vector& xd = problem.x_dagger;

  const Vector Axd = apply_forward(problem, xd);
  const Vector b = (beta / one_minus) * Axd + problem.y_dagger;
  const Vector eta = problem.has_factors() ? Vector(problem.U.transpose() * b) : Vector(b.head(k));
  Vector hdiag(k);
  for (int i = 0; i < k; ++i) hdiag[i] = problem.sigma[i] * problem.sigma[i] / (2.0 * one_minus);

  // Unconstrained minimizer, then a safeguarded Newton solve of the secular
  // equation ||nu(lambda)|| = r on 1/||nu|| when the ball constraint is active.
  Vector nu(k);
  for (int i = 0; i < k; ++i) nu[i] = -eta[i] / hdiag[i];
  if (r >= 0.0 && nu.norm() > r) {
    if (r == 0.0) {
      nu.setZero();
    } else {
      double lambda = 0.0;
      double lo = 0.0;
      double hi = eta.norm() / r;
      for (int it = 0; it < 200; ++it) {
        double norm_sq = 0.0, deriv = 0.0;
        for (int i = 0; i < k; ++i) {
          const double d = hdiag[i] + lambda;
          const double c = eta[i] / d;
          norm_sq += c * c;
          deriv += c * c / d;
        }
        const double nrm = std::sqrt(norm_sq);
        if (nrm > r) lo = lambda; else hi = lambda;
        const double f = 1.0 / nrm - 1.0 / r;
        const double fprime = deriv / (norm_sq * nrm);
        double next = lambda - f / fprime;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - lambda) <= 1e-16 * (1.0 + lambda)) { lambda = next; break; }
        lambda = next;
      }
      for (int i = 0; i < k; ++i) nu[i] = -eta[i] / (hdiag[i] + lambda);
    }
  }

  double quad = 0.0;
  for (int i = 0; i < k; ++i) quad += 0.5 * hdiag[i] * nu[i] * nu[i] + eta[i] * nu[i];
  const double xd_sq = xd.squaredNorm();
  const double value = (1.0 + beta) * xd_sq + beta * beta * xd_sq / one_minus + quad;

  const Vector u = problem.has_factors() ? Vector(problem.U * nu) : [&] {
    Vector full = Vector::Zero(problem.m);
    full.head(k) = nu;
    return full;
  }();
  const Vector x_hat =
      -(2.0 * beta * xd + apply_jacobian_adjoint(problem, xd, u)) / (2.0 * one_minus);

  return {x_hat, value, true};
}

// Supergradient of g at x (any selection at kinks).
Vector distance_supergradient(const ProblemInstance& problem, double beta, double r,
                              const Vector& x) {
  Vector grad;
  switch (problem.error_kind) {
    case ErrorKind::SquaredNormToXdagger:
      grad = 2.0 * beta * (x - problem.x_dagger);
      break;
    case ErrorKind::PointToSetSquared: {
      const bool plus_branch =
          (x - problem.x_dagger).squaredNorm() <= (x + problem.x_dagger).squaredNorm();
      grad = 2.0 * beta * (plus_branch ? Vector(x - problem.x_dagger) : Vector(x + problem.x_dagger));
      break;
    }
    case ErrorKind::Norm1ToXdagger:
      grad = beta * (x - problem.x_dagger)
                 .unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
      break;
    case ErrorKind::Bregman:
      if (problem.omega_kind == OmegaKind::SquaredNorm2) {
        grad = beta * (2.0 * x - problem.xi_dagger);
      } else {
        grad = beta * (x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }) -
                       problem.xi_dagger);
      }
      break;
  }
  if (problem.omega_kind == OmegaKind::SquaredNorm2) {
    grad -= 2.0 * x;
  } else {
    grad -= x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
  }
  const Vector residual = apply_forward(problem, x) - problem.y_dagger;
  const double rho = residual.norm();
  if (r > 0.0 && rho > 1e-15) {
    grad -= (r / rho) * apply_jacobian_adjoint(problem, x, residual);
  }
  return grad;
}

struct AscentRun {
  Vector x;
  double value;
};

AscentRun ascend(const ProblemInstance& problem, double beta, double r, Vector x,
                 const AscentOptions& opts) {
  double f = distance_objective(problem, beta, r, x);
  double step = 1.0;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const Vector g = distance_supergradient(problem, beta, r, x);
    const double gnorm = g.norm();
    if (gnorm < opts.tol) break;
    bool accepted = false;
    while (step > 1e-15) {
      const Vector trial = x + step * g;
      const double f_trial = distance_objective(problem, beta, r, trial);
      if (f_trial > f + 1e-4 * step * gnorm * gnorm) {
        x = trial;
        f = f_trial;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return {std::move(x), f};
}

}  // namespace

double distance_objective(const ProblemInstance& problem, double beta, double r, const Vector& x) {
  return beta * error_functional(problem, x) - omega(problem, x) + problem.omega_dagger_value -
         r * exact_residual_norm(problem, x);
}

MaximizeResult maximize_objective(const ProblemInstance& problem, double beta, double r,
                                  const Vector& start, const AscentOptions& opts) {
  require(r >= 0.0, "r must be nonnegative");
  if (problem.omega_kind == OmegaKind::SquaredNorm2) {
    require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1) for squared-norm penalties");
  } else {
    require(beta > 0.0, "beta must be positive");
  }
  require(start.size() == problem.n, "start vector has wrong length");

  if (certified_kind(problem)) {
    return maximize_linear_hilbert(problem, beta, r);
  }

  // Multistart local ascent; the result is a lower bound for D_beta(r).
  AscentRun best = ascend(problem, beta, r, start, opts);
  auto consider = [&](Vector x0) {
    AscentRun run = ascend(problem, beta, r, std::move(x0), opts);
    if (run.value > best.value) best = std::move(run);
  };
  consider(problem.x_dagger);
  consider(-problem.x_dagger);
  const double scale = std::max(problem.x_dagger.norm(), 1.0);
  for (int s = 0; s < opts.multistart; ++s) {
    std::mt19937_64 rng(detail::mix_seed(opts.seed, static_cast<std::uint64_t>(s)));
    const Vector center = (s % 2 == 0) ? problem.x_dagger : Vector(-problem.x_dagger);
    consider(center + scale * detail::gaussian_vector(rng, problem.n));
  }
  return {std::move(best.x), best.value, false};
}

DistanceProfile distance_profile(const ProblemInstance& problem, double beta, double r_min,
                                 double r_max, int num_points, const AscentOptions& opts) {
  require(0.0 <= r_min && r_min < r_max, "need 0 <= r_min < r_max");
  require(num_points >= 2, "need at least two grid points");
  if (r_min == 0.0) r_min = 1e-7 * r_max;

  DistanceProfile profile;
  profile.beta = beta;
  profile.r_grid.push_back(0.0);
  const double ratio = std::pow(r_max / r_min, 1.0 / (num_points - 1));
  for (int i = 0; i < num_points; ++i) profile.r_grid.push_back(r_min * std::pow(ratio, i));

  Vector warm = problem.x_dagger;
  bool all_exact = true;
  for (double r : profile.r_grid) {
    AscentOptions point_opts = opts;
    point_opts.seed = detail::mix_seed(opts.seed, std::hash<double>{}(r));
    MaximizeResult res = maximize_objective(problem, beta, r, warm, point_opts);
    warm = res.x_hat;
    profile.values.push_back(res.value);
    profile.exact.push_back(res.certified ? 1 : 0);
    profile.residuals.push_back(exact_residual_norm(problem, res.x_hat));
    profile.maximizers.push_back(std::move(res.x_hat));
    if (!profile.exact.back()) all_exact = false;
  }

  // Cross-consistency pass for non-certified profiles: score every stored
  // maximizer at every r and keep the best. Values stay lower bounds and
  // become monotone nonincreasing, since g(., r) decreases in r pointwise.
  if (!all_exact) {
    const size_t np = profile.r_grid.size();
    for (size_t j = 0; j < np; ++j) {
      for (size_t i = 0; i < np; ++i) {
        if (i == j) continue;
        const double candidate =
            distance_objective(problem, beta, profile.r_grid[j], profile.maximizers[i]);
        if (candidate > profile.values[j]) {
          profile.values[j] = candidate;
          profile.maximizers[j] = profile.maximizers[i];
          profile.residuals[j] = profile.residuals[i];
        }
      }
    }
  }

  for (double& v : profile.values) {
    if (v < 0.0 && std::abs(v) <= 1e-10) v = 0.0;
  }
  if (profile.values.front() <= 0.0) profile.trivial_vsc = true;
  for (size_t i = 1; i < profile.values.size(); ++i) {
    if (profile.values[i] < 0.0) {
      profile.linear_vsc = true;
      profile.linear_slope = profile.r_grid[i];
      break;
    }
  }
  return profile;
}

double brute_force_distance(const ProblemInstance& problem, double beta, double r,
                            double box_halfwidth, int points_per_dim, int refine_levels) {
  require(problem.n <= 3, "brute force oracle is limited to n <= 3");
  require(points_per_dim >= 2, "points_per_dim must be at least 2");
  require(std::pow(double(points_per_dim), problem.n) <= 2e7,
          "grid too large: shrink points_per_dim");
  require(box_halfwidth > 0.0, "box_halfwidth must be positive");

  const int n = problem.n;
  Vector center = Vector::Zero(n);
  double halfwidth = box_halfwidth;
  double best_value = -std::numeric_limits<double>::infinity();
  Vector best_x = center;

  for (int level = 0; level <= refine_levels; ++level) {
    std::vector<int> idx(n, 0);
    Vector x(n);
    const double spacing = 2.0 * halfwidth / (points_per_dim - 1);
    while (true) {
      for (int d = 0; d < n; ++d) x[d] = center[d] - halfwidth + idx[d] * spacing;
      const double v = distance_objective(problem, beta, r, x);
      if (v > best_value) {
        best_value = v;
        best_x = x;
      }
      int d = 0;
      while (d < n && ++idx[d] == points_per_dim) idx[d++] = 0;
      if (d == n) break;
    }
    center = best_x;
    halfwidth = 2.0 * spacing;
  }
  return best_value;
}

}  // namespace vsclab
