#include "vsclab/vsc.hpp"

#include "util.hpp"

#include <cmath>
#include <stdexcept>

namespace vsclab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double vsc_gap(const ProblemInstance& problem, double beta, const IndexFunction& phi,
               const Vector& x) {
  return beta * error_functional(problem, x) - omega(problem, x) + problem.omega_dagger_value -
         evaluate(phi, exact_residual_norm(problem, x));
}

}  // namespace

ViolationReport verify_vsc(const ProblemInstance& problem, double beta, const IndexFunction& phi,
                           const SamplingSpec& samples, double tolerance) {
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  const int num_random = std::max(samples.num_random, 0);
  const int num_extra = static_cast<int>(samples.extra_points.size());
  const int total = num_random + num_extra;
  require(total > 0, "empty sample set");
  require(!samples.scales.empty(), "at least one sampling scale is required");

  const double base_scale = std::max(problem.x_dagger.norm(), 1.0);
  std::vector<double> gaps(static_cast<size_t>(total));
  std::vector<Vector> points(static_cast<size_t>(total));

  detail::parallel_for(total, [&](int i) {
    Vector x;
    if (i < num_random) {
      std::mt19937_64 rng(detail::mix_seed(samples.seed, static_cast<std::uint64_t>(i)));
      const Vector center = (i % 2 == 0) ? problem.x_dagger : Vector(-problem.x_dagger);
      const double scale = samples.scales[static_cast<size_t>(i) % samples.scales.size()];
      x = center + scale * base_scale * detail::gaussian_vector(rng, problem.n);
    } else {
      x = samples.extra_points[static_cast<size_t>(i - num_random)];
    }
    gaps[static_cast<size_t>(i)] = vsc_gap(problem, beta, phi, x);
    points[static_cast<size_t>(i)] = std::move(x);
  });

  ViolationReport report;
  report.num_samples = total;
  report.tolerance = tolerance;
  report.worst_gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < total; ++i) {
    if (gaps[static_cast<size_t>(i)] > tolerance) ++report.num_violations;
    if (gaps[static_cast<size_t>(i)] > report.worst_gap) {
      report.worst_gap = gaps[static_cast<size_t>(i)];
      report.worst_point = points[static_cast<size_t>(i)];
    }
  }
  return report;
}

bool check_solution_inequality(const ProblemInstance& problem, double beta,
                               const std::vector<Vector>& solution_samples) {
  require(!solution_samples.empty(), "empty solution sample set");
  for (const Vector& x : solution_samples) {
    const double lhs = beta * error_functional(problem, x);
    const double rhs = omega(problem, x) - problem.omega_dagger_value;
    if (lhs > rhs + 1e-10) return false;
  }
  return true;
}

std::pair<double, bool> coercivity_margin(const ProblemInstance& problem, double beta_tilde,
                                          double sample_box, int num_samples, std::uint64_t seed) {
  require(beta_tilde > 0.0, "beta_tilde must be positive");
  require(sample_box > 0.0, "sample_box must be positive");
  require(num_samples > 0, "num_samples must be positive");

  auto margin = [&](const Vector& x) {
    return beta_tilde * error_functional(problem, x) - omega(problem, x);
  };

  auto box_sup = [&](double halfwidth) {
    double sup = margin(Vector::Zero(problem.n));
    sup = std::max(sup, margin(problem.x_dagger));
    sup = std::max(sup, margin(Vector(-problem.x_dagger)));
    for (int i = 0; i < num_samples; ++i) {
      std::mt19937_64 rng(detail::mix_seed(seed, static_cast<std::uint64_t>(i)));
      std::uniform_real_distribution<double> unif(-halfwidth, halfwidth);
      Vector x(problem.n);
      for (int d = 0; d < problem.n; ++d) x[d] = unif(rng);
      sup = std::max(sup, margin(x));
    }
    return sup;
  };

  const double s1 = box_sup(sample_box);
  const double s2 = box_sup(2.0 * sample_box);
  const double s3 = box_sup(4.0 * sample_box);
  const bool bounded = std::abs(s2 - s1) < 0.01 * std::max(1.0, std::abs(s1)) &&
                       std::abs(s3 - s2) < 0.01 * std::max(1.0, std::abs(s2));
  return {s3, bounded};
}

double bregman_distance(OmegaKind omega_kind, const Vector& x, const Vector& x_dagger,
                        const Vector& xi_dagger) {
  require(x.size() == x_dagger.size() && x.size() == xi_dagger.size(),
          "bregman_distance arguments must have equal length");
  double omega_x = 0.0, omega_dagger = 0.0;
  if (omega_kind == OmegaKind::SquaredNorm2) {
    require((xi_dagger - 2.0 * x_dagger).lpNorm<Eigen::Infinity>() <=
                1e-10 * (1.0 + x_dagger.lpNorm<Eigen::Infinity>()),
            "xi_dagger is not a subgradient of the squared norm at x_dagger");
    omega_x = x.squaredNorm();
    omega_dagger = x_dagger.squaredNorm();
  } else {
    for (Eigen::Index i = 0; i < x_dagger.size(); ++i) {
      if (x_dagger[i] > 0.0) {
        require(std::abs(xi_dagger[i] - 1.0) <= 1e-12, "xi_dagger inconsistent sign pattern");
      } else if (x_dagger[i] < 0.0) {
        require(std::abs(xi_dagger[i] + 1.0) <= 1e-12, "xi_dagger inconsistent sign pattern");
      } else {
        require(std::abs(xi_dagger[i]) <= 1.0 + 1e-12, "xi_dagger out of the subdifferential");
      }
    }
    omega_x = x.lpNorm<1>();
    omega_dagger = x_dagger.lpNorm<1>();
  }
  return omega_x - omega_dagger - xi_dagger.dot(x - x_dagger);
}

double admissible_beta_bregman(double c1, double xi_norm) {
  require(c1 > 0.0, "coercivity constant c1 must be positive");
  require(xi_norm >= 0.0, "subgradient norm must be nonnegative");
  return c1 / (c1 + xi_norm);
}

}  // namespace vsclab
