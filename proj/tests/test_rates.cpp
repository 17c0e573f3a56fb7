#include "vsclab/rates.hpp"

#include <doctest.h>

#include <cmath>

using namespace vsclab;

namespace {

Vector vec(std::initializer_list<double> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double e : entries) v[i++] = e;
  return v;
}

IndexFunction linear_phi(double slope) {
  IndexFunction phi;
  phi.t_grid = {0.0, 1e6};
  phi.values = {0.0, slope * 1e6};
  phi.slopes_used = {slope, slope};
  return phi;
}

IndexFunction sqrt_phi() {
  // dense piecewise-linear sampling of 2 sqrt(t) with 0.01 as a grid node
  IndexFunction phi;
  phi.t_grid = {0.0};
  phi.values = {0.0};
  for (double t = 1e-6; t <= 10.0; t *= 1.5) {
    phi.t_grid.push_back(t);
    phi.values.push_back(2.0 * std::sqrt(t));
  }
  phi.t_grid.push_back(0.01);
  phi.values.push_back(0.2);
  std::vector<size_t> order(phi.t_grid.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return phi.t_grid[a] < phi.t_grid[b]; });
  IndexFunction sorted;
  for (size_t idx : order) {
    sorted.t_grid.push_back(phi.t_grid[idx]);
    sorted.values.push_back(phi.values[idx]);
  }
  sorted.slopes_used.assign(sorted.t_grid.size(), 0.0);
  return sorted;
}

}  // namespace

TEST_CASE("noise generator") {
  const Vector y = vec({1.0, 2.0, -1.0});
  SUBCASE("zero delta is the identity") {
    CHECK((add_noise(y, 0.0, 5) - y).norm() == 0.0);
  }
  SUBCASE("exact noise norm") {
    for (double delta : {1e-6, 1e-2, 1.0, 50.0}) {
      const Vector noisy = add_noise(y, delta, 11);
      CHECK((noisy - y).norm() == doctest::Approx(delta).epsilon(1e-12));
    }
  }
  SUBCASE("bitwise determinism") {
    const Vector a = add_noise(y, 0.3, 21);
    const Vector b = add_noise(y, 0.3, 21);
    for (int i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
    const Vector c = add_noise(y, 0.3, 22);
    CHECK((a - c).norm() > 0.0);
  }
  SUBCASE("negative delta is rejected") {
    CHECK_THROWS(add_noise(y, -0.1, 1));
  }
}

TEST_CASE("a priori alpha rule") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0}), vec({1.0}), SourceMode::DirectXdagger);
  SUBCASE("identity index function") {
    const double alpha =
        choose_alpha(0.01, 2.0, linear_phi(1.0), AlphaRule::APrioriPhi, p, p.y_dagger);
    CHECK(alpha == doctest::Approx(0.01).epsilon(1e-12));
  }
  SUBCASE("square root index function") {
    const double alpha =
        choose_alpha(0.01, 2.0, sqrt_phi(), AlphaRule::APrioriPhi, p, p.y_dagger);
    CHECK(alpha == doctest::Approx(5e-4).epsilon(1e-10));
  }
  SUBCASE("degenerate index function is rejected") {
    IndexFunction flat;
    flat.t_grid = {0.0, 1.0};
    flat.values = {0.0, 0.0};
    flat.slopes_used = {0.0, 0.0};
    CHECK_THROWS(choose_alpha(0.01, 2.0, flat, AlphaRule::APrioriPhi, p, p.y_dagger));
  }
}

TEST_CASE("discrepancy alpha rule") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0, 0.5}), vec({1.0, 1.0}), SourceMode::DirectXdagger);
  const double delta = 0.1;
  const Vector y_obs = add_noise(p.y_dagger, delta, 31);
  const double alpha =
      choose_alpha(delta, 2.0, linear_phi(1.0), AlphaRule::Discrepancy, p, y_obs);
  const TikhonovSolution sol = solve_linear_hilbert(p, y_obs, alpha);
  CHECK(sol.residual_norm <= 1.5 * delta);
}

TEST_CASE("exponent fitting") {
  std::vector<double> deltas{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  std::vector<double> e1 = deltas;
  CHECK(fit_exponent(deltas, e1) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> e2;
  for (double d : deltas) e2.push_back(d * d);
  CHECK(fit_exponent(deltas, e2) == doctest::Approx(2.0).epsilon(1e-12));

  std::vector<double> e3;
  for (double d : deltas) e3.push_back(3.0 * std::sqrt(d));
  CHECK(fit_exponent(deltas, e3) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS(fit_exponent({1.0, 0.5}, {1.0, 0.5}));
  CHECK_THROWS(fit_exponent({1.0, 0.5, 0.1}, {1.0, 0.0, 0.0}));
}

TEST_CASE("rate experiment on the zero problem") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0}), vec({0.0}), SourceMode::DirectXdagger);
  const std::vector<double> deltas{1e-1, 3e-2, 1e-2, 3e-3};
  const RateReport report =
      run_rate_experiment(p, 0.5, linear_phi(1.0), deltas, 5, AlphaRule::APrioriPhi, 3);
  REQUIRE(report.errors.size() == deltas.size());
  for (size_t i = 0; i < deltas.size(); ++i) {
    CHECK(report.errors[i] >= 0.0);
    CHECK(report.errors[i] <= deltas[i] * deltas[i]);
    CHECK(report.failures[i] == 0);
  }
}

TEST_CASE("rate experiment envelope bookkeeping") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0, 0.5, 0.25, 0.125}), vec({0.5, 0.5, 0.5, 0.5}),
                          SourceMode::SourceElement);
  const std::vector<double> deltas{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const RateReport report =
      run_rate_experiment(p, 0.5, linear_phi(1.0), deltas, 7, AlphaRule::APrioriPhi, 5);

  REQUIRE(report.deltas.size() == report.errors.size());
  REQUIRE(report.deltas.size() == report.phi_values.size());
  REQUIRE(report.deltas.size() == report.alphas.size());
  for (size_t i = 0; i + 1 < report.deltas.size(); ++i)
    CHECK(report.deltas[i] > report.deltas[i + 1]);
  for (size_t i = 0; i < report.deltas.size(); ++i) {
    CHECK(report.errors[i] <= report.envelope_constant * report.phi_values[i] + 1e-15);
  }
  CHECK(report.cells.size() == report.deltas.size() * 7);

  SUBCASE("determinism") {
    const RateReport again =
        run_rate_experiment(p, 0.5, linear_phi(1.0), deltas, 7, AlphaRule::APrioriPhi, 5);
    for (size_t i = 0; i < report.errors.size(); ++i) {
      CHECK(report.errors[i] == again.errors[i]);
      CHECK(report.alphas[i] == again.alphas[i]);
    }
    CHECK(report.fitted_exponent == again.fitted_exponent);
  }
}
