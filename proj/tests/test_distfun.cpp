#include "vsclab/distfun.hpp"

#include <doctest.h>

#include <random>

using namespace vsclab;

namespace {

Vector vec(std::initializer_list<double> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double e : entries) v[i++] = e;
  return v;
}

ProblemInstance scalar_identity() {
  return make_linear_hilbert(vec({1.0}), vec({1.0}), SourceMode::DirectXdagger);
}

}  // namespace

TEST_CASE("scalar closed form at r = 0") {
  const ProblemInstance p = scalar_identity();
  const MaximizeResult res = maximize_objective(p, 0.5, 0.0, p.x_dagger);
  CHECK(res.certified);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(res.x_hat[0] == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("zero instance has zero distance") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0}), vec({0.0}), SourceMode::DirectXdagger);
  for (double r : {0.0, 0.5, 10.0}) {
    const MaximizeResult res = maximize_objective(p, 0.5, r, Vector::Zero(1));
    CHECK(res.value == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("certified maximization matches the grid oracle in 2d") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uni(0.2, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector sigma = vec({uni(rng), uni(rng)});
    const Vector xd = vec({uni(rng) - 1.0, uni(rng) - 1.0});
    const ProblemInstance p = make_linear_hilbert(sigma, xd, SourceMode::DirectXdagger);
    const double beta = 0.3 + 0.1 * trial;
    for (double r : {0.0, 0.5, 5.0}) {
      const MaximizeResult res = maximize_objective(p, beta, r, p.x_dagger);
      CHECK(res.certified);
      const double oracle = brute_force_distance(p, beta, r, 6.0, 41, 14);
      CHECK(res.value == doctest::Approx(oracle).epsilon(1e-9).scale(1.0));
      CHECK(std::abs(res.value - oracle) <= 1e-6);
    }
  }
}

TEST_CASE("brute force oracle behavior") {
  const ProblemInstance p = scalar_identity();
  SUBCASE("coarse grid near the closed form") {
    const double v = brute_force_distance(p, 0.5, 0.0, 4.0, 10000);
    CHECK(std::abs(v - 2.0) <= 1e-3);
  }
  SUBCASE("large r decays") {
    CHECK(brute_force_distance(p, 0.5, 1e3, 4.0, 10001) <= 1e-2);
  }
  SUBCASE("grid max never exceeds the certified value") {
    for (double r : {0.0, 1.0, 10.0}) {
      const double grid = brute_force_distance(p, 0.5, r, 4.0, 201);
      const MaximizeResult res = maximize_objective(p, 0.5, r, p.x_dagger);
      CHECK(grid <= res.value + 1e-6);
    }
  }
  SUBCASE("dimension guard") {
    const ProblemInstance q = make_linear_hilbert(vec({1.0, 1.0, 1.0, 1.0}),
                                                  vec({1.0, 0.0, 0.0, 0.0}),
                                                  SourceMode::DirectXdagger);
    CHECK_THROWS(brute_force_distance(q, 0.5, 0.0, 2.0, 11));
  }
}

TEST_CASE("distance profile of the zero instance") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0}), vec({0.0}), SourceMode::DirectXdagger);
  const DistanceProfile profile = distance_profile(p, 0.5, 1e-3, 1e3, 20);
  for (double v : profile.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(profile.trivial_vsc);
}

TEST_CASE("scalar profile anchors and decay") {
  const ProblemInstance p = scalar_identity();
  const DistanceProfile profile = distance_profile(p, 0.5, 1e-3, 1e4, 40);
  REQUIRE(profile.r_grid.size() == profile.values.size());
  CHECK(profile.r_grid[0] == 0.0);
  CHECK(profile.values[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(profile.values.back() <= 1e-3 * profile.values[0]);
  CHECK_FALSE(profile.trivial_vsc);

  SUBCASE("monotone nonincreasing") {
    for (size_t i = 0; i + 1 < profile.values.size(); ++i) {
      CHECK(profile.values[i + 1] <= profile.values[i] + 1e-9);
    }
  }
  SUBCASE("discrete convexity via slopes") {
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < profile.values.size(); ++i) {
      const double slope = (profile.values[i + 1] - profile.values[i]) /
                           (profile.r_grid[i + 1] - profile.r_grid[i]);
      CHECK(slope >= prev_slope - 1e-7);
      prev_slope = slope;
    }
  }
  SUBCASE("maximizer residual decays") {
    CHECK(profile.residuals.back() <= 1e-2 * profile.residuals.front());
  }
  SUBCASE("all points certified") {
    for (char e : profile.exact) CHECK(e != 0);
  }
}

TEST_CASE("nonconvex values stay lower bounds") {
  const ProblemInstance p = make_autoconvolution(vec({1.0, 0.5}));
  const DistanceProfile profile = distance_profile(p, 0.5, 1e-2, 1e2, 12);
  for (size_t i = 0; i < profile.r_grid.size(); ++i) {
    const double oracle = brute_force_distance(p, 0.5, profile.r_grid[i], 5.0, 61, 10);
    CHECK(profile.values[i] <= oracle + 1e-6);
  }
  // monotone within the documented slack even without certificates
  for (size_t i = 0; i + 1 < profile.values.size(); ++i) {
    CHECK(profile.values[i + 1] <= profile.values[i] + 1e-9);
  }
}

TEST_CASE("distance objective definition") {
  const ProblemInstance p = scalar_identity();
  // g(x) = beta (x - 1)^2 - x^2 + 1 - r |x - 1|
  const double g = distance_objective(p, 0.5, 2.0, vec({-1.0}));
  CHECK(g == doctest::Approx(0.5 * 4.0 - 1.0 + 1.0 - 2.0 * 2.0).epsilon(1e-14));
}

TEST_CASE("invalid beta is rejected") {
  const ProblemInstance p = scalar_identity();
  CHECK_THROWS(maximize_objective(p, 1.2, 0.0, p.x_dagger));
  CHECK_THROWS(distance_profile(p, 0.0, 1e-3, 1.0, 5));
}
