#include "vsclab/problems.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>

using namespace vsclab;

namespace {

Vector vec(std::initializer_list<double> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double e : entries) v[i++] = e;
  return v;
}

Vector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace

TEST_CASE("linear hilbert factory, identity operator") {
  const ProblemInstance p = make_linear_hilbert(vec({1.0}), vec({1.0}), SourceMode::SourceElement);
  CHECK(p.x_dagger[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.y_dagger[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.omega_dagger_value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.solution_set == SolutionSet::AffineNullspace);
}

TEST_CASE("linear hilbert factory, direct solution") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0, 0.5}), vec({1.0, 1.0}), SourceMode::DirectXdagger);
  CHECK(p.y_dagger[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.y_dagger[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.omega_dagger_value == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("linear hilbert source element benchmark") {
  const int n = 50;
  Vector sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = 1.0 / double(i + 1);
  std::mt19937_64 rng(42);
  Vector w = random_vector(rng, n);
  w /= w.norm();
  const ProblemInstance p = make_linear_hilbert(sigma, w, SourceMode::SourceElement);

  // x_dagger = A^* w; with the canonical embedding A^* multiplies by sigma.
  Vector expected(n);
  for (int i = 0; i < n; ++i) expected[i] = sigma[i] * w[i];
  CHECK((p.x_dagger - expected).norm() <= 1e-14);
  CHECK(p.omega_dagger_value == doctest::Approx(expected.squaredNorm()).epsilon(1e-12));
  CHECK((apply_forward(p, p.x_dagger) - p.y_dagger).norm() <= 1e-12 * p.y_dagger.norm());
}

TEST_CASE("linear hilbert factory rejects bad input") {
  CHECK_THROWS(make_linear_hilbert(Vector(), Vector(), SourceMode::DirectXdagger));
  CHECK_THROWS(make_linear_hilbert(vec({1.0, -0.5}), vec({1.0, 1.0}), SourceMode::DirectXdagger));
  CHECK_THROWS(make_linear_hilbert(vec({1.0}), vec({1.0, 1.0}), SourceMode::DirectXdagger));
}

TEST_CASE("autoconvolution forward map") {
  const ProblemInstance p = make_autoconvolution(vec({1.0, 2.0}));
  CHECK(p.m == 3);
  CHECK(p.solution_set == SolutionSet::PlusMinusPair);

  SUBCASE("zero input") {
    const Vector image = apply_forward(p, vec({0.0, 0.0}));
    CHECK(image.norm() == 0.0);
  }
  SUBCASE("hand-expanded convolution") {
    const Vector image = apply_forward(p, vec({1.0, 2.0}));
    CHECK(image[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(image[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(image[2] == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("sign symmetry is exact") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector x = random_vector(rng, 2);
      CHECK((apply_forward(p, -x) - apply_forward(p, x)).lpNorm<Eigen::Infinity>() <= 1e-15);
    }
  }
}

TEST_CASE("jacobian adjoint") {
  SUBCASE("diagonal linear operator") {
    const ProblemInstance p =
        make_linear_hilbert(vec({1.0, 0.5}), vec({1.0, 1.0}), SourceMode::DirectXdagger);
    const Vector out = apply_jacobian_adjoint(p, p.x_dagger, vec({1.0, 1.0}));
    CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(out[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("autoconvolution jacobian vanishes at zero") {
    const ProblemInstance p = make_autoconvolution(vec({1.0, 2.0, 1.0}));
    const Vector out = apply_jacobian_adjoint(p, Vector::Zero(3), Vector::Ones(5));
    CHECK(out.norm() == 0.0);
  }
  SUBCASE("autoconvolution jacobian matches finite differences") {
    const ProblemInstance p = make_autoconvolution(vec({1.0, 2.0, 1.0, 0.5}));
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector x = random_vector(rng, 4);
      const Vector v = random_vector(rng, 4);
      const double eps = 1e-6;
      const Vector fd =
          (apply_forward(p, x + eps * v) - apply_forward(p, x - eps * v)) / (2.0 * eps);
      const Vector jv = apply_jacobian(p, x, v);
      CHECK((fd - jv).norm() <= 1e-5 * std::max(1.0, jv.norm()));
      // adjoint consistency <Jv, r> = <v, J^T r>
      const Vector r = random_vector(rng, p.m);
      CHECK(jv.dot(r) ==
            doctest::Approx(v.dot(apply_jacobian_adjoint(p, x, r))).epsilon(1e-12));
    }
  }
}

TEST_CASE("penalty and error functional") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0, 0.5}), vec({1.0, 1.0}), SourceMode::DirectXdagger);
  CHECK(error_functional(p, p.x_dagger) == 0.0);
  CHECK(omega(p, vec({3.0, 4.0})) == doctest::Approx(25.0).epsilon(1e-14));

  SUBCASE("point-to-set error vanishes at the mirrored solution") {
    const ProblemInstance q = make_autoconvolution(vec({1.0, 2.0}));
    CHECK(error_functional(q, -q.x_dagger) == 0.0);
    CHECK(error_functional(q, q.x_dagger) == 0.0);
  }
  SUBCASE("one-norm penalty") {
    Matrix A = Matrix::Identity(3, 3);
    const ProblemInstance q = make_l1_linear(A, vec({1.0, 0.0, 0.0}));
    CHECK(omega(q, vec({1.0, -2.0, 0.0})) == doctest::Approx(3.0).epsilon(1e-14));
  }
}

TEST_CASE("linearity of the linear forward map") {
  std::mt19937_64 rng(3);
  Vector sigma = vec({2.0, 1.0, 0.25});
  const ProblemInstance p = make_linear_hilbert(sigma, vec({1.0, -1.0, 2.0}), SourceMode::DirectXdagger);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x = random_vector(rng, 3);
    const Vector z = random_vector(rng, 3);
    const double a = 1.7, b = -0.3;
    const Vector lhs = apply_forward(p, a * x + b * z);
    const Vector rhs = a * apply_forward(p, x) + b * apply_forward(p, z);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("null space orthogonality") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0, 0.5}), vec({1.0, 1.0}), SourceMode::DirectXdagger, 2);
  CHECK(p.n == 4);
  // trailing coordinates span the null space of the canonical embedding
  for (int k = 2; k < 4; ++k) {
    Vector v = Vector::Zero(4);
    v[k] = 1.0;
    CHECK(std::abs(p.x_dagger.dot(v)) <= 1e-12);
    CHECK(apply_forward(p, v).norm() <= 1e-14);
  }
}

TEST_CASE("json round trip preserves behavior") {
  const ProblemInstance p =
      make_linear_hilbert(vec({1.0, 0.5, 0.25}), vec({1.0, -1.0, 0.5}), SourceMode::SourceElement);
  nlohmann::json j = p;
  const auto q = j.get<ProblemInstance>();
  CHECK(q.n == p.n);
  CHECK(q.m == p.m);
  CHECK((q.x_dagger - p.x_dagger).norm() <= 1e-15);
  CHECK(q.omega_dagger_value == doctest::Approx(p.omega_dagger_value).epsilon(1e-14));
  std::mt19937_64 rng(5);
  const Vector x = random_vector(rng, p.n);
  CHECK((apply_forward(q, x) - apply_forward(p, x)).norm() <= 1e-14);

  const ProblemInstance a = make_autoconvolution(vec({1.0, 2.0, 0.5}));
  nlohmann::json ja = a;
  const auto b = ja.get<ProblemInstance>();
  const Vector xa = random_vector(rng, 3);
  CHECK((apply_forward(b, xa) - apply_forward(a, xa)).norm() <= 1e-14);
}

TEST_CASE("dimension mismatches are rejected") {
  const ProblemInstance p = make_autoconvolution(vec({1.0, 2.0}));
  CHECK_THROWS(apply_forward(p, vec({1.0, 2.0, 3.0})));
  CHECK_THROWS(apply_jacobian_adjoint(p, vec({1.0, 2.0}), vec({1.0})));
  CHECK_THROWS(omega(p, vec({1.0})));
}
