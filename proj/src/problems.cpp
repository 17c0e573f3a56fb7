#include "vsclab/problems.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace vsclab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_domain_dim(const ProblemInstance& problem, const Vector& x) {
  require(x.size() == problem.n, "vector has length " + std::to_string(x.size()) +
                                     ", expected domain dimension " + std::to_string(problem.n));
}

void check_codomain_dim(const ProblemInstance& problem, const Vector& r) {
  require(r.size() == problem.m, "vector has length " + std::to_string(r.size()) +
                                     ", expected codomain dimension " + std::to_string(problem.m));
}

// Full discrete convolution of a and b, scaled by h.
Vector discrete_convolution(const Vector& a, const Vector& b, double h) {
  const int n = static_cast<int>(a.size());
  Vector out = Vector::Zero(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return out * h;
}

}  // namespace

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::LinearHilbert: return "linear_hilbert";
    case ProblemKind::L1Linear: return "l1_linear";
    case ProblemKind::Autoconvolution: return "autoconvolution";
  }
  return "?";
}

std::string to_string(OmegaKind kind) {
  return kind == OmegaKind::SquaredNorm2 ? "squared_norm2" : "norm1";
}

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SquaredNormToXdagger: return "squared_norm_to_xdagger";
    case ErrorKind::PointToSetSquared: return "point_to_set_squared";
    case ErrorKind::Norm1ToXdagger: return "norm1_to_xdagger";
    case ErrorKind::Bregman: return "bregman";
  }
  return "?";
}

ProblemInstance make_linear_hilbert(const Vector& singular_values, const Vector& coeffs,
                                    SourceMode mode, int null_dim) {
  const int k = static_cast<int>(singular_values.size());
  require(k > 0, "singular value list must be nonempty");
  require(coeffs.size() == k, "coefficient list length must match the singular values");
  require(null_dim >= 0, "null_dim must be nonnegative");
  for (int i = 0; i < k; ++i)
    require(singular_values[i] > 0.0, "singular values must be strictly positive");

  ProblemInstance problem;
  problem.kind = ProblemKind::LinearHilbert;
  problem.n = k + null_dim;
  problem.m = k;
  problem.sigma = singular_values;
  problem.x_dagger = Vector::Zero(problem.n);
  if (mode == SourceMode::SourceElement) {
    problem.x_dagger.head(k) = singular_values.cwiseProduct(coeffs);  // A^* w
  } else {
    problem.x_dagger.head(k) = coeffs;
  }
  problem.y_dagger = singular_values.cwiseProduct(problem.x_dagger.head(k));
  problem.solution_set = SolutionSet::AffineNullspace;
  problem.omega_kind = OmegaKind::SquaredNorm2;
  problem.error_kind = ErrorKind::SquaredNormToXdagger;
  problem.omega_dagger_value = problem.x_dagger.squaredNorm();
  problem.xi_dagger = 2.0 * problem.x_dagger;
  return problem;
}

ProblemInstance make_l1_linear(const Matrix& A, const Vector& x_dagger) {
  require(A.rows() > 0 && A.cols() > 0, "operator matrix must be nonempty");
  require(x_dagger.size() == A.cols(), "x_dagger length must match the operator's columns");

  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma_min = svd.singularValues().minCoeff();
  require(sigma_min > 1e-12 * svd.singularValues().maxCoeff(),
          "l1 setting requires an injective operator");

  ProblemInstance problem;
  problem.kind = ProblemKind::L1Linear;
  problem.n = static_cast<int>(A.cols());
  problem.m = static_cast<int>(A.rows());
  problem.sigma = svd.singularValues();
  problem.U = svd.matrixU();
  problem.V = svd.matrixV();
  problem.x_dagger = x_dagger;
  problem.y_dagger = apply_forward(problem, x_dagger);
  problem.solution_set = SolutionSet::Singleton;
  problem.omega_kind = OmegaKind::Norm1;
  problem.error_kind = ErrorKind::Norm1ToXdagger;
  problem.omega_dagger_value = x_dagger.lpNorm<1>();
  problem.xi_dagger = x_dagger.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
  return problem;
}

ProblemInstance make_autoconvolution(const Vector& x_dagger) {
  const int n = static_cast<int>(x_dagger.size());
  require(n > 0, "x_dagger must be nonempty");

  ProblemInstance problem;
  problem.kind = ProblemKind::Autoconvolution;
  problem.n = n;
  problem.m = 2 * n - 1;
  problem.h = 1.0 / n;
  problem.x_dagger = x_dagger;
  problem.y_dagger = discrete_convolution(x_dagger, x_dagger, problem.h);
  problem.solution_set = SolutionSet::PlusMinusPair;
  problem.omega_kind = OmegaKind::SquaredNorm2;
  problem.error_kind = ErrorKind::PointToSetSquared;
  problem.omega_dagger_value = x_dagger.squaredNorm();
  problem.xi_dagger = 2.0 * x_dagger;
  return problem;
}

Vector apply_forward(const ProblemInstance& problem, const Vector& x) {
  check_domain_dim(problem, x);
  if (problem.kind == ProblemKind::Autoconvolution) {
    return discrete_convolution(x, x, problem.h);
  }
  const int k = problem.rank();
  if (problem.has_factors()) {
    return problem.U * problem.sigma.cwiseProduct(problem.V.transpose() * x);
  }
  Vector y = Vector::Zero(problem.m);
  y.head(k) = problem.sigma.cwiseProduct(x.head(k));
  return y;
}

Vector apply_jacobian(const ProblemInstance& problem, const Vector& x, const Vector& direction) {
  check_domain_dim(problem, direction);
  if (problem.kind == ProblemKind::Autoconvolution) {
    check_domain_dim(problem, x);
    return 2.0 * discrete_convolution(x, direction, problem.h);
  }
  return apply_forward(problem, direction);
}

Vector apply_jacobian_adjoint(const ProblemInstance& problem, const Vector& x,
                              const Vector& residual) {
  check_codomain_dim(problem, residual);
  if (problem.kind == ProblemKind::Autoconvolution) {
    check_domain_dim(problem, x);
    const int n = problem.n;
    Vector out = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += x[i] * residual[i + j];
      out[j] = 2.0 * problem.h * acc;
    }
    return out;
  }
  const int k = problem.rank();
  if (problem.has_factors()) {
    return problem.V * problem.sigma.cwiseProduct(problem.U.transpose() * residual);
  }
  Vector out = Vector::Zero(problem.n);
  out.head(k) = problem.sigma.cwiseProduct(residual.head(k));
  return out;
}

double omega(const ProblemInstance& problem, const Vector& x) {
  check_domain_dim(problem, x);
  return problem.omega_kind == OmegaKind::SquaredNorm2 ? x.squaredNorm() : x.lpNorm<1>();
}

double error_functional(const ProblemInstance& problem, const Vector& x) {
  check_domain_dim(problem, x);
  switch (problem.error_kind) {
    case ErrorKind::SquaredNormToXdagger:
      return (x - problem.x_dagger).squaredNorm();
    case ErrorKind::PointToSetSquared:
      return std::min((x - problem.x_dagger).squaredNorm(), (x + problem.x_dagger).squaredNorm());
    case ErrorKind::Norm1ToXdagger:
      return (x - problem.x_dagger).lpNorm<1>();
    case ErrorKind::Bregman: {
      const double bregman = omega(problem, x) - problem.omega_dagger_value -
                             problem.xi_dagger.dot(x - problem.x_dagger);
      return bregman;
    }
  }
  throw std::logic_error("unreachable error kind");
}

double exact_residual_norm(const ProblemInstance& problem, const Vector& x) {
  return (apply_forward(problem, x) - problem.y_dagger).norm();
}

namespace {

OmegaKind omega_from_string(const std::string& s) {
  if (s == "squared_norm2") return OmegaKind::SquaredNorm2;
  if (s == "norm1") return OmegaKind::Norm1;
  throw std::invalid_argument("unknown omega_kind: " + s);
}

ErrorKind error_from_string(const std::string& s) {
  if (s == "squared_norm_to_xdagger") return ErrorKind::SquaredNormToXdagger;
  if (s == "point_to_set_squared") return ErrorKind::PointToSetSquared;
  if (s == "norm1_to_xdagger") return ErrorKind::Norm1ToXdagger;
  if (s == "bregman") return ErrorKind::Bregman;
  throw std::invalid_argument("unknown error_kind: " + s);
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<std::vector<double>> to_rows(const Matrix& M) {
  std::vector<std::vector<double>> rows(M.rows());
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    rows[i].assign(M.cols(), 0.0);
    for (Eigen::Index j = 0; j < M.cols(); ++j) rows[i][static_cast<size_t>(j)] = M(i, j);
  }
  return rows;
}

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix M(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::invalid_argument("ragged matrix in JSON");
    for (size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  }
  return M;
}

}  // namespace

void to_json(nlohmann::json& j, const ProblemInstance& problem) {
  j = nlohmann::json{{"kind", to_string(problem.kind)},
                     {"n", problem.n},
                     {"m", problem.m},
                     {"sigma", to_std(problem.sigma)},
                     {"xdagger", to_std(problem.x_dagger)},
                     {"omega_kind", to_string(problem.omega_kind)},
                     {"error_kind", to_string(problem.error_kind)},
                     {"p", problem.p}};
  if (problem.has_factors()) {
    j["u"] = to_rows(problem.U);
    j["v"] = to_rows(problem.V);
  }
}

void from_json(const nlohmann::json& j, ProblemInstance& problem) {
  const std::string kind = j.at("kind").get<std::string>();
  const Vector xdagger = from_std(j.at("xdagger").get<std::vector<double>>());
  if (kind == "autoconvolution") {
    problem = make_autoconvolution(xdagger);
  } else {
    const Vector sigma = from_std(j.at("sigma").get<std::vector<double>>());
    const int n = j.at("n").get<int>();
    const int k = static_cast<int>(sigma.size());
    if (j.contains("u")) {
      // Reconstruct the operator from its singular system.
      ProblemInstance raw;
      raw.sigma = sigma;
      raw.U = from_rows(j.at("u").get<std::vector<std::vector<double>>>());
      raw.V = from_rows(j.at("v").get<std::vector<std::vector<double>>>());
      raw.n = static_cast<int>(raw.V.rows());
      raw.m = static_cast<int>(raw.U.rows());
      raw.kind = ProblemKind::L1Linear;
      if (kind == "l1_linear") {
        const Matrix A = raw.U * raw.sigma.asDiagonal() * raw.V.transpose();
        problem = make_l1_linear(A, xdagger);
      } else {
        throw std::invalid_argument("dense factors are only supported for l1_linear");
      }
    } else if (kind == "linear_hilbert") {
      problem = make_linear_hilbert(sigma, xdagger.head(k), SourceMode::DirectXdagger, n - k);
    } else if (kind == "l1_linear") {
      problem = make_l1_linear(Matrix(sigma.asDiagonal()), xdagger);
    } else {
      throw std::invalid_argument("unknown problem kind: " + kind);
    }
  }
  problem.omega_kind = omega_from_string(j.at("omega_kind").get<std::string>());
  problem.error_kind = error_from_string(j.at("error_kind").get<std::string>());
  problem.p = j.at("p").get<double>();
  if (problem.p < 1.0) throw std::invalid_argument("p must be >= 1");
  problem.omega_dagger_value = omega(problem, problem.x_dagger);
  const int expect_m = j.at("m").get<int>();
  if (expect_m != problem.m) throw std::invalid_argument("inconsistent codomain dimension m");
}

}  // namespace vsclab
