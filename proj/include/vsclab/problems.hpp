#ifndef VSCLAB_PROBLEMS_HPP
#define VSCLAB_PROBLEMS_HPP

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <string>

namespace vsclab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ProblemKind { LinearHilbert, L1Linear, Autoconvolution };
enum class SolutionSet { Singleton, PlusMinusPair, AffineNullspace };
enum class OmegaKind { SquaredNorm2, Norm1 };
enum class ErrorKind { SquaredNormToXdagger, PointToSetSquared, Norm1ToXdagger, Bregman };

std::string to_string(ProblemKind kind);
std::string to_string(OmegaKind kind);
std::string to_string(ErrorKind kind);

/// A discretized inverse problem F(x) = y with penalty and error functional.
///
/// Linear operators are stored through their singular system: A = U diag(sigma) V^T
/// with orthonormal factors. Empty U/V means the canonical embedding
/// (A x)_i = sigma_i x_i for i < k, so null-space directions are the trailing
/// coordinates of x. The autoconvolution kind stores only the grid step h = 1/n.
struct ProblemInstance {
  ProblemKind kind = ProblemKind::LinearHilbert;
  int n = 0;  // domain dimension
  int m = 0;  // codomain dimension

  Vector sigma;  // k singular values, strictly positive (linear kinds only)
  Matrix U;      // m x k, orthonormal columns; empty => canonical
  Matrix V;      // n x k, orthonormal columns; empty => canonical
  double h = 0.0;

  Vector y_dagger;
  Vector x_dagger;
  Vector xi_dagger;  // subgradient of Omega at x_dagger, used by the Bregman error

  SolutionSet solution_set = SolutionSet::Singleton;
  OmegaKind omega_kind = OmegaKind::SquaredNorm2;
  ErrorKind error_kind = ErrorKind::SquaredNormToXdagger;
  double p = 2.0;
  double omega_dagger_value = 0.0;

  bool has_factors() const { return U.size() > 0; }
  int rank() const { return static_cast<int>(sigma.size()); }
};

enum class SourceMode { DirectXdagger, SourceElement };

/// Diagonal-spectrum Hilbert space instance with Omega = ||x||^2 and
/// E = ||x - x_dagger||^2. In SourceElement mode coeffs is the source element w
/// and x_dagger = A^* w. Optional trailing null-space dimensions extend the
/// domain; x_dagger is zero there, hence orthogonal to the null space.
ProblemInstance make_linear_hilbert(const Vector& singular_values, const Vector& coeffs,
                                    SourceMode mode, int null_dim = 0);

/// Injective linear operator with Omega = ||x||_1 and E = ||x - x_dagger||_1.
ProblemInstance make_l1_linear(const Matrix& A, const Vector& x_dagger);

/// Discrete autoconvolution on a uniform n-point grid over (0,1), rectangle rule,
/// image on 2n-1 points. Solution set is {x_dagger, -x_dagger}.
ProblemInstance make_autoconvolution(const Vector& x_dagger);

Vector apply_forward(const ProblemInstance& problem, const Vector& x);
Vector apply_jacobian(const ProblemInstance& problem, const Vector& x, const Vector& direction);
Vector apply_jacobian_adjoint(const ProblemInstance& problem, const Vector& x,
                              const Vector& residual);

double omega(const ProblemInstance& problem, const Vector& x);
double error_functional(const ProblemInstance& problem, const Vector& x);

/// Residual ||F(x) - y_dagger|| against the exact data.
double exact_residual_norm(const ProblemInstance& problem, const Vector& x);

void to_json(nlohmann::json& j, const ProblemInstance& problem);
void from_json(const nlohmann::json& j, ProblemInstance& problem);

}  // namespace vsclab

#endif
