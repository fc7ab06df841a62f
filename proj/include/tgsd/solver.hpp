#pragma once

#include "tgsd/dictionary.hpp"

#include <memory>
#include <vector>

namespace tgsd {

/// Signal matrix plus observation mask (1 = observed). Unobserved entries of
/// X are stored as exact zeros.
class MaskedSignal {
 public:
  MaskedSignal() = default;
  /// Fully observed signal.
  explicit MaskedSignal(Matrix x);
  /// Validates the mask and zeroes X under it.
  MaskedSignal(Matrix x, Matrix omega);

  const Matrix& x() const noexcept { return x_; }
  const Matrix& omega() const noexcept { return omega_; }
  Eigen::Index rows() const noexcept { return x_.rows(); }
  Eigen::Index cols() const noexcept { return x_.cols(); }
  bool fully_observed() const noexcept { return fully_observed_; }
  Eigen::Index observed_count() const noexcept { return observed_; }

 private:
  Matrix x_;
  Matrix omega_;
  bool fully_observed_ = true;
  Eigen::Index observed_ = 0;
};

struct SolverConfig {
  double lambda1 = 0.1;
  double lambda2 = 0.1;
  double lambda3 = 10.0;
  double rho1 = 1.0;
  double rho2 = 1.0;
  int k = 7;
  double epsilon = 1e-7;
  int max_iter = 500;
  int seed = 0;
  /// Reconstruct from the thresholded copies (Z, V) rather than (Y, W).
  bool sparse_coefficients = true;
  /// Record the zero-gradient residuals of the Y and W updates each iteration.
  bool track_stationarity = false;

  /// Throws RangeError naming the offending field.
  void validate() const;
};

struct DecompositionModel {
  Matrix Y, W, Z, V, Gamma1, Gamma2, D;
  int iterations = 0;
  bool converged = false;
  double initial_objective = 0.0;
  std::vector<double> objective_trace;
  std::vector<double> primal_residual_y;  // ||Z - Y||_F per iteration
  std::vector<double> primal_residual_w;  // ||V - W||_F per iteration
  std::vector<double> stationarity_y;     // max-abs, when tracked
  std::vector<double> stationarity_w;
  std::shared_ptr<const GraphDictionary> psi;
  std::shared_ptr<const TimeDictionary> phi;
  SolverConfig config;

  /// Final coefficients: (Z, V) by default, (Y, W) when the config says so.
  const Matrix& graph_coefficients() const { return config.sparse_coefficients ? Z : Y; }
  const Matrix& time_coefficients() const { return config.sparse_coefficients ? V : W; }
};

/// Elementwise soft threshold.
Matrix shrink(const Matrix& m, double tau);

/// D = (P + lambda3 Omega.*X) ./ (1 + lambda3 Omega).
Matrix update_d(const Matrix& p, const Matrix& x, const Matrix& omega, double lambda3);

/// Eigendecomposition of one symmetric side of a regularized Sylvester system.
struct SymmetricEigen {
  Matrix vectors;
  Eigen::VectorXd values;

  /// Throws AsymmetricInput when |M - M^T| exceeds 1e-8 (relative to max(1, |M|_max)).
  static SymmetricEigen of(const Matrix& m);
};

/// X solving 2 M X N + rho X = Pi, for symmetric PSD M (p x p), N (q x q).
Matrix solve_regularized_sylvester(const Matrix& m, const Matrix& n, const Matrix& pi, double rho);
/// Single diagonalised solve from precomputed eigendecompositions.
Matrix solve_regularized_sylvester(const SymmetricEigen& m, const SymmetricEigen& n, const Matrix& pi, double rho);
/// Diagonalised solve plus one refinement step.
Matrix solve_regularized_sylvester(const Matrix& m, const Matrix& n, const SymmetricEigen& m_eig,
                                   const SymmetricEigen& n_eig, const Matrix& pi, double rho);

/// Pi - (2 M X N + rho X), accumulated in extended precision.
Matrix sylvester_residual(const Matrix& m, const Matrix& x, const Matrix& n, const Matrix& pi, double rho);

/// Y-step. `b` = W * Phi. Case 1 (orthogonal) uses the k x k inverse, Case 2
/// the regularized Sylvester solve with Psi^T Psi.
Matrix update_y(const Matrix& d, const Matrix& psi, const Matrix& b, const Matrix& z, const Matrix& gamma1, double rho1,
                bool orthogonal);

/// W-step. `a` = Psi * Y. The data term uses D.
Matrix update_w(const Matrix& d, const Matrix& a, const Matrix& phi, const Matrix& v, const Matrix& gamma2, double rho2,
                bool orthogonal);

/// Right-hand side of the Y zero-gradient equation.
Matrix y_rhs(const Matrix& d, const Matrix& psi, const Matrix& b, const Matrix& z, const Matrix& gamma1, double rho1);
/// Right-hand side of the W zero-gradient equation.
Matrix w_rhs(const Matrix& d, const Matrix& a, const Matrix& phi, const Matrix& v, const Matrix& gamma2, double rho2);

/// ||D - Psi Y W Phi||_F^2 + l1 ||Z||_1 + l2 ||V||_1 + l3 ||Omega .* (D - X)||_F^2.
double objective(const Matrix& psi, const Matrix& phi, const Matrix& y, const Matrix& w, const Matrix& z,
                 const Matrix& v, const Matrix& d, const MaskedSignal& signal, const SolverConfig& config);
double objective(const DecompositionModel& model, const MaskedSignal& signal);

/// Runs the ADMM iteration. Throws ShapeMismatch or NonFinite.
DecompositionModel fit(const MaskedSignal& signal, std::shared_ptr<const GraphDictionary> psi,
                       std::shared_ptr<const TimeDictionary> phi, const SolverConfig& config);

/// Psi * Y * W * Phi with the model's final coefficients.
Matrix reconstruct(const DecompositionModel& model);

}  // namespace tgsd
