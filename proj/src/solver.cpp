#include "tgsd/solver.hpp"

#include "tgsd/error.hpp"
#include "tgsd/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace tgsd {

namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::ShapeMismatch, what);
}

}  // namespace

MaskedSignal::MaskedSignal(Matrix x) : x_(std::move(x)) {
  omega_ = Matrix::Ones(x_.rows(), x_.cols());
  observed_ = x_.size();
}

MaskedSignal::MaskedSignal(Matrix x, Matrix omega) : x_(std::move(x)), omega_(std::move(omega)) {
  if (x_.rows() != omega_.rows() || x_.cols() != omega_.cols())
    throw Error(Errc::MaskShapeMismatch, "signal " + shape(x_) + " vs mask " + shape(omega_));
  observed_ = 0;
  for (Eigen::Index k = 0; k < omega_.size(); ++k) {
    const double w = omega_.data()[k];
    if (w != 0.0 && w != 1.0) throw Error(Errc::RangeError, "mask entries must be 0 or 1");
    if (w == 0.0) x_.data()[k] = 0.0;
    else ++observed_;
  }
  fully_observed_ = observed_ == omega_.size();
}

void SolverConfig::validate() const {
  auto fail = [](const char* key, const std::string& why) {
    throw Error(Errc::RangeError, std::string("solver.") + key + ": " + why);
  };
  if (!(lambda1 >= 0.0)) fail("lambda1", "must be >= 0");
  if (!(lambda2 >= 0.0)) fail("lambda2", "must be >= 0");
  if (!(lambda3 >= 0.0)) fail("lambda3", "must be >= 0");
  if (!(rho1 > 0.0)) fail("rho1", "must be > 0");
  if (!(rho2 > 0.0)) fail("rho2", "must be > 0");
  if (k < 1) fail("k", "must be >= 1");
  if (!(epsilon > 0.0)) fail("epsilon", "must be > 0");
  if (max_iter < 1) fail("max_iter", "must be >= 1");
}

Matrix shrink(const Matrix& m, double tau) {
  if (!(tau >= 0.0)) throw Error(Errc::RangeError, "shrink threshold must be >= 0");
  return kernels::shrink(m, tau);
}

Matrix update_d(const Matrix& p, const Matrix& x, const Matrix& omega, double lambda3) {
  require(p.rows() == x.rows() && p.cols() == x.cols() && omega.rows() == x.rows() && omega.cols() == x.cols(),
          "update_d: P " + shape(p) + ", X " + shape(x) + ", Omega " + shape(omega));
  return kernels::masked_blend(p, x, omega, lambda3);
}

SymmetricEigen SymmetricEigen::of(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::ShapeMismatch, "expected a square matrix, got " + shape(m));
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  if (m.size() && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw Error(Errc::AsymmetricInput, "matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  return {eig.eigenvectors(), eig.eigenvalues()};
}

Matrix solve_regularized_sylvester(const SymmetricEigen& m, const SymmetricEigen& n, const Matrix& pi, double rho) {
  if (!(rho > 0.0)) throw Error(Errc::NonPositiveRho, "rho = " + std::to_string(rho));
  require(pi.rows() == m.values.size() && pi.cols() == n.values.size(),
          "Sylvester rhs " + shape(pi) + " vs sides " + std::to_string(m.values.size()) + ", " +
              std::to_string(n.values.size()));
  const Matrix rotated = m.vectors.transpose() * pi * n.vectors;
  const Matrix e = kernels::sylvester_scale(rotated, m.values, n.values, rho);
  return m.vectors * e * n.vectors.transpose();
}

Matrix sylvester_residual(const Matrix& m, const Matrix& x, const Matrix& n, const Matrix& pi, double rho) {
  using Wide = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const Wide xw = x.cast<long double>();
  const Wide lhs = 2.0L * m.cast<long double>() * xw * n.cast<long double>() + static_cast<long double>(rho) * xw;
  return (pi.cast<long double>() - lhs).cast<double>();
}

Matrix solve_regularized_sylvester(const Matrix& m, const Matrix& n, const SymmetricEigen& m_eig,
                                   const SymmetricEigen& n_eig, const Matrix& pi, double rho) {
  Matrix x = solve_regularized_sylvester(m_eig, n_eig, pi, rho);
  // one refinement step against an extended-precision residual
  x += solve_regularized_sylvester(m_eig, n_eig, sylvester_residual(m, x, n, pi, rho), rho);
  return x;
}

Matrix solve_regularized_sylvester(const Matrix& m, const Matrix& n, const Matrix& pi, double rho) {
  if (!(rho > 0.0)) throw Error(Errc::NonPositiveRho, "rho = " + std::to_string(rho));
  return solve_regularized_sylvester(m, n, SymmetricEigen::of(m), SymmetricEigen::of(n), pi, rho);
}

Matrix y_rhs(const Matrix& d, const Matrix& psi, const Matrix& b, const Matrix& z, const Matrix& gamma1, double rho1) {
  require(psi.rows() == d.rows() && b.cols() == d.cols() && z.rows() == psi.cols() && z.cols() == b.rows() &&
              gamma1.rows() == z.rows() && gamma1.cols() == z.cols(),
          "update_y: D " + shape(d) + ", Psi " + shape(psi) + ", B " + shape(b) + ", Z " + shape(z));
  return 2.0 * (psi.transpose() * d) * b.transpose() + rho1 * z + gamma1;
}

Matrix w_rhs(const Matrix& d, const Matrix& a, const Matrix& phi, const Matrix& v, const Matrix& gamma2, double rho2) {
  require(a.rows() == d.rows() && phi.cols() == d.cols() && v.rows() == a.cols() && v.cols() == phi.rows() &&
              gamma2.rows() == v.rows() && gamma2.cols() == v.cols(),
          "update_w: D " + shape(d) + ", A " + shape(a) + ", Phi " + shape(phi) + ", V " + shape(v));
  return 2.0 * a.transpose() * (d * phi.transpose()) + rho2 * v + gamma2;
}

namespace {

Matrix y_case1(const Matrix& pi1, const Matrix& b, double rho1) {
  Matrix k = 2.0 * b * b.transpose();
  k.diagonal().array() += rho1;
  // Y K = Pi1 with K symmetric positive definite
  return k.ldlt().solve(pi1.transpose()).transpose();
}

Matrix w_case1(const Matrix& pi2, const Matrix& a, double rho2) {
  Matrix k = 2.0 * a.transpose() * a;
  k.diagonal().array() += rho2;
  return k.ldlt().solve(pi2);
}

Matrix gram_cols(const Matrix& m) { return m.transpose() * m; }
Matrix gram_rows(const Matrix& m) { return m * m.transpose(); }

double y_stationarity(const Matrix& psi_gram, const Matrix& y, const Matrix& b, const Matrix& pi1, double rho1) {
  return sylvester_residual(psi_gram, y, gram_rows(b), pi1, rho1).cwiseAbs().maxCoeff();
}

double w_stationarity(const Matrix& a, const Matrix& w, const Matrix& phi_gram, const Matrix& pi2, double rho2) {
  return sylvester_residual(gram_cols(a), w, phi_gram, pi2, rho2).cwiseAbs().maxCoeff();
}

}  // namespace

Matrix update_y(const Matrix& d, const Matrix& psi, const Matrix& b, const Matrix& z, const Matrix& gamma1, double rho1,
                bool orthogonal) {
  if (!(rho1 > 0.0)) throw Error(Errc::NonPositiveRho, "rho1 = " + std::to_string(rho1));
  const Matrix pi1 = y_rhs(d, psi, b, z, gamma1, rho1);
  if (orthogonal) return y_case1(pi1, b, rho1);
  return solve_regularized_sylvester(gram_cols(psi), gram_rows(b), pi1, rho1);
}

Matrix update_w(const Matrix& d, const Matrix& a, const Matrix& phi, const Matrix& v, const Matrix& gamma2, double rho2,
                bool orthogonal) {
  if (!(rho2 > 0.0)) throw Error(Errc::NonPositiveRho, "rho2 = " + std::to_string(rho2));
  const Matrix pi2 = w_rhs(d, a, phi, v, gamma2, rho2);
  if (orthogonal) return w_case1(pi2, a, rho2);
  return solve_regularized_sylvester(gram_cols(a), gram_rows(phi), pi2, rho2);
}

double objective(const Matrix& psi, const Matrix& phi, const Matrix& y, const Matrix& w, const Matrix& z,
                 const Matrix& v, const Matrix& d, const MaskedSignal& signal, const SolverConfig& config) {
  const Matrix model = psi * y * (w * phi);
  double f = kernels::squared_distance(d, model);
  f += config.lambda1 * kernels::l1_norm(z) + config.lambda2 * kernels::l1_norm(v);
  if (config.lambda3 != 0.0 && !signal.fully_observed())
    f += config.lambda3 * kernels::masked_squared_distance(d, signal.x(), signal.omega());
  return f;
}

double objective(const DecompositionModel& model, const MaskedSignal& signal) {
  return objective(model.psi->psi, model.phi->phi, model.Y, model.W, model.Z, model.V, model.D, signal, model.config);
}

DecompositionModel fit(const MaskedSignal& signal, std::shared_ptr<const GraphDictionary> psi_dict,
                       std::shared_ptr<const TimeDictionary> phi_dict, const SolverConfig& config) {
  config.validate();
  if (!psi_dict || !phi_dict) throw Error(Errc::ShapeMismatch, "fit: missing dictionary");
  const Matrix& psi = psi_dict->psi;
  const Matrix& phi = phi_dict->phi;
  const Matrix& x = signal.x();
  require(psi.rows() == x.rows(), "fit: Psi " + shape(psi) + " vs signal " + shape(x));
  require(phi.cols() == x.cols(), "fit: Phi " + shape(phi) + " vs signal " + shape(x));

  const Eigen::Index m = psi.cols(), s = phi.rows(), k = config.k;
  const double rho1 = config.rho1, rho2 = config.rho2;
  const bool ortho_psi = psi_dict->orthonormal_columns;
  const bool ortho_phi = phi_dict->orthonormal_rows;

  // fixed sides of the Sylvester systems, factored once
  const Matrix psi_gram = gram_cols(psi);
  const Matrix phi_gram = gram_rows(phi);
  SymmetricEigen psi_eig, phi_eig;
  if (!ortho_psi) psi_eig = SymmetricEigen::of(psi_gram);
  if (!ortho_phi) phi_eig = SymmetricEigen::of(phi_gram);

  DecompositionModel model;
  model.psi = psi_dict;
  model.phi = phi_dict;
  model.config = config;
  model.Y = Matrix::Ones(m, k);
  model.Z = model.Y;
  model.W = Matrix::Ones(k, s);
  model.V = model.W;
  model.Gamma1 = Matrix::Zero(m, k);
  model.Gamma2 = Matrix::Zero(k, s);
  model.D = x;

  Matrix& Y = model.Y;
  Matrix& W = model.W;
  Matrix& Z = model.Z;
  Matrix& V = model.V;
  Matrix& G1 = model.Gamma1;
  Matrix& G2 = model.Gamma2;
  Matrix& D = model.D;

  model.initial_objective = objective(psi, phi, Y, W, Z, V, D, signal, config);
  double previous = model.initial_objective;

  for (int it = 1; it <= config.max_iter; ++it) {
    if (!signal.fully_observed()) {
      const Matrix p = psi * Y * (W * phi);
      D = kernels::masked_blend(p, x, signal.omega(), config.lambda3);
    }

    const Matrix b = W * phi;
    const Matrix pi1 = y_rhs(D, psi, b, Z, G1, rho1);
    if (ortho_psi) Y = y_case1(pi1, b, rho1);
    else {
      const Matrix bb = gram_rows(b);
      Y = solve_regularized_sylvester(psi_gram, bb, psi_eig, SymmetricEigen::of(bb), pi1, rho1);
    }
    if (config.track_stationarity) model.stationarity_y.push_back(y_stationarity(psi_gram, Y, b, pi1, rho1));

    const Matrix a = psi * Y;
    const Matrix pi2 = w_rhs(D, a, phi, V, G2, rho2);
    if (ortho_phi) W = w_case1(pi2, a, rho2);
    else {
      const Matrix aa = gram_cols(a);
      W = solve_regularized_sylvester(aa, phi_gram, SymmetricEigen::of(aa), phi_eig, pi2, rho2);
    }
    if (config.track_stationarity) model.stationarity_w.push_back(w_stationarity(a, W, phi_gram, pi2, rho2));

    V = kernels::shrink(W - G2 / rho2, config.lambda2 / rho2);
    Z = kernels::shrink(Y - G1 / rho1, config.lambda1 / rho1);
    G1 += rho1 * (Z - Y);
    G2 += rho2 * (V - W);

    const double f = objective(psi, phi, Y, W, Z, V, D, signal, config);
    if (!std::isfinite(f) || !Y.allFinite() || !W.allFinite())
      throw Error(Errc::NonFinite, "non-finite iterate at iteration " + std::to_string(it));
    model.objective_trace.push_back(f);
    model.primal_residual_y.push_back((Z - Y).norm());
    model.primal_residual_w.push_back((V - W).norm());
    model.iterations = it;
    if (std::abs(f - previous) <= config.epsilon) {
      model.converged = true;
      break;
    }
    previous = f;
  }
  return model;
}

Matrix reconstruct(const DecompositionModel& model) {
  return model.psi->psi * model.graph_coefficients() * (model.time_coefficients() * model.phi->phi);
}

}  // namespace tgsd
