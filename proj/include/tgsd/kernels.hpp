#pragma once

#include <Eigen/Dense>

#include <vector>

// Elementwise and reduction kernels of the ADMM loop and the evaluation
// tasks. The top-level functions run OpenMP-parallel over columns; the
// `serial` namespace holds straightforward reference loops used by the tests
// and the benchmark. Reductions accumulate per column and then sum the column
// partials in index order, so results do not depend on the thread count.

namespace tgsd::kernels {

using Matrix = Eigen::MatrixXd;

/// sign(m) * max(|m| - tau, 0), elementwise.
Matrix shrink(const Matrix& m, double tau);

/// (P + lambda3 * Omega .* X) ./ (1 + lambda3 * Omega).
Matrix masked_blend(const Matrix& p, const Matrix& x, const Matrix& omega, double lambda3);

/// C ./ (2 * a * b^T + rho): the diagonalised regularized Sylvester step.
Matrix sylvester_scale(const Matrix& c, const Eigen::VectorXd& a, const Eigen::VectorXd& b, double rho);

/// sum of squares of (A - B) over all entries.
double squared_distance(const Matrix& a, const Matrix& b);

/// sum of squares of (A - B) over entries where mask != 0.
double masked_squared_distance(const Matrix& a, const Matrix& b, const Matrix& mask);

/// sum |m|.
double l1_norm(const Matrix& m);

/// Index of the closest centre (rows of `centres`) for every row of `points`,
/// ties to the lower index. Writes squared distances to `distance`.
std::vector<int> nearest_centres(const Matrix& points, const Matrix& centres, std::vector<double>& distance);

namespace serial {

Matrix shrink(const Matrix& m, double tau);
Matrix masked_blend(const Matrix& p, const Matrix& x, const Matrix& omega, double lambda3);
Matrix sylvester_scale(const Matrix& c, const Eigen::VectorXd& a, const Eigen::VectorXd& b, double rho);
double squared_distance(const Matrix& a, const Matrix& b);
double masked_squared_distance(const Matrix& a, const Matrix& b, const Matrix& mask);
double l1_norm(const Matrix& m);
std::vector<int> nearest_centres(const Matrix& points, const Matrix& centres, std::vector<double>& distance);

}  // namespace serial

/// Number of threads the parallel kernels use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace tgsd::kernels
