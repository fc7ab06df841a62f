#include "tgsd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tgsd::kernels {

namespace {

inline double soft(double v, double tau) {
  const double mag = std::abs(v) - tau;
  if (mag <= 0.0) return 0.0;
  return v > 0.0 ? mag : -mag;
}

// Column partials summed in order keep reductions thread-count independent.
double ordered_sum(const std::vector<double>& partial) {
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

Matrix shrink(const Matrix& m, double tau) {
  Matrix out(m.rows(), m.cols());
  const Eigen::Index cols = m.cols(), rows = m.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = soft(m(i, j), tau);
  return out;
}

Matrix masked_blend(const Matrix& p, const Matrix& x, const Matrix& omega, double lambda3) {
  Matrix out(p.rows(), p.cols());
  const Eigen::Index cols = p.cols(), rows = p.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double w = lambda3 * omega(i, j);
      out(i, j) = (p(i, j) + w * x(i, j)) / (1.0 + w);
    }
  return out;
}

Matrix sylvester_scale(const Matrix& c, const Eigen::VectorXd& a, const Eigen::VectorXd& b, double rho) {
  Matrix out(c.rows(), c.cols());
  const Eigen::Index cols = c.cols(), rows = c.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = c(i, j) / (2.0 * a(i) * b(j) + rho);
  return out;
}

double squared_distance(const Matrix& a, const Matrix& b) {
  std::vector<double> partial(static_cast<std::size_t>(a.cols()), 0.0);
  const Eigen::Index cols = a.cols(), rows = a.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double d = a(i, j) - b(i, j);
      s += d * d;
    }
    partial[static_cast<std::size_t>(j)] = s;
  }
  return ordered_sum(partial);
}

double masked_squared_distance(const Matrix& a, const Matrix& b, const Matrix& mask) {
  std::vector<double> partial(static_cast<std::size_t>(a.cols()), 0.0);
  const Eigen::Index cols = a.cols(), rows = a.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (mask(i, j) == 0.0) continue;
      const double d = a(i, j) - b(i, j);
      s += d * d;
    }
    partial[static_cast<std::size_t>(j)] = s;
  }
  return ordered_sum(partial);
}

double l1_norm(const Matrix& m) {
  std::vector<double> partial(static_cast<std::size_t>(m.cols()), 0.0);
  const Eigen::Index cols = m.cols(), rows = m.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) s += std::abs(m(i, j));
    partial[static_cast<std::size_t>(j)] = s;
  }
  return ordered_sum(partial);
}

std::vector<int> nearest_centres(const Matrix& points, const Matrix& centres, std::vector<double>& distance) {
  const Eigen::Index n = points.rows();
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  distance.assign(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < centres.rows(); ++c) {
      const double d = (points.row(i) - centres.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    label[static_cast<std::size_t>(i)] = arg;
    distance[static_cast<std::size_t>(i)] = best;
  }
  return label;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// ---------------------------------------------------------------------------

namespace serial {

Matrix shrink(const Matrix& m, double tau) {
  Matrix out = m;
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const double v = out.data()[k];
    const double mag = std::max(std::abs(v) - tau, 0.0);
    out.data()[k] = mag == 0.0 ? 0.0 : std::copysign(mag, v);
  }
  return out;
}

Matrix masked_blend(const Matrix& p, const Matrix& x, const Matrix& omega, double lambda3) {
  return (p.array() + lambda3 * omega.array() * x.array()) / (1.0 + lambda3 * omega.array());
}

Matrix sylvester_scale(const Matrix& c, const Eigen::VectorXd& a, const Eigen::VectorXd& b, double rho) {
  Matrix denom = 2.0 * a * b.transpose();
  denom.array() += rho;
  return c.array() / denom.array();
}

double squared_distance(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) col += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
    s += col;
  }
  return s;
}

double masked_squared_distance(const Matrix& a, const Matrix& b, const Matrix& mask) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (mask(i, j) != 0.0) col += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
    s += col;
  }
  return s;
}

double l1_norm(const Matrix& m) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) col += std::abs(m(i, j));
    s += col;
  }
  return s;
}

std::vector<int> nearest_centres(const Matrix& points, const Matrix& centres, std::vector<double>& distance) {
  std::vector<int> label;
  distance.clear();
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    Eigen::Index arg = 0;
    const double best = (centres.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&arg);
    label.push_back(static_cast<int>(arg));
    distance.push_back(best);
  }
  return label;
}

}  // namespace serial

}  // namespace tgsd::kernels
