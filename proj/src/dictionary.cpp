#include "tgsd/dictionary.hpp"

#include "tgsd/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <deque>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace tgsd {

const char* to_string(GraphDictKind kind) noexcept {
  switch (kind) {
    case GraphDictKind::GFT: return "gft";
    case GraphDictKind::GraphHaar: return "haar";
  }
  return "?";
}

const char* to_string(TimeDictKind kind) noexcept {
  switch (kind) {
    case TimeDictKind::Fourier: return "fourier";
    case TimeDictKind::Ramanujan: return "ramanujan";
    case TimeDictKind::Spline: return "spline";
  }
  return "?";
}

double orthonormality_residual(const GraphDictionary& dict) {
  const Matrix gram = dict.psi.transpose() * dict.psi;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double orthonormality_residual(const TimeDictionary& dict) {
  const Matrix gram = dict.phi * dict.phi.transpose();
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

GraphDictionary identity_graph_dictionary(int n) {
  GraphDictionary d;
  d.psi = Matrix::Identity(n, n);
  d.kind = GraphDictKind::GFT;
  d.orthonormal_columns = true;
  d.atom_meta.assign(n, GraphAtomMeta{});
  return d;
}

TimeDictionary identity_time_dictionary(int t) {
  TimeDictionary d;
  d.phi = Matrix::Identity(t, t);
  d.kind = TimeDictKind::Spline;
  d.orthonormal_rows = true;
  d.atom_meta.assign(t, TimeAtomMeta{});
  for (int j = 0; j < t; ++j) {
    d.atom_meta[j].span_begin = j;
    d.atom_meta[j].span_end = j + 1;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Graph dictionaries

GraphDictionary build_gft(const Graph& g, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw Error(Errc::RangeError, "GFT fraction must be in (0,1], got " + std::to_string(fraction));
  const int n = g.size();
  const int m = std::max(1, static_cast<int>(std::ceil(fraction * n - 1e-12)));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(laplacian(g).L);

  GraphDictionary d;
  d.kind = GraphDictKind::GFT;
  d.orthonormal_columns = true;
  d.psi = eig.eigenvectors().leftCols(m);
  d.atom_meta.resize(m);
  for (int c = 0; c < m; ++c) {
    // fix the sign so repeated builds agree
    auto col = d.psi.col(c);
    for (int i = 0; i < n; ++i) {
      if (std::abs(col(i)) > 1e-12) {
        if (col(i) < 0) col = -col;
        break;
      }
    }
    d.atom_meta[c].eigenvalue = eig.eigenvalues()(c);
  }
  return d;
}

namespace {

struct HaarTask {
  NodeSet nodes;
  int depth;
};

void emit_haar_atom(GraphDictionary& d, const NodeSet& first, const NodeSet& second, int depth) {
  const double a = static_cast<double>(first.size());
  const double b = static_cast<double>(second.size());
  Vector atom = Vector::Zero(d.psi.rows());
  const double pos = std::sqrt(b) / (std::sqrt(a) * std::sqrt(a + b));
  const double neg = -std::sqrt(a) / (std::sqrt(b) * std::sqrt(a + b));
  for (int v : first) atom(v) = pos;
  for (int v : second) atom(v) = neg;
  d.psi.conservativeResize(Eigen::NoChange, d.psi.cols() + 1);
  d.psi.col(d.psi.cols() - 1) = atom;
  d.atom_meta.push_back({0.0, depth});
}

NodeSet map_nodes(const NodeSet& local, const NodeSet& global) {
  NodeSet out;
  out.reserve(local.size());
  for (int i : local) out.push_back(global[i]);
  return out;
}

}  // namespace

GraphDictionary build_graph_haar(const Graph& g) {
  const int n = g.size();
  GraphDictionary d;
  d.kind = GraphDictKind::GraphHaar;
  d.orthonormal_columns = true;
  d.psi = Matrix::Constant(n, 1, 1.0 / std::sqrt(static_cast<double>(n)));
  d.atom_meta.push_back({0.0, 0});

  NodeSet all(n);
  std::iota(all.begin(), all.end(), 0);
  std::deque<HaarTask> queue;
  queue.push_back({all, 1});

  while (!queue.empty()) {
    HaarTask task = std::move(queue.front());
    queue.pop_front();
    if (task.nodes.size() < 2) continue;

    NodeSet first, second;
    const Graph sub = g.induced(task.nodes);
    const auto comps = connected_components(sub);
    if (comps.size() > 1) {
      // peel off one component; the remainder splits again on its own turn
      first = map_nodes(comps.front(), task.nodes);
      for (std::size_t c = 1; c < comps.size(); ++c) {
        auto part = map_nodes(comps[c], task.nodes);
        second.insert(second.end(), part.begin(), part.end());
      }
      std::sort(second.begin(), second.end());
    } else {
      NodeSet local(task.nodes.size());
      std::iota(local.begin(), local.end(), 0);
      const Vector f = fiedler_vector(sub, local);
      for (std::size_t i = 0; i < task.nodes.size(); ++i)
        (f(static_cast<Eigen::Index>(i)) >= 0.0 ? first : second).push_back(task.nodes[i]);
      if (first.empty() || second.empty()) continue;
    }
    emit_haar_atom(d, first, second, task.depth);
    queue.push_back({std::move(first), task.depth + 1});
    queue.push_back({std::move(second), task.depth + 1});
  }
  return d;
}

// ---------------------------------------------------------------------------
// Time dictionaries

TimeDictionary build_fourier(int t) {
  if (t < 1) throw Error(Errc::RangeError, "Fourier length must be positive");
  TimeDictionary d;
  d.kind = TimeDictKind::Fourier;
  d.orthonormal_rows = true;
  d.phi.resize(t, t);
  const double tt = static_cast<double>(t);
  int row = 0;
  d.phi.row(row++).setConstant(1.0 / std::sqrt(tt));
  d.atom_meta.push_back({0, false});
  const double scale = std::sqrt(2.0 / tt);
  for (int k = 1; k <= (t - 1) / 2; ++k) {
    for (int j = 0; j < t; ++j) {
      // reduce k*j mod t before scaling to keep the angle accurate
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(k) * j) % t) / tt;
      d.phi(row, j) = scale * std::cos(angle);
      d.phi(row + 1, j) = scale * std::sin(angle);
    }
    d.atom_meta.push_back({k, false});
    d.atom_meta.push_back({k, true});
    row += 2;
  }
  if (t % 2 == 0) {
    for (int j = 0; j < t; ++j) d.phi(row, j) = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(tt);
    d.atom_meta.push_back({t / 2, false});
    ++row;
  }
  return d;
}

std::int64_t euler_totient(std::int64_t d) {
  if (d < 1) throw Error(Errc::RangeError, "totient argument must be positive");
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= d; ++k)
    if (std::gcd(k, d) == 1) ++count;
  return count;
}

std::int64_t ramanujan_sum(std::int64_t d, std::int64_t g) {
  if (d < 1) throw Error(Errc::RangeError, "Ramanujan sum period must be positive");
  if (g < 0) throw Error(Errc::RangeError, "Ramanujan sum argument must be nonnegative");
  std::complex<double> sum{0.0, 0.0};
  for (std::int64_t k = 1; k <= d; ++k) {
    if (std::gcd(k, d) != 1) continue;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * (g % d)) % d) / static_cast<double>(d);
    sum += std::polar(1.0, angle);
  }
  const double rounded = std::round(sum.real());
  if (std::abs(sum.imag()) > 1e-9 || std::abs(sum.real() - rounded) > 1e-9)
    throw std::logic_error("Ramanujan sum is not integral for d=" + std::to_string(d));
  return static_cast<std::int64_t>(rounded);
}

TimeDictionary build_ramanujan(int t, int g_max, bool dedup) {
  if (t < 1 || g_max < 1) throw Error(Errc::RangeError, "Ramanujan dictionary needs t >= 1 and g_max >= 1");
  if (g_max > t)
    throw Error(Errc::GMaxTooLarge, "g_max " + std::to_string(g_max) + " exceeds series length " + std::to_string(t));

  TimeDictionary d;
  d.kind = TimeDictKind::Ramanujan;
  d.orthonormal_rows = false;

  std::vector<std::vector<std::int64_t>> sums(g_max + 1);
  for (int div = 1; div <= g_max; ++div) {
    sums[div].resize(div);
    for (int r = 0; r < div; ++r) sums[div][r] = ramanujan_sum(div, r);
  }

  std::vector<bool> emitted(g_max + 1, false);
  std::vector<Eigen::RowVectorXd> rows;
  for (int g = 1; g <= g_max; ++g) {
    for (int div = 1; div <= g; ++div) {
      if (g % div != 0) continue;
      if (dedup && emitted[div]) continue;
      emitted[div] = true;
      const auto cols = euler_totient(div);
      for (int c = 0; c < cols; ++c) {
        Eigen::RowVectorXd atom(t);
        for (int j = 0; j < t; ++j) atom(j) = static_cast<double>(sums[div][((j - c) % div + div) % div]);
        rows.push_back(std::move(atom));
        TimeAtomMeta meta;
        meta.period = g;
        meta.divisor = div;
        meta.column = c;
        d.atom_meta.push_back(meta);
      }
    }
  }
  d.phi.resize(static_cast<Eigen::Index>(rows.size()), t);
  for (std::size_t r = 0; r < rows.size(); ++r) d.phi.row(static_cast<Eigen::Index>(r)) = rows[r];
  return d;
}

namespace {

double cox_de_boor(int i, int p, double u, std::span<const double> knots, bool close_right) {
  if (p == 0) {
    if (knots[i] <= u && u < knots[i + 1]) return 1.0;
    // the last nonempty span also owns the right end of the domain
    return (close_right && u == knots.back() && knots[i] < knots[i + 1] && knots[i + 1] == knots.back()) ? 1.0 : 0.0;
  }
  double value = 0.0;
  const double left_den = knots[i + p] - knots[i];
  if (left_den != 0.0) value += (u - knots[i]) / left_den * cox_de_boor(i, p - 1, u, knots, close_right);
  const double right_den = knots[i + p + 1] - knots[i + 1];
  if (right_den != 0.0) value += (knots[i + p + 1] - u) / right_den * cox_de_boor(i + 1, p - 1, u, knots, close_right);
  return value;
}

}  // namespace

double bspline_value(int i, int p, double u, std::span<const double> knots) {
  if (p < 0 || i < 0 || knots.size() < static_cast<std::size_t>(i + p + 2))
    throw Error(Errc::RangeError, "knot vector too short for B-spline index/degree");
  return cox_de_boor(i, p, u, knots, false);
}

std::vector<double> clamped_uniform_knots(int t, int n_basis, int degree) {
  const int interior = n_basis - degree - 1;
  const double end = static_cast<double>(t - 1);
  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(n_basis + degree + 1));
  for (int r = 0; r <= degree; ++r) knots.push_back(0.0);
  for (int j = 1; j <= interior; ++j) knots.push_back(end * j / (interior + 1));
  for (int r = 0; r <= degree; ++r) knots.push_back(end);
  return knots;
}

TimeDictionary build_spline(int t, int n_basis, int degree, bool normalize) {
  if (t < 1 || degree < 0) throw Error(Errc::RangeError, "spline needs t >= 1 and degree >= 0");
  if (n_basis < degree + 1 || n_basis > t)
    throw Error(Errc::InsufficientBasis, "n_basis " + std::to_string(n_basis) + " must lie in [degree+1, t] = [" +
                                             std::to_string(degree + 1) + ", " + std::to_string(t) + "]");
  TimeDictionary d;
  d.kind = TimeDictKind::Spline;
  d.orthonormal_rows = false;
  if (t == 1) {
    d.phi = Matrix::Ones(1, 1);
    d.atom_meta.push_back({0, false, 0, 0, 0, 0.0, 0.0});
    return d;
  }
  const auto knots = clamped_uniform_knots(t, n_basis, degree);
  d.phi.resize(n_basis, t);
  for (int i = 0; i < n_basis; ++i) {
    for (int j = 0; j < t; ++j) d.phi(i, j) = cox_de_boor(i, degree, static_cast<double>(j), knots, true);
    TimeAtomMeta meta;
    meta.span_begin = knots[i];
    meta.span_end = knots[i + degree + 1];
    d.atom_meta.push_back(meta);
    if (normalize) {
      const double norm = d.phi.row(i).norm();
      if (norm > 0.0) d.phi.row(i) /= norm;
    }
  }
  return d;
}

}  // namespace tgsd
