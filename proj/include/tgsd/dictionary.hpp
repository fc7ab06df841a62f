#pragma once

#include "tgsd/graph.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tgsd {

enum class GraphDictKind { GFT, GraphHaar };
enum class TimeDictKind { Fourier, Ramanujan, Spline };

const char* to_string(GraphDictKind kind) noexcept;
const char* to_string(TimeDictKind kind) noexcept;

/// Per-atom metadata of a graph dictionary. GFT atoms carry their Laplacian
/// eigenvalue, Haar atoms the depth of the bisection that produced them.
struct GraphAtomMeta {
  double eigenvalue = 0.0;
  int depth = 0;
};

/// Per-atom metadata of a time dictionary.
///
/// Fourier: `frequency` and `is_sine` (the constant and alternating rows have
/// is_sine = false). Ramanujan: `period` is the block g, `divisor` the exact
/// period d of the atom and `column` its index inside the divisor block.
/// Spline: `span_begin`/`span_end` are the knot interval [u_i, u_{i+p+1}).
struct TimeAtomMeta {
  int frequency = 0;
  bool is_sine = false;
  int period = 0;
  int divisor = 0;
  int column = 0;
  double span_begin = 0.0;
  double span_end = 0.0;
};

/// Fixed n x m graph basis; columns are atoms.
struct GraphDictionary {
  Matrix psi;
  GraphDictKind kind = GraphDictKind::GFT;
  bool orthonormal_columns = false;
  std::vector<GraphAtomMeta> atom_meta;

  Eigen::Index nodes() const noexcept { return psi.rows(); }
  Eigen::Index atoms() const noexcept { return psi.cols(); }
};

/// Fixed s x t temporal basis; rows are atoms.
struct TimeDictionary {
  Matrix phi;
  TimeDictKind kind = TimeDictKind::Fourier;
  bool orthonormal_rows = false;
  std::vector<TimeAtomMeta> atom_meta;

  Eigen::Index atoms() const noexcept { return phi.rows(); }
  Eigen::Index length() const noexcept { return phi.cols(); }
};

/// Max-abs deviation of the Gram matrix from the identity.
double orthonormality_residual(const GraphDictionary& dict);
double orthonormality_residual(const TimeDictionary& dict);

/// Identity dictionaries; these reduce the decomposition to masked
/// low-rank factorization.
GraphDictionary identity_graph_dictionary(int n);
TimeDictionary identity_time_dictionary(int t);

/// Lowest-frequency Laplacian eigenvectors, m = max(1, ceil(fraction * n)).
GraphDictionary build_gft(const Graph& g, double fraction = 1.0);

/// Orthonormal Haar-like basis from recursive Fiedler bisection.
GraphDictionary build_graph_haar(const Graph& g);

/// Real orthonormal trigonometric basis spanning the DFT space, s = t.
TimeDictionary build_fourier(int t);

std::int64_t euler_totient(std::int64_t d);

/// Ramanujan sum C_d(g), evaluated as the complex exponential sum over
/// k in [1, d] coprime to d and rounded to the (integer) real part.
std::int64_t ramanujan_sum(std::int64_t d, std::int64_t g);

/// Stacked periodic blocks for g = 1..g_max. With `dedup` set, rows that
/// repeat an earlier row exactly are dropped (each divisor block is then
/// kept once).
TimeDictionary build_ramanujan(int t, int g_max, bool dedup = false);

/// Cox-de Boor recursion with half-open base intervals.
double bspline_value(int i, int p, double u, std::span<const double> knots);

/// Clamped uniform knot vector over [0, t-1].
std::vector<double> clamped_uniform_knots(int t, int n_basis, int degree);

/// Degree-`degree` B-splines sampled at 0..t-1, rows scaled to unit norm.
/// With `normalize` false the raw basis values are returned.
TimeDictionary build_spline(int t, int n_basis, int degree, bool normalize = true);

}  // namespace tgsd
