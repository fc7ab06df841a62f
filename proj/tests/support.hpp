#pragma once

// Generators and small helpers shared by the unit tests. Everything is
// driven by an explicit mt19937_64 so failures replay from the seed.

#include "tgsd/error.hpp"
#include "tgsd/graph.hpp"

#include "doctest.h"

#include <filesystem>
#include <functional>
#include <random>
#include <string>

namespace tgsd::testing {

using Rng = std::mt19937_64;

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = normal(rng);
  return m;
}

/// G G^T with G p x r; rank-deficient when r < p.
inline Matrix random_psd(Eigen::Index p, Rng& rng, Eigen::Index rank = -1) {
  const Eigen::Index r = rank < 0 ? p : rank;
  const Matrix g = random_matrix(p, r, rng);
  return g * g.transpose();
}

inline Matrix random_mask(Eigen::Index rows, Eigen::Index cols, double keep, Rng& rng) {
  std::bernoulli_distribution coin(keep);
  Matrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = coin(rng) ? 1.0 : 0.0;
  return m;
}

inline int uniform_int(int lo, int hi, Rng& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Erdos-Renyi graph with random positive weights. With `connected` set a
/// random spanning path is added first.
inline Graph random_graph(int n, double p, Rng& rng, bool connected = true) {
  Graph g(n);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::bernoulli_distribution edge(p);
  if (connected && n > 1) {
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 1; i < n; ++i) g.add_edge(order[static_cast<std::size_t>(i - 1)], order[static_cast<std::size_t>(i)], weight(rng));
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (edge(rng)) g.add_edge(u, v, weight(rng));
  return g;
}

inline Graph path_graph(int n) {
  Graph g(n);
  for (int i = 1; i < n; ++i) g.add_edge(i - 1, i);
  return g;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Error code thrown by `f`; fails the test when nothing is thrown.
inline Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::Io;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("tgsd_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace tgsd::testing
