#pragma once

#include <Eigen/Dense>

#include <istream>
#include <vector>

namespace tgsd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using NodeSet = std::vector<int>;

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

/// Weighted undirected graph over nodes 0..n-1, stored densely.
///
/// The adjacency is symmetric with a zero diagonal and positive weights.
/// Parallel edges are merged by summing their weights.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, const std::vector<Edge>& edges);

  int size() const noexcept { return static_cast<int>(adjacency_.rows()); }
  const Matrix& adjacency() const noexcept { return adjacency_; }
  double weight(int u, int v) const { return adjacency_(u, v); }

  /// Adds w to edge {u,v}. Self-loops are ignored.
  void add_edge(int u, int v, double w = 1.0);

  /// Undirected edges with u < v, in row-major order.
  std::vector<Edge> edges() const;

  /// Subgraph induced by `nodes`, relabelled 0..|nodes|-1 in the given order.
  Graph induced(const NodeSet& nodes) const;

 private:
  Matrix adjacency_;
};

struct LaplacianPair {
  Matrix L;  // F - H
  Matrix F;  // diagonal weighted degrees
};

/// Reads "u,v[,w]" rows. A leading "u,v,w" header is skipped.
Graph load_graph(std::istream& edge_csv);

LaplacianPair laplacian(const Graph& g);

/// Maximal connected sets, each sorted, ordered by smallest member.
std::vector<NodeSet> connected_components(const Graph& g);

/// Unit eigenvector of the induced Laplacian for its second smallest
/// eigenvalue. The first entry with magnitude above 1e-12 is made positive.
Vector fiedler_vector(const Graph& g, const NodeSet& nodes);

}  // namespace tgsd
