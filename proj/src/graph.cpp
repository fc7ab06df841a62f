#include "tgsd/graph.hpp"

#include "tgsd/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>
#include <string_view>

namespace tgsd {

Graph::Graph(int n) : adjacency_(Matrix::Zero(n, n)) {}

Graph::Graph(int n, const std::vector<Edge>& edges) : Graph(n) {
  for (const auto& e : edges) add_edge(e.u, e.v, e.w);
}

void Graph::add_edge(int u, int v, double w) {
  if (u < 0 || v < 0 || u >= size() || v >= size())
    throw Error(Errc::MalformedRow, "node index out of range: " + std::to_string(u) + "," + std::to_string(v));
  if (!(w >= 0.0)) throw Error(Errc::NegativeWeight, "weight " + std::to_string(w));
  if (u == v) return;
  adjacency_(u, v) += w;
  adjacency_(v, u) += w;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (int u = 0; u < size(); ++u)
    for (int v = u + 1; v < size(); ++v)
      if (adjacency_(u, v) != 0.0) out.push_back({u, v, adjacency_(u, v)});
  return out;
}

Graph Graph::induced(const NodeSet& nodes) const {
  const int m = static_cast<int>(nodes.size());
  Graph sub(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) sub.adjacency_(a, b) = adjacency_(nodes[a], nodes[b]);
  return sub;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view field, int line_no) {
  field = trim(field);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": bad field '" + std::string(field) + "'");
  return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

Graph load_graph(std::istream& edge_csv) {
  std::vector<Edge> edges;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(edge_csv, line)) {
    ++line_no;
    auto view = trim(line);
    if (view.empty()) continue;
    auto fields = split_commas(view);
    if (line_no == 1 && trim(fields[0]) == "u") continue;
    if (fields.size() < 2 || fields.size() > 3)
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": expected u,v[,w]");
    Edge e;
    e.u = parse_field<int>(fields[0], line_no);
    e.v = parse_field<int>(fields[1], line_no);
    if (fields.size() == 3) e.w = parse_field<double>(fields[2], line_no);
    if (e.u < 0 || e.v < 0) throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": negative node id");
    if (!std::isfinite(e.w)) throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": non-finite weight");
    if (e.w < 0.0) throw Error(Errc::NegativeWeight, "line " + std::to_string(line_no));
    max_index = std::max({max_index, e.u, e.v});
    edges.push_back(e);
  }
  return Graph(max_index + 1, edges);
}

LaplacianPair laplacian(const Graph& g) {
  const Matrix& H = g.adjacency();
  LaplacianPair out;
  out.F = Matrix::Zero(H.rows(), H.cols());
  out.F.diagonal() = H.rowwise().sum();
  out.L = out.F - H;
  return out;
}

std::vector<NodeSet> connected_components(const Graph& g) {
  const int n = g.size();
  std::vector<int> label(n, -1);
  std::vector<NodeSet> components;
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (label[root] >= 0) continue;
    const int id = static_cast<int>(components.size());
    components.emplace_back();
    label[root] = id;
    stack.push_back(root);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      components[id].push_back(u);
      for (int v = 0; v < n; ++v) {
        if (label[v] < 0 && g.weight(u, v) != 0.0) {
          label[v] = id;
          stack.push_back(v);
        }
      }
    }
    std::sort(components[id].begin(), components[id].end());
  }
  return components;
}

Vector fiedler_vector(const Graph& g, const NodeSet& nodes) {
  if (nodes.size() < 2) throw Error(Errc::TooSmall, "Fiedler vector needs at least 2 nodes");
  Graph sub = g.induced(nodes);
  if (connected_components(sub).size() != 1)
    throw Error(Errc::DisconnectedInput, "induced subgraph on " + std::to_string(nodes.size()) + " nodes is disconnected");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(laplacian(sub).L);
  Vector v = eig.eigenvectors().col(1);
  v.normalize();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace tgsd
