#include "tgsd/io.hpp"

#include "tgsd/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tgsd::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, const std::string& origin, std::size_t line, std::size_t col) {
  cell = trim(cell);
  if (cell.empty() || cell == "nan" || cell == "NaN" || cell == "NA") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw Error(Errc::MalformedRow, origin + ":" + std::to_string(line) + ": column " + std::to_string(col + 1) +
                                        " is not a number: '" + std::string(cell) + "'");
  return value;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(Errc::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  return out;
}

void append_number(std::string& out, double v) {
  if (std::isnan(v)) return;
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace

Matrix parse_matrix_csv(std::istream& in, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view view(line);
    std::size_t start = 0;
    while (true) {
      const auto pos = view.find(',', start);
      const auto cell = view.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
      row.push_back(parse_cell(cell, origin, line_no, row.size()));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(Errc::RaggedRows, origin + ":" + std::to_string(line_no) + ": expected " +
                                        std::to_string(rows.front().size()) + " columns, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

Matrix read_matrix_csv(const fs::path& path) {
  auto in = open_in(path);
  return parse_matrix_csv(in, path.string());
}

std::string format_matrix_csv(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 12);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      append_number(out, m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

void write_matrix_csv(const fs::path& path, const Matrix& m) { write_text(path, format_matrix_csv(m)); }

Graph read_graph(const fs::path& path) {
  auto in = open_in(path);
  return load_graph(in);
}

void write_graph(const fs::path& path, const Graph& g) {
  std::string out = "u,v,w\n";
  for (const auto& e : g.edges()) {
    out += std::to_string(e.u) + "," + std::to_string(e.v) + ",";
    append_number(out, e.w);
    out.push_back('\n');
  }
  write_text(path, out);
}

MaskedSignal parse_signal(std::istream& signal, std::istream* mask, std::optional<Eigen::Index> expected_rows) {
  Matrix x = parse_matrix_csv(signal, "signal");
  if (expected_rows && x.rows() != *expected_rows)
    throw Error(Errc::ShapeMismatch, "signal has " + std::to_string(x.rows()) + " rows but the graph has " +
                                         std::to_string(*expected_rows) + " nodes");
  Matrix omega;
  if (mask != nullptr) {
    omega = parse_matrix_csv(*mask, "mask");
    if (omega.rows() != x.rows() || omega.cols() != x.cols())
      throw Error(Errc::MaskShapeMismatch, "mask is " + std::to_string(omega.rows()) + "x" +
                                               std::to_string(omega.cols()) + ", signal is " +
                                               std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      if (std::isnan(x.data()[k]) && omega.data()[k] != 0.0)
        throw Error(Errc::NaNUnderObservedMask, "missing signal value at an observed mask entry (linear index " +
                                                    std::to_string(k) + ")");
      if (std::isnan(omega.data()[k])) throw Error(Errc::MalformedRow, "mask contains an empty cell");
    }
  } else {
    omega = Matrix::Ones(x.rows(), x.cols());
    for (Eigen::Index k = 0; k < x.size(); ++k)
      if (std::isnan(x.data()[k])) omega.data()[k] = 0.0;
  }
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (std::isnan(x.data()[k])) x.data()[k] = 0.0;
  return MaskedSignal(std::move(x), std::move(omega));
}

MaskedSignal read_signal(const fs::path& signal_path, const std::optional<fs::path>& mask_path,
                         std::optional<Eigen::Index> expected_rows) {
  auto in = open_in(signal_path);
  if (mask_path) {
    auto mask = open_in(*mask_path);
    return parse_signal(in, &mask, expected_rows);
  }
  return parse_signal(in, nullptr, expected_rows);
}

std::vector<int> read_labels(const fs::path& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() != 1) throw Error(Errc::MalformedRow, path.string() + ": labels must be a single column");
  std::vector<int> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double v = m(i, 0);
    if (!(v == std::floor(v))) throw Error(Errc::MalformedRow, path.string() + ": non-integer label");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  std::string out;
  for (int l : labels) out += std::to_string(l) + "\n";
  write_text(path, out);
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const fs::path& path, const json& value) { write_text(path, value.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::TypeError, path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

json to_json(const SolverConfig& c) {
  return json{{"lambda1", c.lambda1}, {"lambda2", c.lambda2}, {"lambda3", c.lambda3}, {"rho1", c.rho1},
              {"rho2", c.rho2},       {"k", c.k},             {"epsilon", c.epsilon}, {"max_iter", c.max_iter},
              {"seed", c.seed},       {"sparse_coefficients", c.sparse_coefficients}};
}

json to_json(const EvalReport& r, bool include_runtime) {
  json j{{"rmse_observed", r.rmse_observed}};
  j["rmse_heldout"] = r.rmse_heldout ? json(*r.rmse_heldout) : json(nullptr);
  j["nnz_y"] = r.nnz_y;
  j["nnz_w"] = r.nnz_w;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["final_objective"] = r.final_objective;
  if (include_runtime) j["runtime_ms"] = r.runtime_ms;
  j["config"] = to_json(r.config);
  return j;
}

json to_json(const PeriodReport& r) {
  json strengths = json::object();
  for (const auto& [period, s] : r.strengths) strengths[std::to_string(period)] = s;
  return json{{"strengths", strengths}, {"top_periods", r.top_periods}};
}

json to_json(const RankEstimate& e) {
  return json{{"chosen_k", e.chosen_k}, {"candidates", e.candidates}, {"mean_sse", e.mean_sse}, {"sse", e.sse}};
}

json model_summary(const DecompositionModel& m) {
  return json{{"graph_dictionary", to_string(m.psi->kind)},
              {"graph_atoms", m.psi->atoms()},
              {"time_dictionary", to_string(m.phi->kind)},
              {"time_atoms", m.phi->atoms()},
              {"iterations", m.iterations},
              {"converged", m.converged},
              {"initial_objective", m.initial_objective},
              {"objective_trace", m.objective_trace},
              {"config", to_json(m.config)}};
}

json dictionary_sidecar(const GraphDictionary& d) {
  json meta = json::array();
  for (const auto& a : d.atom_meta) {
    if (d.kind == GraphDictKind::GFT) meta.push_back(json{{"eigenvalue", a.eigenvalue}});
    else meta.push_back(json{{"depth", a.depth}});
  }
  return json{{"kind", to_string(d.kind)},
              {"rows", d.psi.rows()},
              {"cols", d.psi.cols()},
              {"orthonormal", d.orthonormal_columns},
              {"atom_meta", meta}};
}

json dictionary_sidecar(const TimeDictionary& d) {
  json meta = json::array();
  for (const auto& a : d.atom_meta) {
    switch (d.kind) {
      case TimeDictKind::Fourier:
        meta.push_back(json{{"frequency", a.frequency}, {"sine", a.is_sine}});
        break;
      case TimeDictKind::Ramanujan:
        meta.push_back(json{{"period", a.period}, {"divisor", a.divisor}, {"column", a.column}});
        break;
      case TimeDictKind::Spline:
        meta.push_back(json{{"span_begin", a.span_begin}, {"span_end", a.span_end}});
        break;
    }
  }
  return json{{"kind", to_string(d.kind)},
              {"rows", d.phi.rows()},
              {"cols", d.phi.cols()},
              {"orthonormal", d.orthonormal_rows},
              {"atom_meta", meta}};
}

namespace {

fs::path with_ext(const fs::path& stem, const char* ext) {
  fs::path p = stem;
  p += ext;
  return p;
}

template <typename T>
T get_field(const json& j, const char* key, const fs::path& origin) {
  if (!j.contains(key)) throw Error(Errc::TypeError, origin.string() + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::TypeError, origin.string() + ": '" + key + "': " + e.what());
  }
}

}  // namespace

void write_dictionary(const fs::path& stem, const GraphDictionary& d) {
  write_matrix_csv(with_ext(stem, ".csv"), d.psi);
  write_json(with_ext(stem, ".json"), dictionary_sidecar(d));
}

void write_dictionary(const fs::path& stem, const TimeDictionary& d) {
  write_matrix_csv(with_ext(stem, ".csv"), d.phi);
  write_json(with_ext(stem, ".json"), dictionary_sidecar(d));
}

GraphDictionary read_graph_dictionary(const fs::path& stem) {
  const auto side_path = with_ext(stem, ".json");
  const json side = read_json(side_path);
  GraphDictionary d;
  d.psi = read_matrix_csv(with_ext(stem, ".csv"));
  const auto kind = get_field<std::string>(side, "kind", side_path);
  if (kind == "gft") d.kind = GraphDictKind::GFT;
  else if (kind == "haar") d.kind = GraphDictKind::GraphHaar;
  else throw Error(Errc::TypeError, side_path.string() + ": unknown graph dictionary kind '" + kind + "'");
  d.orthonormal_columns = get_field<bool>(side, "orthonormal", side_path);
  for (const auto& a : side.value("atom_meta", json::array())) {
    GraphAtomMeta meta;
    meta.eigenvalue = a.value("eigenvalue", 0.0);
    meta.depth = a.value("depth", 0);
    d.atom_meta.push_back(meta);
  }
  if (static_cast<Eigen::Index>(d.atom_meta.size()) != d.psi.cols())
    throw Error(Errc::ShapeMismatch, side_path.string() + ": atom_meta length differs from column count");
  return d;
}

TimeDictionary read_time_dictionary(const fs::path& stem) {
  const auto side_path = with_ext(stem, ".json");
  const json side = read_json(side_path);
  TimeDictionary d;
  d.phi = read_matrix_csv(with_ext(stem, ".csv"));
  const auto kind = get_field<std::string>(side, "kind", side_path);
  if (kind == "fourier") d.kind = TimeDictKind::Fourier;
  else if (kind == "ramanujan") d.kind = TimeDictKind::Ramanujan;
  else if (kind == "spline") d.kind = TimeDictKind::Spline;
  else throw Error(Errc::TypeError, side_path.string() + ": unknown time dictionary kind '" + kind + "'");
  d.orthonormal_rows = get_field<bool>(side, "orthonormal", side_path);
  for (const auto& a : side.value("atom_meta", json::array())) {
    TimeAtomMeta meta;
    meta.frequency = a.value("frequency", 0);
    meta.is_sine = a.value("sine", false);
    meta.period = a.value("period", 0);
    meta.divisor = a.value("divisor", 0);
    meta.column = a.value("column", 0);
    meta.span_begin = a.value("span_begin", 0.0);
    meta.span_end = a.value("span_end", 0.0);
    d.atom_meta.push_back(meta);
  }
  if (static_cast<Eigen::Index>(d.atom_meta.size()) != d.phi.rows())
    throw Error(Errc::ShapeMismatch, side_path.string() + ": atom_meta length differs from row count");
  return d;
}

void write_model(const fs::path& dir, const DecompositionModel& model) {
  write_matrix_csv(dir / "Y.csv", model.graph_coefficients());
  write_matrix_csv(dir / "W.csv", model.time_coefficients());
  write_json(dir / "model.json", model_summary(model));
}

}  // namespace tgsd::io
