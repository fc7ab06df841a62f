#pragma once

#include "tgsd/dictionary.hpp"
#include "tgsd/solver.hpp"
#include "tgsd/tasks.hpp"

#include "json.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace tgsd::io {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Numeric CSV; empty cells and "nan" read as NaN. Throws RaggedRows.
Matrix parse_matrix_csv(std::istream& in, const std::string& origin = "<stream>");
Matrix read_matrix_csv(const fs::path& path);

/// Shortest round-trip decimal per cell; NaN written as an empty cell.
std::string format_matrix_csv(const Matrix& m);
void write_matrix_csv(const fs::path& path, const Matrix& m);

Graph read_graph(const fs::path& path);
void write_graph(const fs::path& path, const Graph& g);

/// Signal CSV plus optional 0/1 mask CSV. Without a mask, NaN cells are the
/// missing entries. With a mask, a NaN under an observed entry is an error.
/// `expected_rows` (when set) is checked against the graph's node count.
MaskedSignal read_signal(const fs::path& signal_path, const std::optional<fs::path>& mask_path = std::nullopt,
                         std::optional<Eigen::Index> expected_rows = std::nullopt);
MaskedSignal parse_signal(std::istream& signal, std::istream* mask = nullptr,
                          std::optional<Eigen::Index> expected_rows = std::nullopt);

std::vector<int> read_labels(const fs::path& path);
void write_labels(const fs::path& path, const std::vector<int>& labels);

/// Pretty-printed JSON (2-space indent) with a trailing newline.
void write_json(const fs::path& path, const json& value);
json read_json(const fs::path& path);

/// Writes the text verbatim; errors carry the path.
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

json to_json(const SolverConfig& config);
json to_json(const EvalReport& report, bool include_runtime = false);
json to_json(const PeriodReport& report);
json to_json(const RankEstimate& estimate);
json model_summary(const DecompositionModel& model);

json dictionary_sidecar(const GraphDictionary& dict);
json dictionary_sidecar(const TimeDictionary& dict);

/// `<stem>.csv` holds the matrix, `<stem>.json` the kind, flag and atom_meta.
void write_dictionary(const fs::path& stem, const GraphDictionary& dict);
void write_dictionary(const fs::path& stem, const TimeDictionary& dict);
GraphDictionary read_graph_dictionary(const fs::path& stem);
TimeDictionary read_time_dictionary(const fs::path& stem);

/// Y.csv, W.csv (final coefficients) and model.json under `dir`.
void write_model(const fs::path& dir, const DecompositionModel& model);

}  // namespace tgsd::io
