#pragma once

#include "tgsd/io.hpp"
#include "tgsd/synth.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tgsd {

struct PathConfig {
  std::string graph;
  std::string signal;
  std::string mask;
  std::string truth;
  std::string labels;
  std::string output = "out";
};

struct PsiConfig {
  std::string kind = "gft";  // gft | haar | identity
  double fraction = 1.0;
};

struct PhiConfig {
  std::string kind = "ramanujan";  // ramanujan | fourier | spline | identity
  int g_max = 10;
  bool dedup = false;
  /// 0 picks max(degree + 1, ceil(t / 10)) capped at t.
  int n_basis = 0;
  int degree = 3;

  int resolved_n_basis(int t) const;
};

struct TaskConfig {
  double missing_fraction = 0.25;
  std::string mask_kind = "random";  // random | column
  int clusters = 7;
  std::vector<int> rank_grid{3, 5, 7, 9, 11};
  int folds = 5;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  int restarts = 10;
  double period_exponent = 2.0;
  int top_periods = 3;
  double zero_threshold = 0.0;
  bool normalize_embedding = true;
  std::vector<double> lambda_grid{0.01, 0.1, 1.0, 10.0};
  std::vector<int> svd_ranks{1, 2, 3, 5, 7, 9, 11};
  bool timing = false;
};

struct RunConfig {
  std::string subcommand;
  PathConfig paths;
  PsiConfig psi;
  PhiConfig phi;
  SolverConfig solver;
  TaskConfig task;
  SynthSpec synth;
  /// <= 0 uses the OpenMP default.
  int jobs = 0;
};

/// Parses `text` (a JSON object, possibly empty), merges `overrides` on top
/// and fills defaults. Unknown keys raise UnknownKey, wrong JSON types
/// TypeError, out-of-range values RangeError; messages start with the key
/// path, e.g. "solver.k".
RunConfig parse_config(const std::string& text, const io::json& overrides = io::json::object());
RunConfig parse_config(const io::json& doc);

/// Full config as JSON, in the same shape that parse_config reads.
io::json to_json(const RunConfig& config);

}  // namespace tgsd
