#include "tgsd/config.hpp"

#include "tgsd/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tgsd {

using io::json;

int PhiConfig::resolved_n_basis(int t) const {
  if (n_basis > 0) return n_basis;
  const int wanted = std::max(degree + 1, static_cast<int>(std::ceil(t / 10.0)));
  return std::min(wanted, t);
}

namespace {

[[noreturn]] void fail(Errc code, const std::string& path, const std::string& why) {
  throw Error(code, path + ": " + why);
}

const char* type_name(const json& j) { return j.type_name(); }

// Reads the members of one JSON object, rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(Errc::TypeError, path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void get(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(Errc::TypeError, key_path(key), std::string("expected a number, got ") + type_name(*v));
      out = v->get<double>();
    }
  }

  void get(const std::string& key, int& out) {
    if (const json* v = find(key)) out = as_int(*v, key_path(key));
  }

  void get(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      const int value = as_int(*v, key_path(key));
      if (value < 0) fail(Errc::RangeError, key_path(key), "must be >= 0");
      out = static_cast<std::uint64_t>(value);
    }
  }

  void get(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(Errc::TypeError, key_path(key), std::string("expected a boolean, got ") + type_name(*v));
      out = v->get<bool>();
    }
  }

  void get(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(Errc::TypeError, key_path(key), std::string("expected a string, got ") + type_name(*v));
      out = v->get<std::string>();
    }
  }

  template <typename T>
  void get(const std::string& key, std::vector<T>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(Errc::TypeError, key_path(key), std::string("expected an array, got ") + type_name(*v));
      std::vector<T> values;
      for (std::size_t i = 0; i < v->size(); ++i) {
        const auto item_path = key_path(key) + "[" + std::to_string(i) + "]";
        const json& item = (*v)[i];
        if constexpr (std::is_same_v<T, double>) {
          if (!item.is_number()) fail(Errc::TypeError, item_path, "expected a number");
          values.push_back(item.get<double>());
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          const int value = as_int(item, item_path);
          if (value < 0) fail(Errc::RangeError, item_path, "must be >= 0");
          values.push_back(static_cast<std::uint64_t>(value));
        } else {
          values.push_back(as_int(item, item_path));
        }
      }
      out = std::move(values);
    }
  }

  /// Nested object, or nullptr when absent.
  const json* object(const std::string& key) {
    const json* v = find(key);
    if (v && !v->is_object()) fail(Errc::TypeError, key_path(key), std::string("expected an object, got ") + type_name(*v));
    return v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(Errc::UnknownKey, key_path(it.key()), "unknown key");
  }

 private:
  static int as_int(const json& v, const std::string& path) {
    if (v.is_number_integer()) {
      const auto wide = v.get<std::int64_t>();
      if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max())
        fail(Errc::RangeError, path, "integer out of range");
      return static_cast<int>(wide);
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d == std::floor(d) && std::abs(d) < 2e9) return static_cast<int>(d);
    }
    fail(Errc::TypeError, path, std::string("expected an integer, got ") + type_name(v));
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_paths(const json& j, PathConfig& p) {
  Section s(j, "paths");
  s.get("graph", p.graph);
  s.get("signal", p.signal);
  s.get("mask", p.mask);
  s.get("truth", p.truth);
  s.get("labels", p.labels);
  s.get("output", p.output);
  s.finish();
}

void read_psi(const json& j, PsiConfig& p) {
  Section s(j, "psi");
  s.get("kind", p.kind);
  s.get("fraction", p.fraction);
  s.finish();
  if (p.kind != "gft" && p.kind != "haar" && p.kind != "identity")
    fail(Errc::RangeError, "psi.kind", "expected gft, haar or identity, got '" + p.kind + "'");
  if (!(p.fraction > 0.0 && p.fraction <= 1.0)) fail(Errc::RangeError, "psi.fraction", "must be in (0, 1]");
}

void read_phi(const json& j, PhiConfig& p) {
  Section s(j, "phi");
  s.get("kind", p.kind);
  s.get("g_max", p.g_max);
  s.get("dedup", p.dedup);
  s.get("n_basis", p.n_basis);
  s.get("degree", p.degree);
  s.finish();
  if (p.kind != "ramanujan" && p.kind != "fourier" && p.kind != "spline" && p.kind != "identity")
    fail(Errc::RangeError, "phi.kind", "expected ramanujan, fourier, spline or identity, got '" + p.kind + "'");
  if (p.g_max < 1) fail(Errc::RangeError, "phi.g_max", "must be >= 1");
  if (p.n_basis < 0) fail(Errc::RangeError, "phi.n_basis", "must be >= 0");
  if (p.degree < 0) fail(Errc::RangeError, "phi.degree", "must be >= 0");
  if (p.n_basis > 0 && p.n_basis < p.degree + 1) fail(Errc::RangeError, "phi.n_basis", "must be >= degree + 1");
}

void read_solver(const json& j, SolverConfig& c) {
  Section s(j, "solver");
  s.get("lambda1", c.lambda1);
  s.get("lambda2", c.lambda2);
  s.get("lambda3", c.lambda3);
  s.get("rho1", c.rho1);
  s.get("rho2", c.rho2);
  s.get("k", c.k);
  s.get("epsilon", c.epsilon);
  s.get("max_iter", c.max_iter);
  s.get("seed", c.seed);
  s.get("sparse_coefficients", c.sparse_coefficients);
  s.get("track_stationarity", c.track_stationarity);
  s.finish();
  c.validate();
}

void read_task(const json& j, TaskConfig& t) {
  Section s(j, "task");
  s.get("missing_fraction", t.missing_fraction);
  s.get("mask_kind", t.mask_kind);
  s.get("clusters", t.clusters);
  s.get("rank_grid", t.rank_grid);
  s.get("folds", t.folds);
  s.get("seeds", t.seeds);
  s.get("restarts", t.restarts);
  s.get("period_exponent", t.period_exponent);
  s.get("top_periods", t.top_periods);
  s.get("zero_threshold", t.zero_threshold);
  s.get("normalize_embedding", t.normalize_embedding);
  s.get("lambda_grid", t.lambda_grid);
  s.get("svd_ranks", t.svd_ranks);
  s.get("timing", t.timing);
  s.finish();
  if (!(t.missing_fraction >= 0.0 && t.missing_fraction < 1.0))
    fail(Errc::RangeError, "task.missing_fraction", "must be in [0, 1)");
  if (t.mask_kind != "random" && t.mask_kind != "column")
    fail(Errc::RangeError, "task.mask_kind", "expected random or column, got '" + t.mask_kind + "'");
  if (t.clusters < 1) fail(Errc::RangeError, "task.clusters", "must be >= 1");
  if (t.rank_grid.empty()) fail(Errc::RangeError, "task.rank_grid", "must not be empty");
  for (int k : t.rank_grid)
    if (k < 1) fail(Errc::RangeError, "task.rank_grid", "entries must be >= 1");
  if (t.folds < 2) fail(Errc::RangeError, "task.folds", "must be >= 2");
  if (t.seeds.empty()) fail(Errc::RangeError, "task.seeds", "must not be empty");
  if (t.restarts < 1) fail(Errc::RangeError, "task.restarts", "must be >= 1");
  if (!(t.period_exponent >= 0.0)) fail(Errc::RangeError, "task.period_exponent", "must be >= 0");
  if (t.top_periods < 1) fail(Errc::RangeError, "task.top_periods", "must be >= 1");
  if (!(t.zero_threshold >= 0.0)) fail(Errc::RangeError, "task.zero_threshold", "must be >= 0");
  if (t.lambda_grid.empty()) fail(Errc::RangeError, "task.lambda_grid", "must not be empty");
  for (double l : t.lambda_grid)
    if (!(l >= 0.0)) fail(Errc::RangeError, "task.lambda_grid", "entries must be >= 0");
  for (int r : t.svd_ranks)
    if (r < 1) fail(Errc::RangeError, "task.svd_ranks", "entries must be >= 1");
}

void read_synth(const json& j, SynthSpec& spec) {
  Section s(j, "synth");
  s.get("n_groups", spec.n_groups);
  s.get("nodes_per_group", spec.nodes_per_group);
  s.get("overlap_fraction", spec.overlap_fraction);
  s.get("p_in", spec.p_in);
  s.get("p_out", spec.p_out);
  s.get("periods", spec.periods);
  s.get("t", spec.t);
  s.get("amplitude_low", spec.amplitude_low);
  s.get("amplitude_high", spec.amplitude_high);
  s.get("snr", spec.snr);
  std::string unit = spec.snr_unit == SnrUnit::Decibel ? "db" : "linear";
  s.get("snr_unit", unit);
  std::string waveform = spec.waveform == Waveform::Ramanujan ? "ramanujan" : "sinusoid";
  s.get("waveform", waveform);
  s.get("seed", spec.seed);
  s.finish();
  if (unit == "linear") spec.snr_unit = SnrUnit::Linear;
  else if (unit == "db") spec.snr_unit = SnrUnit::Decibel;
  else fail(Errc::RangeError, "synth.snr_unit", "expected linear or db, got '" + unit + "'");
  if (waveform == "sinusoid") spec.waveform = Waveform::Sinusoid;
  else if (waveform == "ramanujan") spec.waveform = Waveform::Ramanujan;
  else fail(Errc::RangeError, "synth.waveform", "expected sinusoid or ramanujan, got '" + waveform + "'");
  spec.validate();
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig c;
  Section root(doc, "");
  root.get("subcommand", c.subcommand);
  if (const json* j = root.object("paths")) read_paths(*j, c.paths);
  if (const json* j = root.object("psi")) read_psi(*j, c.psi);
  if (const json* j = root.object("phi")) read_phi(*j, c.phi);
  if (const json* j = root.object("solver")) read_solver(*j, c.solver);
  if (const json* j = root.object("task")) read_task(*j, c.task);
  if (const json* j = root.object("synth")) read_synth(*j, c.synth);
  root.get("jobs", c.jobs);
  root.finish();
  return c;
}

RunConfig parse_config(const std::string& text, const json& overrides) {
  json doc = json::object();
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); });
  if (!blank) {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(Errc::TypeError, std::string("config: malformed JSON: ") + e.what());
    }
  }
  if (!doc.is_object()) throw Error(Errc::TypeError, "config: top level must be an object");
  if (!overrides.is_null()) doc.merge_patch(overrides);
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json synth{{"n_groups", c.synth.n_groups},
             {"nodes_per_group", c.synth.nodes_per_group},
             {"overlap_fraction", c.synth.overlap_fraction},
             {"p_in", c.synth.p_in},
             {"p_out", c.synth.p_out},
             {"periods", c.synth.periods},
             {"t", c.synth.t},
             {"amplitude_low", c.synth.amplitude_low},
             {"amplitude_high", c.synth.amplitude_high},
             {"snr", c.synth.snr},
             {"snr_unit", c.synth.snr_unit == SnrUnit::Decibel ? "db" : "linear"},
             {"waveform", c.synth.waveform == Waveform::Ramanujan ? "ramanujan" : "sinusoid"},
             {"seed", c.synth.seed}};
  json task{{"missing_fraction", c.task.missing_fraction},
            {"mask_kind", c.task.mask_kind},
            {"clusters", c.task.clusters},
            {"rank_grid", c.task.rank_grid},
            {"folds", c.task.folds},
            {"seeds", c.task.seeds},
            {"restarts", c.task.restarts},
            {"period_exponent", c.task.period_exponent},
            {"top_periods", c.task.top_periods},
            {"zero_threshold", c.task.zero_threshold},
            {"normalize_embedding", c.task.normalize_embedding},
            {"lambda_grid", c.task.lambda_grid},
            {"svd_ranks", c.task.svd_ranks},
            {"timing", c.task.timing}};
  json solver = io::to_json(c.solver);
  solver["track_stationarity"] = c.solver.track_stationarity;
  return json{{"subcommand", c.subcommand},
              {"paths",
               {{"graph", c.paths.graph},
                {"signal", c.paths.signal},
                {"mask", c.paths.mask},
                {"truth", c.paths.truth},
                {"labels", c.paths.labels},
                {"output", c.paths.output}}},
              {"psi", {{"kind", c.psi.kind}, {"fraction", c.psi.fraction}}},
              {"phi",
               {{"kind", c.phi.kind},
                {"g_max", c.phi.g_max},
                {"dedup", c.phi.dedup},
                {"n_basis", c.phi.n_basis},
                {"degree", c.phi.degree}}},
              {"solver", solver},
              {"task", task},
              {"synth", synth},
              {"jobs", c.jobs}};
}

}  // namespace tgsd
