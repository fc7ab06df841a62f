#include "tgsd/cli.hpp"

#include "tgsd/config.hpp"
#include "tgsd/error.hpp"
#include "tgsd/kernels.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cstdlib>
#include <exception>
#include <iostream>

namespace tgsd::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

std::string number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Runs body(i) for i in [0, count) as independent OpenMP jobs. The first
// failure by job index is rethrown once all jobs finish.
template <typename F>
void run_jobs(int count, int jobs, F&& body) {
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(count));
  const int threads = jobs > 0 ? jobs : kernels::max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

// --- inputs -----------------------------------------------------------------

struct Inputs {
  Graph graph;
  MaskedSignal signal;
  std::shared_ptr<const GraphDictionary> psi;
  std::shared_ptr<const TimeDictionary> phi;
};

fs::path require_path(const std::string& value, const char* key) {
  if (value.empty()) throw Error(Errc::RangeError, std::string("paths.") + key + ": required by this subcommand");
  return fs::path(value);
}

std::shared_ptr<const GraphDictionary> make_psi(const PsiConfig& cfg, const Graph& g) {
  if (cfg.kind == "gft") return std::make_shared<const GraphDictionary>(build_gft(g, cfg.fraction));
  if (cfg.fraction != 1.0) throw Error(Errc::RangeError, "psi.fraction: only the gft dictionary can be truncated");
  if (cfg.kind == "haar") return std::make_shared<const GraphDictionary>(build_graph_haar(g));
  return std::make_shared<const GraphDictionary>(identity_graph_dictionary(g.size()));
}

std::shared_ptr<const TimeDictionary> make_phi(const PhiConfig& cfg, int t) {
  if (cfg.kind == "ramanujan") return std::make_shared<const TimeDictionary>(build_ramanujan(t, cfg.g_max, cfg.dedup));
  if (cfg.kind == "fourier") return std::make_shared<const TimeDictionary>(build_fourier(t));
  if (cfg.kind == "spline")
    return std::make_shared<const TimeDictionary>(build_spline(t, cfg.resolved_n_basis(t), cfg.degree));
  return std::make_shared<const TimeDictionary>(identity_time_dictionary(t));
}

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  in.graph = io::read_graph(require_path(cfg.paths.graph, "graph"));
  std::optional<fs::path> mask;
  if (!cfg.paths.mask.empty()) mask = cfg.paths.mask;
  in.signal = io::read_signal(require_path(cfg.paths.signal, "signal"), mask, in.graph.size());
  in.psi = make_psi(cfg.psi, in.graph);
  in.phi = make_phi(cfg.phi, static_cast<int>(in.signal.cols()));
  return in;
}

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.paths.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_objective_csv(const fs::path& path, const DecompositionModel& m) {
  std::string text = "iteration,objective\n0," + number(m.initial_objective) + "\n";
  for (std::size_t i = 0; i < m.objective_trace.size(); ++i)
    text += std::to_string(i + 1) + "," + number(m.objective_trace[i]) + "\n";
  io::write_text(path, text);
}

// --- subcommands ------------------------------------------------------------

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  const auto dir = output_dir(cfg);
  const SynthGraph g = gen_graph(cfg.synth);
  const SynthSignal s = gen_signal(g, cfg.synth);
  io::write_graph(dir / "graph.csv", g.graph);
  io::write_matrix_csv(dir / "signal.csv", s.noisy);
  io::write_matrix_csv(dir / "clean.csv", s.clean);
  io::write_labels(dir / "labels.csv", g.labels);
  json members = json::array();
  for (const auto& m : g.memberships) members.push_back(m);
  io::write_json(dir / "memberships.json", members);
  out << "synth: " << g.graph.size() << " nodes, " << g.graph.edges().size() << " edges, t=" << cfg.synth.t << "\n";
  return 0;
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const auto dir = output_dir(cfg);
  ImputeResult r = impute(in.signal, in.psi, in.phi, cfg.solver, nullptr, cfg.task.zero_threshold);
  io::write_model(dir, r.model);
  io::write_matrix_csv(dir / "reconstruction.csv", reconstruct(r.model));
  write_objective_csv(dir / "objective.csv", r.model);
  io::write_dictionary(dir / "psi", *in.psi);
  io::write_dictionary(dir / "phi", *in.phi);
  io::write_json(dir / "report.json", io::to_json(r.report, cfg.task.timing));
  out << "decompose: rmse " << number(r.report.rmse_observed) << ", nnz " << r.report.nnz_y + r.report.nnz_w << ", "
      << r.report.iterations << " iterations\n";
  return 0;
}

Matrix make_mask(const TaskConfig& task, int n, int t, std::uint64_t seed) {
  return task.mask_kind == "column" ? make_column_mask(n, t, task.missing_fraction, seed)
                                    : make_random_mask(n, t, task.missing_fraction, seed);
}

double heldout_rmse(const Matrix& estimate, const Matrix& truth, const Matrix& omega) {
  return rmse(estimate, truth, Matrix::Ones(omega.rows(), omega.cols()) - omega);
}

int cmd_impute(const RunConfig& cfg, std::ostream& out, const char* name) {
  const Inputs in = load_inputs(cfg);
  const auto dir = output_dir(cfg);
  const Matrix& x = in.signal.x();

  // Signal with holes: fill them once.
  if (!in.signal.fully_observed() || cfg.task.missing_fraction == 0.0) {
    std::optional<Matrix> truth;
    if (!cfg.paths.truth.empty()) {
      truth = io::read_matrix_csv(cfg.paths.truth);
      for (Eigen::Index k = 0; k < truth->size(); ++k)
        if (std::isnan(truth->data()[k])) throw Error(Errc::MalformedRow, cfg.paths.truth + ": missing values");
    }
    ImputeResult r = impute(in.signal, in.psi, in.phi, cfg.solver, truth ? &*truth : nullptr, cfg.task.zero_threshold);
    io::write_matrix_csv(dir / "filled.csv", r.filled);
    json report{{"mode", "fill"}, {"tgsd", io::to_json(r.report, cfg.task.timing)}};
    if (truth && !in.signal.fully_observed()) {
      report["svd_rmse_heldout"] = heldout_rmse(svd_impute(in.signal, cfg.solver.k), *truth, in.signal.omega());
      report["mean_rmse_heldout"] = heldout_rmse(mean_impute(in.signal), *truth, in.signal.omega());
    }
    io::write_json(dir / "report.json", report);
    out << name << ": rmse(observed) " << number(r.report.rmse_observed) << "\n";
    return 0;
  }

  // Complete signal: hide entries under each mask seed and score the fill.
  const auto& seeds = cfg.task.seeds;
  const int runs = static_cast<int>(seeds.size());
  const int n = static_cast<int>(x.rows());
  const int t = static_cast<int>(x.cols());
  std::vector<ImputeResult> results(seeds.size());
  std::vector<double> svd(seeds.size()), mean(seeds.size());
  run_jobs(runs, cfg.jobs, [&](int i) {
    const auto s = static_cast<std::size_t>(i);
    const MaskedSignal masked(x, make_mask(cfg.task, n, t, seeds[s]));
    results[s] = impute(masked, in.psi, in.phi, cfg.solver, &x, cfg.task.zero_threshold);
    svd[s] = heldout_rmse(svd_impute(masked, cfg.solver.k), x, masked.omega());
    mean[s] = heldout_rmse(mean_impute(masked), x, masked.omega());
  });

  json per_seed = json::array();
  double avg_tgsd = 0.0, avg_svd = 0.0, avg_mean = 0.0;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    per_seed.push_back(json{{"seed", seeds[s]},
                            {"tgsd", io::to_json(results[s].report, cfg.task.timing)},
                            {"svd_rmse_heldout", svd[s]},
                            {"mean_rmse_heldout", mean[s]}});
    avg_tgsd += *results[s].report.rmse_heldout;
    avg_svd += svd[s];
    avg_mean += mean[s];
  }
  avg_tgsd /= runs;
  avg_svd /= runs;
  avg_mean /= runs;
  const json report{{"mode", "protocol"},
                    {"mask_kind", cfg.task.mask_kind},
                    {"missing_fraction", cfg.task.missing_fraction},
                    {"runs", per_seed},
                    {"average",
                     {{"tgsd_rmse_heldout", avg_tgsd}, {"svd_rmse_heldout", avg_svd}, {"mean_rmse_heldout", avg_mean}}}};
  io::write_json(dir / "report.json", report);
  io::write_matrix_csv(dir / "filled.csv", results.front().filled);
  io::write_matrix_csv(dir / "mask.csv", make_mask(cfg.task, n, t, seeds.front()));
  out << name << ": held-out rmse tgsd " << number(avg_tgsd) << ", svd " << number(avg_svd) << ", mean "
      << number(avg_mean) << " over " << runs << " masks\n";
  return 0;
}

int cmd_cluster(const RunConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const auto dir = output_dir(cfg);
  const DecompositionModel model = fit(in.signal, in.psi, in.phi, cfg.solver);
  Matrix embedding = node_embedding(model);
  if (cfg.task.normalize_embedding) embedding = normalize_rows(embedding);
  const KMeansResult km = kmeans(embedding, cfg.task.clusters, static_cast<std::uint64_t>(cfg.solver.seed),
                                 cfg.task.restarts);
  io::write_labels(dir / "assignments.csv", km.labels);
  io::write_matrix_csv(dir / "embedding.csv", embedding);
  json report{{"clusters", cfg.task.clusters}, {"wcss", km.wcss}, {"iterations", model.iterations}};
  if (!cfg.paths.labels.empty()) {
    const double acc = clustering_accuracy(km.labels, io::read_labels(cfg.paths.labels));
    report["accuracy"] = acc;
    out << "cluster: accuracy " << number(acc) << "\n";
  } else {
    out << "cluster: wcss " << number(km.wcss) << "\n";
  }
  report["config"] = io::to_json(cfg.solver);
  io::write_json(dir / "report.json", report);
  return 0;
}

int cmd_periods(const RunConfig& cfg, std::ostream& out) {
  if (cfg.phi.kind != "ramanujan")
    throw Error(Errc::WrongDictionaryKind, "phi.kind: period detection needs the ramanujan dictionary");
  const Inputs in = load_inputs(cfg);
  const auto dir = output_dir(cfg);
  const DecompositionModel model = fit(in.signal, in.psi, in.phi, cfg.solver);
  const PeriodReport report = period_strengths(model, cfg.task.period_exponent);
  io::write_json(dir / "periods.json", io::to_json(report));
  std::string csv = "period,strength\n";
  for (const auto& [p, s] : report.strengths) csv += std::to_string(p) + "," + number(s) + "\n";
  io::write_text(dir / "strengths.csv", csv);
  out << "periods:";
  const std::size_t shown = std::min<std::size_t>(report.top_periods.size(), static_cast<std::size_t>(cfg.task.top_periods));
  for (std::size_t i = 0; i < shown; ++i) out << " " << report.top_periods[i];
  out << "\n";
  return 0;
}

int cmd_rank(const RunConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const auto dir = output_dir(cfg);
  const RankEstimate est = estimate_rank(in.signal, in.psi, in.phi, cfg.solver, cfg.task.rank_grid, cfg.task.folds,
                                         static_cast<std::uint64_t>(cfg.solver.seed), cfg.jobs);
  io::write_json(dir / "rank.json", io::to_json(est));
  std::string csv = "k,mean_sse\n";
  for (std::size_t c = 0; c < est.candidates.size(); ++c)
    csv += std::to_string(est.candidates[c]) + "," + number(est.mean_sse[c]) + "\n";
  io::write_text(dir / "rank.csv", csv);
  out << "rank-est: k = " << est.chosen_k << "\n";
  return 0;
}

struct BenchPoint {
  std::string method;
  json params;
  double rmse = 0.0;
  Eigen::Index nnz = 0;
  bool pareto = false;
};

// Reconstruction error against model size over the lambda grid, plus the
// truncated SVD at each rank in svd_ranks. Dominated points stay in the
// table with pareto = false.
int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const auto dir = output_dir(cfg);
  const auto& grid = cfg.task.lambda_grid;
  const int g = static_cast<int>(grid.size());
  std::vector<BenchPoint> points(static_cast<std::size_t>(g * g));
  run_jobs(g * g, cfg.jobs, [&](int i) {
    SolverConfig sc = cfg.solver;
    sc.lambda1 = grid[static_cast<std::size_t>(i / g)];
    sc.lambda2 = grid[static_cast<std::size_t>(i % g)];
    const ImputeResult r = impute(in.signal, in.psi, in.phi, sc, nullptr, cfg.task.zero_threshold);
    auto& p = points[static_cast<std::size_t>(i)];
    p.method = "tgsd";
    p.params = json{{"lambda1", sc.lambda1}, {"lambda2", sc.lambda2}, {"k", sc.k}};
    p.rmse = r.report.rmse_observed;
    p.nnz = r.report.nnz_y + r.report.nnz_w;
  });

  const Matrix filled = mean_impute(in.signal);
  Eigen::BDCSVD<Matrix> svd(filled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (int rank : cfg.task.svd_ranks) {
    const Eigen::Index r = std::min<Eigen::Index>(rank, svd.singularValues().size());
    const Matrix left = svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal();
    const Matrix right = svd.matrixV().leftCols(r).transpose();
    BenchPoint p;
    p.method = "svd";
    p.params = json{{"rank", r}};
    p.rmse = rmse(left * right, in.signal.x(), in.signal.omega());
    p.nnz = nnz(left, cfg.task.zero_threshold) + nnz(right, cfg.task.zero_threshold);
    points.push_back(std::move(p));
  }

  // Pareto front within each method.
  for (auto& p : points) {
    p.pareto = true;
    for (const auto& q : points) {
      if (&q == &p || q.method != p.method) continue;
      const bool no_worse = q.rmse <= p.rmse && q.nnz <= p.nnz;
      const bool better = q.rmse < p.rmse || q.nnz < p.nnz;
      if (no_worse && better) {
        p.pareto = false;
        break;
      }
    }
  }

  std::string csv = "method,params,nnz,rmse,pareto\n";
  json table = json::array();
  for (const auto& p : points) {
    std::string params;
    for (auto it = p.params.begin(); it != p.params.end(); ++it) {
      if (!params.empty()) params += ";";
      params += it.key() + "=" + (it->is_number_float() ? number(it->get<double>()) : it->dump());
    }
    csv += p.method + "," + params + "," + std::to_string(p.nnz) + "," + number(p.rmse) + "," +
           (p.pareto ? "1" : "0") + "\n";
    table.push_back(json{{"method", p.method}, {"params", p.params}, {"nnz", p.nnz}, {"rmse", p.rmse},
                         {"pareto", p.pareto}});
  }
  io::write_text(dir / "pareto.csv", csv);
  io::write_json(dir / "bench.json", json{{"points", table}, {"config", io::to_json(cfg.solver)}});
  out << "bench: " << points.size() << " points\n";
  return 0;
}

// --- argument handling --------------------------------------------------------

json subcommand_defaults(const std::string& name) {
  if (name == "interpolate") return json{{"phi", {{"kind", "spline"}}}, {"task", {{"mask_kind", "column"}}}};
  return json::object();
}

int jobs_from_env() {
  const char* env = std::getenv("TGSD_JOBS");
  if (env == nullptr || *env == '\0') return 0;
  int value = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || value < 0)
    throw Error(Errc::RangeError, "TGSD_JOBS: expected a nonnegative integer, got '" + std::string(s) + "'");
  return value;
}

class Overlay {
 public:
  template <typename T>
  CLI::Option* option(CLI::App* app, const std::string& flags, const std::string& pointer, const std::string& help) {
    auto* opt = app->add_option_function<T>(
        flags, [this, pointer](const T& v) { doc_[json::json_pointer(pointer)] = v; }, help);
    if constexpr (CLI::detail::is_mutable_container<T>::value) opt->delimiter(',');
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& flags, const std::string& pointer, bool value,
                    const std::string& help) {
    return app->add_flag_function(
        flags, [this, pointer, value](std::int64_t) { doc_[json::json_pointer(pointer)] = value; }, help);
  }

  const json& doc() const { return doc_; }

 private:
  json doc_ = json::object();
};

void add_options(CLI::App& app, Overlay& o, std::string& config_path) {
  app.add_option("-c,--config", config_path, "JSON config file")->check(CLI::ExistingFile);

  const char* paths = "Paths";
  o.option<std::string>(&app, "--graph", "/paths/graph", "edge list CSV (u,v[,w])")->group(paths);
  o.option<std::string>(&app, "--signal", "/paths/signal", "node x time CSV; empty cells are missing")->group(paths);
  o.option<std::string>(&app, "--mask", "/paths/mask", "0/1 observation mask CSV")->group(paths);
  o.option<std::string>(&app, "--truth", "/paths/truth", "complete signal for held-out scoring")->group(paths);
  o.option<std::string>(&app, "--labels", "/paths/labels", "ground-truth node labels")->group(paths);
  o.option<std::string>(&app, "-o,--output", "/paths/output", "output directory")->group(paths);

  const char* dict = "Dictionaries";
  o.option<std::string>(&app, "--psi", "/psi/kind", "graph dictionary: gft, haar, identity")->group(dict);
  o.option<double>(&app, "--psi-fraction", "/psi/fraction", "fraction of lowest-frequency GFT atoms")->group(dict);
  o.option<std::string>(&app, "--phi", "/phi/kind", "time dictionary: ramanujan, fourier, spline, identity")->group(dict);
  o.option<int>(&app, "--g-max", "/phi/g_max", "largest Ramanujan period")->group(dict);
  o.flag(&app, "--dedup", "/phi/dedup", true, "drop repeated Ramanujan atoms")->group(dict);
  o.option<int>(&app, "--n-basis", "/phi/n_basis", "spline atoms (0 = automatic)")->group(dict);
  o.option<int>(&app, "--degree", "/phi/degree", "spline degree")->group(dict);

  const char* solver = "Solver";
  o.option<double>(&app, "--lambda1", "/solver/lambda1", "sparsity weight on Y")->group(solver);
  o.option<double>(&app, "--lambda2", "/solver/lambda2", "sparsity weight on W")->group(solver);
  o.option<double>(&app, "--lambda3", "/solver/lambda3", "weight of the observed-entry fit")->group(solver);
  o.option<double>(&app, "--rho1", "/solver/rho1", "penalty for Y")->group(solver);
  o.option<double>(&app, "--rho2", "/solver/rho2", "penalty for W")->group(solver);
  o.option<int>(&app, "-k,--rank", "/solver/k", "inner rank")->group(solver);
  o.option<double>(&app, "--epsilon", "/solver/epsilon", "stop when the objective changes less than this")->group(solver);
  o.option<int>(&app, "--max-iter", "/solver/max_iter", "iteration cap")->group(solver);
  o.option<int>(&app, "--seed", "/solver/seed", "seed for folds and k-means")->group(solver);
  o.flag(&app, "--dense-coefficients", "/solver/sparse_coefficients", false, "report Y, W instead of Z, V")
      ->group(solver);

  const char* task = "Task";
  o.option<double>(&app, "--missing-fraction", "/task/missing_fraction", "fraction hidden per mask")->group(task);
  o.option<std::string>(&app, "--mask-kind", "/task/mask_kind", "random or column")->group(task);
  o.option<std::vector<int>>(&app, "--mask-seeds", "/task/seeds", "mask seeds")->group(task);
  o.option<int>(&app, "--clusters", "/task/clusters", "k-means K")->group(task);
  o.option<int>(&app, "--restarts", "/task/restarts", "k-means restarts")->group(task);
  o.flag(&app, "--raw-embedding", "/task/normalize_embedding", false, "skip row normalization")->group(task);
  o.option<std::vector<int>>(&app, "--rank-grid", "/task/rank_grid", "candidate ranks")->group(task);
  o.option<int>(&app, "--folds", "/task/folds", "cross-validation folds")->group(task);
  o.option<double>(&app, "--period-exponent", "/task/period_exponent", "period strength penalty exponent")->group(task);
  o.option<int>(&app, "--top", "/task/top_periods", "periods to print")->group(task);
  o.option<double>(&app, "--zero-threshold", "/task/zero_threshold", "nnz threshold")->group(task);
  o.option<std::vector<double>>(&app, "--lambda-grid", "/task/lambda_grid", "bench lambda values")->group(task);
  o.option<std::vector<int>>(&app, "--svd-ranks", "/task/svd_ranks", "bench SVD ranks")->group(task);
  o.flag(&app, "--timing", "/task/timing", true, "include runtime_ms in reports")->group(task);

  const char* synth = "Synthetic";
  o.option<int>(&app, "--groups", "/synth/n_groups", "planted groups")->group(synth);
  o.option<int>(&app, "--group-size", "/synth/nodes_per_group", "nodes per group")->group(synth);
  o.option<double>(&app, "--overlap", "/synth/overlap_fraction", "fraction of nodes in two groups")->group(synth);
  o.option<double>(&app, "--p-in", "/synth/p_in", "within-group edge probability")->group(synth);
  o.option<double>(&app, "--p-out", "/synth/p_out", "cross-group edge probability")->group(synth);
  o.option<std::vector<int>>(&app, "--periods", "/synth/periods", "planted periods")->group(synth);
  o.option<int>(&app, "--length", "/synth/t", "time steps")->group(synth);
  o.option<double>(&app, "--snr", "/synth/snr", "signal-to-noise ratio")->group(synth);
  o.option<std::string>(&app, "--snr-unit", "/synth/snr_unit", "linear or db")->group(synth);
  o.option<std::string>(&app, "--waveform", "/synth/waveform", "sinusoid or ramanujan")->group(synth);
  o.option<int>(&app, "--synth-seed", "/synth/seed", "generator seed")->group(synth);

  o.option<int>(&app, "-j,--jobs", "/jobs", "parallel jobs (default $TGSD_JOBS)");
}

RunConfig resolve(const std::string& subcommand, const std::string& config_path, const json& overlay) {
  json doc = subcommand_defaults(subcommand);
  if (!config_path.empty()) {
    const std::string text = io::read_text(config_path);
    json file = json::object();
    try {
      if (text.find_first_not_of(" \t\r\n") != std::string::npos) file = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(Errc::TypeError, config_path + ": malformed JSON: " + e.what());
    }
    if (!file.is_object()) throw Error(Errc::TypeError, config_path + ": top level must be an object");
    doc.merge_patch(file);
  }
  doc.merge_patch(overlay);
  if (!doc.contains("jobs")) doc["jobs"] = jobs_from_env();
  doc["subcommand"] = subcommand;
  return parse_config(doc);
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.jobs > 0) kernels::set_threads(cfg.jobs);
  const auto& s = cfg.subcommand;
  if (s == "synth") return cmd_synth(cfg, out);
  if (s == "decompose") return cmd_decompose(cfg, out);
  if (s == "impute") return cmd_impute(cfg, out, "impute");
  if (s == "interpolate") return cmd_impute(cfg, out, "interpolate");
  if (s == "cluster") return cmd_cluster(cfg, out);
  if (s == "periods") return cmd_periods(cfg, out);
  if (s == "rank-est") return cmd_rank(cfg, out);
  return cmd_bench(cfg, out);
}

std::string first_line(const std::string& s) {
  const auto pos = s.find('\n');
  return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Temporal graph signal decomposition", "tgsd");
  app.require_subcommand(1);
  app.fallthrough();
  Overlay overlay;
  std::string config_path;
  add_options(app, overlay, config_path);
  const std::pair<const char*, const char*> commands[] = {
      {"decompose", "fit the model and write coefficients and reconstruction"},
      {"impute", "fill missing entries, or score random masks on a complete signal"},
      {"interpolate", "impute with whole time steps missing (spline time dictionary)"},
      {"cluster", "k-means on the node embedding"},
      {"periods", "rank periods from the Ramanujan coefficients"},
      {"rank-est", "choose the inner rank by element-wise cross-validation"},
      {"synth", "generate the planted-group graph and signal"},
      {"bench", "reconstruction error against model size over a lambda grid"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "tgsd: " << first_line(e.what()) << "\n";
    return static_cast<int>(ErrorClass::Config);
  }

  try {
    const auto* sub = app.get_subcommands().front();
    return dispatch(resolve(sub->get_name(), config_path, overlay.doc()), out);
  } catch (const Error& e) {
    err << "tgsd: " << first_line(e.what()) << "\n";
    return static_cast<int>(classify(e.code()));
  } catch (const std::exception& e) {
    err << "tgsd: internal error: " << first_line(e.what()) << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace tgsd::cli
