#pragma once

#include "tgsd/solver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace tgsd {

struct EvalReport {
  double rmse_observed = 0.0;
  std::optional<double> rmse_heldout;
  Eigen::Index nnz_y = 0;
  Eigen::Index nnz_w = 0;
  int iterations = 0;
  bool converged = false;
  double final_objective = 0.0;
  std::int64_t runtime_ms = 0;
  SolverConfig config;
};

struct PeriodReport {
  std::map<int, double> strengths;
  /// Descending strength, ties to the smaller period.
  std::vector<int> top_periods;
};

// --- masks and metrics ------------------------------------------------------

/// Exactly floor(fraction * n * t) zeros at uniformly random positions.
Matrix make_random_mask(int n, int t, double missing_fraction, std::uint64_t seed);

/// floor(fraction * t) whole columns zeroed.
Matrix make_column_mask(int n, int t, double missing_fraction, std::uint64_t seed);

/// sqrt(mean over mask of (A - B)^2). Throws EmptyMask.
double rmse(const Matrix& a, const Matrix& b, const Matrix& mask);

/// Entries with |m| > threshold.
Eigen::Index nnz(const Matrix& m, double zero_threshold = 0.0);

// --- imputation -------------------------------------------------------------

struct ImputeResult {
  Matrix filled;
  EvalReport report;
  DecompositionModel model;
};

/// Fits the decomposition and fills the unobserved entries from the model.
/// When `truth` is given the report carries the RMSE on the held-out entries.
ImputeResult impute(const MaskedSignal& signal, std::shared_ptr<const GraphDictionary> psi,
                    std::shared_ptr<const TimeDictionary> phi, const SolverConfig& config,
                    const Matrix* truth = nullptr, double zero_threshold = 0.0);

/// Fills unobserved entries with the mean of the observed ones.
Matrix mean_impute(const MaskedSignal& signal);

/// Rank-`rank` truncated SVD of the mean-imputed matrix, observed entries kept.
Matrix svd_impute(const MaskedSignal& signal, int rank);

/// Rank-`rank` truncated SVD reconstruction of a complete matrix.
Matrix truncated_svd(const Matrix& x, int rank);

// --- clustering -------------------------------------------------------------

/// Psi * Y with the model's final graph coefficients.
Matrix node_embedding(const DecompositionModel& model);

/// Scales every row to unit Euclidean norm (zero rows stay zero).
Matrix normalize_rows(const Matrix& m);

struct KMeansResult {
  std::vector<int> labels;
  Matrix centres;
  double wcss = 0.0;
};

/// Lloyd iterations from k-means++ seeds, best of `restarts` by WCSS.
KMeansResult kmeans(const Matrix& points, int clusters, std::uint64_t seed, int restarts = 10, int max_iter = 300);

/// Best agreement over label permutations (Hungarian matching).
double clustering_accuracy(const std::vector<int>& labels, const std::vector<int>& truth);

/// Minimum-cost perfect assignment on a square cost matrix; result[row] = col.
std::vector<int> hungarian(const Matrix& cost);

// --- periods ----------------------------------------------------------------

/// Strength of each period from A = Psi Y W: sum of squared column norms of
/// the atoms with that exact period, divided by period^exponent.
PeriodReport period_strengths(const DecompositionModel& model, double exponent = 2.0);

// --- rank estimation --------------------------------------------------------

struct RankEstimate {
  int chosen_k = 0;
  std::vector<int> candidates;
  /// mean_sse[c] is the fold-averaged held-out SSE for candidates[c].
  std::vector<double> mean_sse;
  /// sse[c][f] per candidate and fold.
  std::vector<std::vector<double>> sse;
};

/// Random partition of the observed entries (linear indices) into `folds`
/// groups of near-equal size.
std::vector<std::vector<Eigen::Index>> partition_observed(const MaskedSignal& signal, int folds, std::uint64_t seed);

/// Element-wise k-fold cross-validation over candidate ranks. Fold fits run
/// as independent jobs; `jobs` <= 0 uses the OpenMP default.
RankEstimate estimate_rank(const MaskedSignal& signal, std::shared_ptr<const GraphDictionary> psi,
                           std::shared_ptr<const TimeDictionary> phi, const SolverConfig& base,
                           const std::vector<int>& candidates, int folds, std::uint64_t seed, int jobs = 0);

}  // namespace tgsd
