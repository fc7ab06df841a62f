#include "tgsd/tasks.hpp"

#include "tgsd/error.hpp"
#include "tgsd/kernels.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace tgsd {

namespace {

void check_fraction(double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0))
    throw Error(Errc::RangeError, "missing fraction must be in [0,1), got " + std::to_string(fraction));
}

}  // namespace

Matrix make_random_mask(int n, int t, double missing_fraction, std::uint64_t seed) {
  check_fraction(missing_fraction);
  const auto total = static_cast<Eigen::Index>(n) * t;
  const auto holes = static_cast<Eigen::Index>(std::floor(missing_fraction * static_cast<double>(total)));
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(total));
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  // partial Fisher-Yates: the first `holes` slots are a uniform sample
  for (Eigen::Index i = 0; i < holes; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, total - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  Matrix mask = Matrix::Ones(n, t);
  for (Eigen::Index i = 0; i < holes; ++i) mask.data()[idx[static_cast<std::size_t>(i)]] = 0.0;
  return mask;
}

Matrix make_column_mask(int n, int t, double missing_fraction, std::uint64_t seed) {
  check_fraction(missing_fraction);
  const int holes = static_cast<int>(std::floor(missing_fraction * t));
  std::vector<int> cols(static_cast<std::size_t>(t));
  std::iota(cols.begin(), cols.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < holes; ++i) {
    std::uniform_int_distribution<int> pick(i, t - 1);
    std::swap(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(pick(rng))]);
  }
  Matrix mask = Matrix::Ones(n, t);
  for (int i = 0; i < holes; ++i) mask.col(cols[static_cast<std::size_t>(i)]).setZero();
  return mask;
}

double rmse(const Matrix& a, const Matrix& b, const Matrix& mask) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != mask.rows() || a.cols() != mask.cols())
    throw Error(Errc::ShapeMismatch, "rmse operands differ in shape");
  const auto count = (mask.array() != 0.0).count();
  if (count == 0) throw Error(Errc::EmptyMask, "rmse over an empty mask");
  return std::sqrt(kernels::masked_squared_distance(a, b, mask) / static_cast<double>(count));
}

Eigen::Index nnz(const Matrix& m, double zero_threshold) {
  if (!(zero_threshold >= 0.0)) throw Error(Errc::RangeError, "zero threshold must be >= 0");
  return (m.array().abs() > zero_threshold).count();
}

ImputeResult impute(const MaskedSignal& signal, std::shared_ptr<const GraphDictionary> psi,
                    std::shared_ptr<const TimeDictionary> phi, const SolverConfig& config, const Matrix* truth,
                    double zero_threshold) {
  const auto start = std::chrono::steady_clock::now();
  ImputeResult out{Matrix{}, EvalReport{}, fit(signal, std::move(psi), std::move(phi), config)};
  const auto stop = std::chrono::steady_clock::now();

  const Matrix recon = reconstruct(out.model);
  const Matrix& omega = signal.omega();
  out.filled = signal.x();
  for (Eigen::Index k = 0; k < omega.size(); ++k)
    if (omega.data()[k] == 0.0) out.filled.data()[k] = recon.data()[k];

  EvalReport& r = out.report;
  r.rmse_observed = rmse(recon, signal.x(), omega);
  if (truth != nullptr && !signal.fully_observed()) {
    if (truth->rows() != signal.rows() || truth->cols() != signal.cols())
      throw Error(Errc::ShapeMismatch, "ground truth shape differs from signal");
    const Matrix heldout = Matrix::Ones(omega.rows(), omega.cols()) - omega;
    r.rmse_heldout = rmse(recon, *truth, heldout);
  }
  r.nnz_y = nnz(out.model.graph_coefficients(), zero_threshold);
  r.nnz_w = nnz(out.model.time_coefficients(), zero_threshold);
  r.iterations = out.model.iterations;
  r.converged = out.model.converged;
  r.final_objective = out.model.objective_trace.empty() ? out.model.initial_objective : out.model.objective_trace.back();
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();
  r.config = config;
  return out;
}

Matrix mean_impute(const MaskedSignal& signal) {
  if (signal.observed_count() == 0) throw Error(Errc::EmptyMask, "no observed entries");
  const double mean = signal.x().sum() / static_cast<double>(signal.observed_count());
  Matrix out = signal.x();
  for (Eigen::Index k = 0; k < out.size(); ++k)
    if (signal.omega().data()[k] == 0.0) out.data()[k] = mean;
  return out;
}

Matrix truncated_svd(const Matrix& x, int rank) {
  if (rank < 1) throw Error(Errc::RangeError, "svd rank must be >= 1, got " + std::to_string(rank));
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index r = std::min<Eigen::Index>(rank, svd.singularValues().size());
  return svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
}

Matrix svd_impute(const MaskedSignal& signal, int rank) {
  const Matrix approx = truncated_svd(mean_impute(signal), rank);
  Matrix out = signal.x();
  for (Eigen::Index k = 0; k < out.size(); ++k)
    if (signal.omega().data()[k] == 0.0) out.data()[k] = approx.data()[k];
  return out;
}

// ---------------------------------------------------------------------------

Matrix node_embedding(const DecompositionModel& model) { return model.psi->psi * model.graph_coefficients(); }

Matrix normalize_rows(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

namespace {

KMeansResult lloyd_once(const Matrix& points, int clusters, std::mt19937_64& rng, int max_iter) {
  const Eigen::Index n = points.rows();
  Matrix centres(clusters, points.cols());
  std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);

  // k-means++ seeding
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  Eigen::Index pick = first(rng);
  for (int c = 0; c < clusters; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (!chosen[static_cast<std::size_t>(i)]) total += dist[static_cast<std::size_t>(i)];
      if (total > 0.0) {
        double target = std::uniform_real_distribution<double>(0.0, total)(rng);
        pick = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (chosen[static_cast<std::size_t>(i)]) continue;
          pick = i;
          target -= dist[static_cast<std::size_t>(i)];
          if (target < 0.0) break;
        }
      } else {
        // all remaining points coincide with a centre: take any unused one
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < n; ++i)
          if (!chosen[static_cast<std::size_t>(i)]) free.push_back(i);
        pick = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
      }
    }
    chosen[static_cast<std::size_t>(pick)] = true;
    centres.row(c) = points.row(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      dist[static_cast<std::size_t>(i)] =
          std::min(dist[static_cast<std::size_t>(i)], (points.row(i) - centres.row(c)).squaredNorm());
  }

  KMeansResult res;
  std::vector<double> d2;
  res.labels = kernels::nearest_centres(points, centres, d2);
  for (int it = 0; it < max_iter; ++it) {
    Matrix sums = Matrix::Zero(clusters, points.cols());
    std::vector<int> counts(static_cast<std::size_t>(clusters), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(res.labels[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(res.labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < clusters; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centres.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
      } else {
        // empty cluster: move it to the worst-served point
        const auto far = std::max_element(d2.begin(), d2.end()) - d2.begin();
        centres.row(c) = points.row(far);
        d2[static_cast<std::size_t>(far)] = 0.0;
      }
    }
    auto next = kernels::nearest_centres(points, centres, d2);
    const bool stable = next == res.labels;
    res.labels = std::move(next);
    if (stable) break;
  }
  res.centres = centres;
  res.wcss = std::accumulate(d2.begin(), d2.end(), 0.0);
  return res;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int clusters, std::uint64_t seed, int restarts, int max_iter) {
  if (clusters < 1) throw Error(Errc::RangeError, "cluster count must be >= 1");
  if (clusters > points.rows())
    throw Error(Errc::KTooLarge, std::to_string(clusters) + " clusters for " + std::to_string(points.rows()) + " points");
  std::mt19937_64 rng(seed);
  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    auto res = lloyd_once(points, clusters, rng, max_iter);
    if (res.wcss < best.wcss) best = std::move(res);
  }
  return best;
}

std::vector<int> hungarian(const Matrix& cost) {
  // shortest augmenting path with row/column potentials, 1-based internally
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) assignment[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  return assignment;
}

double clustering_accuracy(const std::vector<int>& labels, const std::vector<int>& truth) {
  if (labels.size() != truth.size())
    throw Error(Errc::LengthMismatch, std::to_string(labels.size()) + " labels vs " + std::to_string(truth.size()));
  if (labels.empty()) return 1.0;
  auto index_of = [](const std::vector<int>& xs) {
    std::vector<int> uniq = xs;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> idx;
    idx.reserve(xs.size());
    for (int x : xs) idx.push_back(static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), x) - uniq.begin()));
    return std::pair{idx, static_cast<int>(uniq.size())};
  };
  const auto [li, ln] = index_of(labels);
  const auto [ti, tn] = index_of(truth);
  const int size = std::max(ln, tn);
  Matrix confusion = Matrix::Zero(size, size);
  for (std::size_t i = 0; i < labels.size(); ++i) confusion(li[i], ti[i]) += 1.0;
  const auto match = hungarian(-confusion);
  double agree = 0.0;
  for (int r = 0; r < size; ++r) agree += confusion(r, match[static_cast<std::size_t>(r)]);
  return agree / static_cast<double>(labels.size());
}

// ---------------------------------------------------------------------------

PeriodReport period_strengths(const DecompositionModel& model, double exponent) {
  if (!model.phi || model.phi->kind != TimeDictKind::Ramanujan)
    throw Error(Errc::WrongDictionaryKind, "period detection needs a Ramanujan time dictionary");
  const Matrix a = model.psi->psi * model.graph_coefficients() * model.time_coefficients();
  PeriodReport report;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const int period = model.phi->atom_meta[static_cast<std::size_t>(c)].divisor;
    report.strengths[period] += a.col(c).squaredNorm();
  }
  for (auto& [period, strength] : report.strengths) strength /= std::pow(static_cast<double>(period), exponent);
  for (const auto& [period, strength] : report.strengths) report.top_periods.push_back(period);
  std::stable_sort(report.top_periods.begin(), report.top_periods.end(),
                   [&](int a, int b) { return report.strengths.at(a) > report.strengths.at(b); });
  return report;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<Eigen::Index>> partition_observed(const MaskedSignal& signal, int folds, std::uint64_t seed) {
  if (folds < 2) throw Error(Errc::RangeError, "folds must be >= 2");
  std::vector<Eigen::Index> observed;
  for (Eigen::Index k = 0; k < signal.omega().size(); ++k)
    if (signal.omega().data()[k] != 0.0) observed.push_back(k);
  if (static_cast<Eigen::Index>(observed.size()) < folds)
    throw Error(Errc::RangeError, "fewer observed entries than folds");
  std::mt19937_64 rng(seed);
  for (std::size_t i = observed.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(observed[i - 1], observed[pick(rng)]);
  }
  std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < observed.size(); ++i) out[i % static_cast<std::size_t>(folds)].push_back(observed[i]);
  for (auto& fold : out) std::sort(fold.begin(), fold.end());
  return out;
}

RankEstimate estimate_rank(const MaskedSignal& signal, std::shared_ptr<const GraphDictionary> psi,
                           std::shared_ptr<const TimeDictionary> phi, const SolverConfig& base,
                           const std::vector<int>& candidates, int folds, std::uint64_t seed, int jobs) {
  if (candidates.empty()) throw Error(Errc::RangeError, "rank grid is empty");
  const auto partition = partition_observed(signal, folds, seed);
  const int n_jobs = static_cast<int>(candidates.size()) * folds;
  std::vector<double> sse(static_cast<std::size_t>(n_jobs), 0.0);
  std::vector<std::string> failure(static_cast<std::size_t>(n_jobs));
  std::vector<Errc> failure_code(static_cast<std::size_t>(n_jobs), Errc::NonFinite);
  const int threads = jobs > 0 ? jobs : kernels::max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int job = 0; job < n_jobs; ++job) {
    const auto c = static_cast<std::size_t>(job / folds);
    const auto& fold = partition[static_cast<std::size_t>(job % folds)];
    try {
      Matrix omega = signal.omega();
      for (auto k : fold) omega.data()[k] = 0.0;
      SolverConfig config = base;
      config.k = candidates[c];
      const auto model = fit(MaskedSignal(signal.x(), omega), psi, phi, config);
      const Matrix recon = reconstruct(model);
      double s = 0.0;
      for (auto k : fold) {
        const double d = recon.data()[k] - signal.x().data()[k];
        s += d * d;
      }
      sse[static_cast<std::size_t>(job)] = s;
    } catch (const Error& e) {
      failure_code[static_cast<std::size_t>(job)] = e.code();
      failure[static_cast<std::size_t>(job)] = e.what();
    }
  }
  for (int job = 0; job < n_jobs; ++job)
    if (!failure[static_cast<std::size_t>(job)].empty())
      throw Error(failure_code[static_cast<std::size_t>(job)], "rank job " + std::to_string(job) + ": " +
                                                                   failure[static_cast<std::size_t>(job)]);

  RankEstimate est;
  est.candidates = candidates;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::vector<double> row(sse.begin() + static_cast<std::ptrdiff_t>(c * folds),
                            sse.begin() + static_cast<std::ptrdiff_t>((c + 1) * folds));
    const double mean = std::accumulate(row.begin(), row.end(), 0.0) / folds;
    est.sse.push_back(std::move(row));
    est.mean_sse.push_back(mean);
    if (mean < best || (mean == best && candidates[c] < est.chosen_k)) {
      best = mean;
      est.chosen_k = candidates[c];
    }
  }
  return est;
}

}  // namespace tgsd
