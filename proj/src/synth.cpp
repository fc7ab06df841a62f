#include "tgsd/synth.hpp"

#include "tgsd/dictionary.hpp"
#include "tgsd/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace tgsd {

void SynthSpec::validate() const {
  auto fail = [](const char* key, const std::string& why) {
    throw Error(Errc::RangeError, std::string("synth.") + key + ": " + why);
  };
  if (n_groups < 1) fail("n_groups", "must be >= 1");
  if (nodes_per_group < 1) fail("nodes_per_group", "must be >= 1");
  if (!(overlap_fraction >= 0.0 && overlap_fraction <= 1.0)) fail("overlap_fraction", "must be in [0,1]");
  if (!(p_in >= 0.0 && p_in <= 1.0)) fail("p_in", "must be in [0,1]");
  if (!(p_out >= 0.0 && p_out <= 1.0)) fail("p_out", "must be in [0,1]");
  if (periods.empty()) fail("periods", "must not be empty");
  for (int p : periods)
    if (p < 1) fail("periods", "must be >= 1");
  if (t < 1) fail("t", "must be >= 1");
  if (!(amplitude_low < amplitude_high)) fail("amplitude_low", "must be < amplitude_high");
}

double linear_snr(const SynthSpec& spec) {
  return spec.snr_unit == SnrUnit::Decibel ? std::pow(10.0, spec.snr / 10.0) : spec.snr;
}

namespace {

// Independent streams for the graph and the signal so that changing one part
// of the settings does not reshuffle the other.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

Eigen::RowVectorXd sinusoid_series(int period, int t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> weight(0.3, 1.0);
  Eigen::RowVectorXd series = Eigen::RowVectorXd::Zero(t);
  if (period == 1) {
    series.setOnes();
    return series;
  }
  // harmonics coprime to the period keep the exact period
  std::vector<int> harmonics;
  for (int j = 2; j <= period / 2; ++j)
    if (std::gcd(j, period) == 1) harmonics.push_back(j);
  std::shuffle(harmonics.begin(), harmonics.end(), rng);
  const std::size_t extra = std::min<std::size_t>(harmonics.size(), std::uniform_int_distribution<int>(0, 2)(rng));
  std::vector<std::pair<int, double>> terms{{1, 1.0}};
  for (std::size_t h = 0; h < extra; ++h) terms.emplace_back(harmonics[h], weight(rng));
  for (auto [j, a] : terms) {
    const double ph = phase(rng);
    for (int i = 0; i < t; ++i) series(i) += a * std::cos(2.0 * std::numbers::pi * j * i / period + ph);
  }
  return series;
}

Eigen::RowVectorXd ramanujan_series(int period, int t, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::RowVectorXd series = Eigen::RowVectorXd::Zero(t);
  const auto cols = euler_totient(period);
  for (int c = 0; c < cols; ++c) {
    const double a = gauss(rng);
    for (int i = 0; i < t; ++i) series(i) += a * static_cast<double>(ramanujan_sum(period, ((i - c) % period + period) % period));
  }
  return series;
}

}  // namespace

SynthGraph gen_graph(const SynthSpec& spec) {
  spec.validate();
  const int n = spec.nodes();
  auto rng = stream(spec.seed, 0x67);
  SynthGraph out;
  out.graph = Graph(n);
  out.labels.resize(n);
  out.memberships.resize(n);
  for (int i = 0; i < n; ++i) {
    out.labels[i] = i / spec.nodes_per_group;
    out.memberships[i] = {out.labels[i]};
  }

  if (spec.n_groups > 1) {
    const int overlapping = static_cast<int>(std::lround(spec.overlap_fraction * n));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<int> other(0, spec.n_groups - 2);
    for (int r = 0; r < overlapping; ++r) {
      const int node = order[r];
      int g = other(rng);
      if (g >= out.labels[node]) ++g;
      out.memberships[node].push_back(g);
    }
  }

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const auto& mu = out.memberships[u];
      const auto& mv = out.memberships[v];
      bool shared = false;
      for (int g : mu) shared = shared || std::find(mv.begin(), mv.end(), g) != mv.end();
      if (coin(rng) < (shared ? spec.p_in : spec.p_out)) out.graph.add_edge(u, v, 1.0);
    }
  }
  return out;
}

SynthSignal gen_signal(const SynthGraph& graph, const SynthSpec& spec) {
  spec.validate();
  const int n = static_cast<int>(graph.labels.size());
  auto rng = stream(spec.seed, 0x5e);

  Matrix base(spec.n_groups, spec.t);
  for (int g = 0; g < spec.n_groups; ++g) {
    const int period = spec.periods[static_cast<std::size_t>(g) % spec.periods.size()];
    Eigen::RowVectorXd series =
        spec.waveform == Waveform::Ramanujan ? ramanujan_series(period, spec.t, rng) : sinusoid_series(period, spec.t, rng);
    const double rms = std::sqrt(series.squaredNorm() / spec.t);
    base.row(g) = rms > 0.0 ? Eigen::RowVectorXd(series / rms) : series;
  }

  std::uniform_real_distribution<double> amplitude(spec.amplitude_low, spec.amplitude_high);
  SynthSignal out;
  out.clean.resize(n, spec.t);
  for (int i = 0; i < n; ++i) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(spec.t);
    for (int g : graph.memberships[i]) row += base.row(g);
    out.clean.row(i) = amplitude(rng) * row / static_cast<double>(graph.memberships[i].size());
  }

  out.noisy = out.clean;
  const double snr = linear_snr(spec);
  if (std::isfinite(snr) && snr > 0.0) {
    const double power = out.clean.squaredNorm() / static_cast<double>(out.clean.size());
    std::normal_distribution<double> noise(0.0, std::sqrt(power / snr));
    for (Eigen::Index k = 0; k < out.noisy.size(); ++k) out.noisy.data()[k] += noise(rng);
  }
  return out;
}

}  // namespace tgsd
