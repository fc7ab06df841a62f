#pragma once

#include "tgsd/graph.hpp"

#include <cstdint>
#include <vector>

namespace tgsd {

enum class SnrUnit { Linear, Decibel };
enum class Waveform { Sinusoid, Ramanujan };

/// Planted overlapping-community graph with periodic group signals.
struct SynthSpec {
  int n_groups = 7;
  int nodes_per_group = 25;
  double overlap_fraction = 0.10;
  double p_in = 0.6;
  double p_out = 0.03;
  /// One period per group, cycled when shorter than n_groups.
  std::vector<int> periods{3, 4, 5, 6, 7, 8, 9};
  int t = 200;
  double amplitude_low = 1.0;
  double amplitude_high = 10.0;
  /// Noise power = signal power / snr. Non-finite or <= 0 disables noise.
  double snr = 10.0;
  SnrUnit snr_unit = SnrUnit::Linear;
  Waveform waveform = Waveform::Sinusoid;
  std::uint64_t seed = 0;

  int nodes() const noexcept { return n_groups * nodes_per_group; }
  void validate() const;
};

struct SynthGraph {
  Graph graph;
  /// Primary group of each node.
  std::vector<int> labels;
  /// All groups of each node (primary first).
  std::vector<std::vector<int>> memberships;
};

SynthGraph gen_graph(const SynthSpec& spec);

/// Noiseless group-mixture signal and its noisy observation.
struct SynthSignal {
  Matrix clean;
  Matrix noisy;
};

SynthSignal gen_signal(const SynthGraph& graph, const SynthSpec& spec);

/// Linear power ratio implied by the spec.
double linear_snr(const SynthSpec& spec);

}  // namespace tgsd
