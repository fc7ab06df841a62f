#include "doctest.h"
#include "support.hpp"

#include "tgsd/synth.hpp"

#include <limits>

using namespace tgsd;
using namespace tgsd::testing;

namespace {

bool share_group(const SynthGraph& sg, int u, int v) {
  for (int g : sg.memberships[static_cast<std::size_t>(u)])
    for (int h : sg.memberships[static_cast<std::size_t>(v)])
      if (g == h) return true;
  return false;
}

}  // namespace

TEST_CASE("synth graph: p_in 1, p_out 0, no overlap is block diagonal") {
  SynthSpec spec;
  spec.n_groups = 4;
  spec.nodes_per_group = 5;
  spec.p_in = 1.0;
  spec.p_out = 0.0;
  spec.overlap_fraction = 0.0;
  const auto sg = gen_graph(spec);
  for (int u = 0; u < 20; ++u)
    for (int v = 0; v < 20; ++v) {
      const double expected = (u != v && u / 5 == v / 5) ? 1.0 : 0.0;
      CHECK(sg.graph.weight(u, v) == expected);
    }
  CHECK(sg.labels[7] == 1);
}

TEST_CASE("synth graph: overlap count and membership shape") {
  SynthSpec spec;
  const auto sg = gen_graph(spec);
  int overlapping = 0;
  for (std::size_t i = 0; i < sg.memberships.size(); ++i) {
    const auto& m = sg.memberships[i];
    CHECK(m.front() == sg.labels[i]);
    CHECK(m.size() <= 2);
    if (m.size() == 2) {
      ++overlapping;
      CHECK(m[1] != m[0]);
    }
  }
  CHECK(overlapping == 18);  // round(0.1 * 175)
}

TEST_CASE("synth graph: edge density inside and across groups") {
  SynthSpec spec;
  const auto sg = gen_graph(spec);
  long in_pairs = 0, in_edges = 0, out_pairs = 0, out_edges = 0;
  for (int u = 0; u < spec.nodes(); ++u)
    for (int v = u + 1; v < spec.nodes(); ++v) {
      const bool edge = sg.graph.weight(u, v) != 0.0;
      if (share_group(sg, u, v)) {
        ++in_pairs;
        in_edges += edge;
      } else {
        ++out_pairs;
        out_edges += edge;
      }
    }
  CHECK(static_cast<double>(in_edges) / in_pairs == doctest::Approx(0.6).epsilon(0.05));
  CHECK(static_cast<double>(out_edges) / out_pairs == doctest::Approx(0.03).epsilon(0.2));
}

TEST_CASE("synth: same seed, same output; different seed, different output") {
  SynthSpec spec;
  spec.n_groups = 3;
  spec.nodes_per_group = 6;
  spec.t = 30;
  const auto a = gen_graph(spec);
  const auto sa = gen_signal(a, spec);
  const auto b = gen_graph(spec);
  const auto sb = gen_signal(b, spec);
  CHECK(max_abs(a.graph.adjacency() - b.graph.adjacency()) == 0.0);
  CHECK(a.memberships == b.memberships);
  CHECK(max_abs(sa.noisy - sb.noisy) == 0.0);
  spec.seed = 1;
  CHECK(max_abs(gen_signal(gen_graph(spec), spec).noisy - sa.noisy) > 0.0);
}

TEST_CASE("synth signal: empirical SNR") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthSpec spec;
    spec.seed = seed;
    const auto sig = gen_signal(gen_graph(spec), spec);
    const double ratio = sig.clean.squaredNorm() / (sig.noisy - sig.clean).squaredNorm();
    CHECK(ratio == doctest::Approx(10.0).epsilon(0.2));
  }
  SynthSpec db;
  db.snr = 20.0;
  db.snr_unit = SnrUnit::Decibel;
  CHECK(linear_snr(db) == doctest::Approx(100.0));
  const auto sig = gen_signal(gen_graph(db), db);
  CHECK(sig.clean.squaredNorm() / (sig.noisy - sig.clean).squaredNorm() == doctest::Approx(100.0).epsilon(0.2));
}

TEST_CASE("synth signal: noiseless rows are periodic with their group period") {
  for (const auto waveform : {Waveform::Sinusoid, Waveform::Ramanujan}) {
    SynthSpec spec;
    spec.overlap_fraction = 0.0;
    spec.snr = std::numeric_limits<double>::infinity();
    spec.waveform = waveform;
    const auto sg = gen_graph(spec);
    const auto sig = gen_signal(sg, spec);
    CHECK(max_abs(sig.noisy - sig.clean) == 0.0);
    for (int i = 0; i < spec.nodes(); i += 13) {
      const int p = spec.periods[static_cast<std::size_t>(sg.labels[static_cast<std::size_t>(i)])];
      for (int s = 0; s + p < spec.t; ++s) CHECK(sig.clean(i, s) == doctest::Approx(sig.clean(i, s + p)).epsilon(1e-9));
      // not periodic with any proper divisor
      for (int d = 1; d < p; ++d) {
        if (p % d != 0) continue;
        double gap = 0.0;
        for (int s = 0; s + d < spec.t; ++s) gap = std::max(gap, std::abs(sig.clean(i, s) - sig.clean(i, s + d)));
        CHECK(gap > 1e-6);
      }
    }
  }
}

TEST_CASE("synth signal: members of a group are scaled copies") {
  SynthSpec spec;
  spec.overlap_fraction = 0.0;
  spec.snr = 0.0;
  const auto sg = gen_graph(spec);
  const auto sig = gen_signal(sg, spec);
  for (int g = 0; g < spec.n_groups; ++g) {
    const Eigen::RowVectorXd a = sig.clean.row(g * spec.nodes_per_group);
    for (int r = 1; r < spec.nodes_per_group; ++r) {
      const Eigen::RowVectorXd b = sig.clean.row(g * spec.nodes_per_group + r);
      CHECK(a.dot(b) / (a.norm() * b.norm()) >= 0.95);
    }
  }
}

TEST_CASE("synth: validation names the field") {
  SynthSpec spec;
  spec.periods = {};
  CHECK(code_of([&] { gen_graph(spec); }) == Errc::RangeError);
  spec = SynthSpec{};
  spec.p_in = 1.5;
  try {
    gen_graph(spec);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("synth.p_in") != std::string::npos);
  }
}
