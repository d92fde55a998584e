#pragma once
// Genome model: one tissue-level gene plus an ordered list of cell genes.
// Each cell gene describes one lattice cell (motor or decision neuron).
// Initialization distributions live here because mutation re-draws single
// parameters from exactly these distributions.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ant/activation.hpp"
#include "ant/behaviors.hpp"
#include "ant/rng.hpp"
#include "ant/sensors.hpp"

namespace ant {

struct LatticePos {
  int32_t l = 0;
  int32_t m = 0;
  int32_t n = 0;  // layer, valid range [0, kLayerCount)

  bool operator==(const LatticePos&) const = default;
  auto operator<=>(const LatticePos&) const = default;
};

// The growth program caps tissues at four layers; the top layer votes.
constexpr int kLayerCount = 4;
constexpr int kOutputLayer = kLayerCount - 1;

// Size of the box initial neuron positions are sampled from.
constexpr int kSeedBoxSide = 6;

enum class GeneKind : uint8_t { Motor = 0, Decision = 1 };

// One struct covers both kinds; the decision-only and motor-only payloads are
// simply unused by the other kind. This keeps crossover and mutation free of
// variant plumbing at the cost of a little memory.
struct Gene {
  GeneKind kind = GeneKind::Motor;
  LatticePos pos{};
  ActivationParams act{};
  // Input-layer weights. Used by layer-1 motor neurons and by all decision
  // neurons; carried by every gene so a daughter can inherit them whatever
  // layer it lands on.
  std::array<double, kInputCount> sensor{};

  // Motor payload: weights over the 3x3 nominal input block one layer below,
  // row-major by (dl, dm) in [-1,1]^2, and the output behavior binding.
  std::array<double, 9> nominal{};
  std::optional<int> output_binding;  // 0..11, meaningful on the top layer

  // Decision payload: uniform field concentration and per-axis half-extents
  // of the influence box.
  double concentration = 0.0;
  std::array<int32_t, 3> extent{};

  bool expressed = true;
  bool dead = false;  // grown but dormant; still occupies its lattice cell

  bool operator==(const Gene&) const = default;
};

struct Genome {
  double replication_prob = 0.0;  // Tr
  double decision_ratio = 0.0;    // probability a daughter cell is a decision neuron
  int32_t seed_index = 0;         // index into genes; the first cell to develop
  std::optional<int32_t> robot_count;  // N, present only in evolvable-N mode
  std::vector<Gene> genes;

  bool operator==(const Genome&) const = default;
};

// Initialization distributions. Field extents cap at 3 cells per axis, which
// is enough for one field to span the whole seed box.
constexpr int kMaxFieldExtent = 3;
constexpr int kMinRobots = 1, kMaxRobots = 10;

inline double draw_weight(Rng& rng) { return rng.uniform(-1.0, 1.0); }
inline double draw_threshold(Rng& rng) { return rng.uniform(-1.0, 1.0); }
inline uint8_t draw_kbit(Rng& rng) { return static_cast<uint8_t>(rng.uniform_int(0, 1)); }
inline double draw_concentration(Rng& rng) { return rng.uniform(); }
inline int32_t draw_extent(Rng& rng) {
  return static_cast<int32_t>(rng.uniform_int(0, kMaxFieldExtent));
}
inline int draw_binding(Rng& rng) {
  return static_cast<int>(rng.uniform_int(0, kBehaviorCount - 1));
}
inline int32_t draw_robot_count(Rng& rng) {
  return static_cast<int32_t>(rng.uniform_int(kMinRobots, kMaxRobots));
}

inline ActivationParams draw_activation(Rng& rng) {
  ActivationParams p;
  p.theta1 = draw_threshold(rng);
  p.theta2 = draw_threshold(rng);
  p.k1 = draw_kbit(rng);
  p.k2 = draw_kbit(rng);
  return p;
}

// Fills the kind-specific payload of a fresh gene (everything except kind,
// position and flags).
inline void randomize_gene_params(Gene& g, Rng& rng) {
  for (auto& w : g.sensor) w = draw_weight(rng);
  g.act = draw_activation(rng);
  if (g.kind == GeneKind::Motor) {
    for (auto& w : g.nominal) w = draw_weight(rng);
    g.output_binding = draw_binding(rng);
    g.concentration = 0.0;
    g.extent = {0, 0, 0};
  } else {
    g.nominal = {};
    g.output_binding.reset();
    g.concentration = draw_concentration(rng);
    for (auto& d : g.extent) d = draw_extent(rng);
  }
}

}  // namespace ant
