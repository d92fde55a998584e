#pragma once
// Development (genome -> tissue) and inference (sensor frame -> behaviors).
//
// A tissue is a four-layer lattice of motor neurons plus a set of decision
// neurons. Per frame, every decision neuron reads the full sensor layer and,
// when active, emits a uniform-concentration field over its influence box.
// Field concentrations sum per cell; motor neurons on the cells holding the
// maximum summed concentration form the active subnetwork. Sensor states then
// propagate upward through active motor neurons only, and the top layer votes
// for behaviors.
//
// Wiring, by layer:
//   layer 0 motors: no inputs, state is the activation function at sigma = 0
//   layer 1 motors: fully connected to the sensor layer, plus the 3x3 block
//                   of layer-0 motor neurons directly below
//   layers 2 and 3: the 3x3 block one layer below only
// Decision neurons read the sensor layer wherever they sit. Only motor
// neurons serve as block inputs; a decision neuron occupying a block cell
// contributes nothing to the neuron above it.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ant/activation.hpp"
#include "ant/behaviors.hpp"
#include "ant/controller.hpp"
#include "ant/genome.hpp"
#include "ant/sensors.hpp"

namespace ant {

struct DevelopmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Placement rules shared by development and cell replication: the seed gene
// is placed first, the rest follow in genome order, and a gene is skipped
// when repressed, out of the layer range, or when its cell is already taken.
inline std::map<LatticePos, int32_t> place_genes(const Genome& genome) {
  std::map<LatticePos, int32_t> placed;
  auto try_place = [&](int32_t gi) {
    const Gene& g = genome.genes[gi];
    if (!g.expressed) return;
    if (g.pos.n < 0 || g.pos.n >= kLayerCount) return;
    placed.emplace(g.pos, gi);  // no overwrite, first placement wins
  };
  if (genome.seed_index >= 0 &&
      genome.seed_index < static_cast<int32_t>(genome.genes.size()))
    try_place(genome.seed_index);
  for (int32_t gi = 0; gi < static_cast<int32_t>(genome.genes.size()); ++gi)
    if (gi != genome.seed_index) try_place(gi);
  return placed;
}

}  // namespace detail

// A decision neuron's emitted field: uniform concentration over the box
// pos +- extent (layer range clipped to the lattice).
struct ActiveField {
  LatticePos pos;
  double concentration = 0.0;
  std::array<int32_t, 3> extent{};
};

class Tissue {
 public:
  struct MotorNeuron {
    LatticePos pos;
    int32_t gene_index = -1;
    int binding = -1;  // behavior index, -1 when unbound or below top layer
    ActivationParams act;
    // Resolved 3x3 block inputs: indices into motors(), always one layer
    // below, so propagation in motors() order is well-founded.
    int8_t n_inputs = 0;
    std::array<int32_t, 9> in_idx{};
    std::array<double, 9> in_w{};
  };

  struct DecisionNeuron {
    LatticePos pos;
    int32_t gene_index = -1;
    ActivationParams act;
    double concentration = 0.0;
    std::array<int32_t, 3> box_lo{};  // clipped influence box, inclusive
    std::array<int32_t, 3> box_hi{};
  };

  // Grows the phenotype. The seed gene is placed first and wins its cell;
  // the remaining genes follow in genome order, and a gene whose position is
  // already occupied or whose layer is out of range is skipped. Dead genes
  // occupy their cell but produce no neuron.
  static Tissue develop(const Genome& genome) {
    if (genome.seed_index < 0 ||
        genome.seed_index >= static_cast<int32_t>(genome.genes.size()))
      throw DevelopmentError("seed_address " + std::to_string(genome.seed_index) +
                             " out of range");
    if (!genome.genes[genome.seed_index].expressed)
      throw DevelopmentError("seed gene is repressed");

    Tissue t;
    t.genome_ = genome;

    const std::map<LatticePos, int32_t> placed = detail::place_genes(t.genome_);
    for (const auto& [pos, gi] : placed) t.occupied_.push_back(pos);

    // Live neurons, motors sorted by (layer, gene order) so that the block
    // inputs of any motor precede it in the array.
    std::vector<std::pair<LatticePos, int32_t>> live_motors;
    for (const auto& [pos, gi] : placed) {
      const Gene& g = t.genome_.genes[gi];
      if (g.dead) continue;
      if (g.kind == GeneKind::Motor)
        live_motors.emplace_back(pos, gi);
      else
        t.decisions_.push_back(make_decision(pos, gi, g));
    }
    std::sort(live_motors.begin(), live_motors.end(),
              [](const auto& a, const auto& b) {
                if (a.first.n != b.first.n) return a.first.n < b.first.n;
                return a.second < b.second;
              });

    std::map<LatticePos, int32_t> motor_index;
    for (const auto& [pos, gi] : live_motors) {
      MotorNeuron mn;
      mn.pos = pos;
      mn.gene_index = gi;
      const Gene& g = t.genome_.genes[gi];
      mn.act = g.act;
      if (pos.n == kOutputLayer && g.output_binding)
        mn.binding = *g.output_binding;
      if (pos.n >= 1) {
        for (int dl = -1; dl <= 1; ++dl)
          for (int dm = -1; dm <= 1; ++dm) {
            auto it = motor_index.find({pos.l + dl, pos.m + dm, pos.n - 1});
            if (it == motor_index.end()) continue;
            mn.in_idx[mn.n_inputs] = it->second;
            mn.in_w[mn.n_inputs] = g.nominal[(dl + 1) * 3 + (dm + 1)];
            ++mn.n_inputs;
          }
      }
      motor_index.emplace(pos, static_cast<int32_t>(t.motors_.size()));
      t.motors_.push_back(mn);
    }

    t.build_field_bbox();
    return t;
  }

  const std::vector<MotorNeuron>& motors() const { return motors_; }
  const std::vector<DecisionNeuron>& decisions() const { return decisions_; }
  const Genome& genome() const { return genome_; }
  size_t neuron_count() const { return motors_.size() + decisions_.size(); }

  bool occupied(LatticePos p) const {
    return std::binary_search(occupied_.begin(), occupied_.end(), p);
  }
  const std::vector<LatticePos>& occupied_cells() const { return occupied_; }

  const double* sensor_weights(int32_t gene_index) const {
    return genome_.genes[gene_index].sensor.data();
  }

  int motor_at(LatticePos p) const {
    for (size_t i = 0; i < motors_.size(); ++i)
      if (motors_[i].pos == p) return static_cast<int>(i);
    return -1;
  }

  // Field bounding box (union of all decision influence boxes); the gating
  // scratch in the controller is sized from it.
  bool has_fields() const { return field_w_ > 0; }
  int32_t field_lo_l() const { return field_lo_l_; }
  int32_t field_lo_m() const { return field_lo_m_; }
  int32_t field_w() const { return field_w_; }
  int32_t field_h() const { return field_h_; }
  size_t field_cells() const {
    return static_cast<size_t>(field_w_) * field_h_ * kLayerCount;
  }
  int32_t flat_index(LatticePos p) const {
    return (p.n * field_h_ + (p.m - field_lo_m_)) * field_w_ + (p.l - field_lo_l_);
  }
  // -1 where no motor neuron sits (or the cell is outside the box).
  const std::vector<int32_t>& cell_motor() const { return cell_motor_; }

  Tissue(Tissue&&) = default;
  Tissue& operator=(Tissue&&) = default;
  Tissue(const Tissue&) = delete;
  Tissue& operator=(const Tissue&) = delete;

 private:
  Tissue() = default;

  static DecisionNeuron make_decision(LatticePos pos, int32_t gi, const Gene& g) {
    DecisionNeuron dn;
    dn.pos = pos;
    dn.gene_index = gi;
    dn.act = g.act;
    dn.concentration = g.concentration;
    dn.box_lo = {pos.l - g.extent[0], pos.m - g.extent[1],
                 std::max(0, pos.n - g.extent[2])};
    dn.box_hi = {pos.l + g.extent[0], pos.m + g.extent[1],
                 std::min(kLayerCount - 1, pos.n + g.extent[2])};
    return dn;
  }

  void build_field_bbox() {
    if (decisions_.empty()) return;
    int32_t lo_l = decisions_[0].box_lo[0], hi_l = decisions_[0].box_hi[0];
    int32_t lo_m = decisions_[0].box_lo[1], hi_m = decisions_[0].box_hi[1];
    for (const auto& d : decisions_) {
      lo_l = std::min(lo_l, d.box_lo[0]);
      hi_l = std::max(hi_l, d.box_hi[0]);
      lo_m = std::min(lo_m, d.box_lo[1]);
      hi_m = std::max(hi_m, d.box_hi[1]);
    }
    field_lo_l_ = lo_l;
    field_lo_m_ = lo_m;
    field_w_ = hi_l - lo_l + 1;
    field_h_ = hi_m - lo_m + 1;
    cell_motor_.assign(field_cells(), -1);
    for (size_t i = 0; i < motors_.size(); ++i) {
      const LatticePos p = motors_[i].pos;
      if (p.l < lo_l || p.l > hi_l || p.m < lo_m || p.m > hi_m) continue;
      cell_motor_[flat_index(p)] = static_cast<int32_t>(i);
    }
  }

  Genome genome_;
  std::vector<MotorNeuron> motors_;      // sorted by (layer, gene order)
  std::vector<DecisionNeuron> decisions_;  // genome placement order
  std::vector<LatticePos> occupied_;     // sorted; includes dormant cells
  int32_t field_lo_l_ = 0, field_lo_m_ = 0, field_w_ = 0, field_h_ = 0;
  std::vector<int32_t> cell_motor_;
};

// Decision-neuron pass: evaluates every decision neuron against the frame
// and returns the emitted fields (declared, unclipped extents) in tissue
// order. Mostly useful for tests and the activity log; the controller path
// below fuses this with gating.
inline std::vector<ActiveField> activate_decision_neurons(const Tissue& t,
                                                          const SensorFrame& f) {
  std::vector<ActiveField> out;
  const auto acts = active_inputs(f);
  for (const auto& d : t.decisions()) {
    const double* v = t.sensor_weights(d.gene_index);
    double num = 0.0;
    for (int i = 0; i < kSensorGroups; ++i) num += v[acts[i]];
    if (modular_activation(num / kSensorGroups, d.act) == 0) continue;
    const Gene& g = t.genome().genes[d.gene_index];
    out.push_back({d.pos, d.concentration, g.extent});
  }
  return out;
}

// Coarse-coding rule, reference form: concentrations sum per cell, and the
// motor neurons on covered cells holding the maximum sum are active (ties all
// active). Accepts arbitrary fields so tests can drive it synthetically.
inline std::vector<int> coarse_code(const std::vector<ActiveField>& fields,
                                    const Tissue& t) {
  if (fields.empty()) return {};
  std::map<LatticePos, double> conc;
  for (const auto& fld : fields) {
    const int32_t n_lo = std::max(0, fld.pos.n - fld.extent[2]);
    const int32_t n_hi = std::min(kLayerCount - 1, fld.pos.n + fld.extent[2]);
    for (int32_t n = n_lo; n <= n_hi; ++n)
      for (int32_t m = fld.pos.m - fld.extent[1]; m <= fld.pos.m + fld.extent[1]; ++m)
        for (int32_t l = fld.pos.l - fld.extent[0]; l <= fld.pos.l + fld.extent[0]; ++l)
          conc[{l, m, n}] += fld.concentration;
  }
  double best = 0.0;
  bool first = true;
  for (const auto& [pos, c] : conc) {
    if (first || c > best) best = c;
    first = false;
  }
  std::vector<int> active;
  for (const auto& [pos, c] : conc) {
    if (c != best) continue;
    int mi = t.motor_at(pos);
    if (mi >= 0) active.push_back(mi);
  }
  std::sort(active.begin(), active.end());
  return active;
}

// Full inference result for one frame. decision_states has one entry per
// decision neuron in tissue order (the activity-log rows).
struct InferResult {
  BehaviorVector bv;
  std::vector<uint8_t> decision_states;
};

// Executable controller around a developed tissue. Inference is pure, so
// results are memoized per packed sensor frame; the cache and the gating
// scratch make this class single-owner (one controller per evaluation,
// shared by that evaluation's robots).
class AntController : public Controller {
 public:
  // gated = false turns off coarse coding (every motor neuron active); that
  // is the fixed-topology baseline semantics.
  explicit AntController(const Tissue& tissue, bool gated = true)
      : tissue_(&tissue), gated_(gated) {
    init_scratch();
  }

  // Owning variant: keeps the tissue alive for the controller's lifetime.
  explicit AntController(Tissue&& tissue, bool gated = true)
      : owned_(std::move(tissue)), tissue_(&*owned_), gated_(gated) {
    init_scratch();
  }

  BehaviorVector decide(const SensorFrame& frame) override {
    const uint64_t key = pack(frame);
    auto it = memo_.find(key);
    if (it == memo_.end()) it = memo_.emplace(key, infer_uncached(frame)).first;
    last_ = &it->second;
    return it->second.bv;
  }

  const std::vector<uint8_t>* decision_states() const override {
    if (!last_ || tissue_->decisions().empty()) return nullptr;
    return &last_->decision_states;
  }

  size_t cache_size() const { return memo_.size(); }

  // memo_/last_/owned_ carry internal pointers; pin the object instead.
  AntController(const AntController&) = delete;
  AntController& operator=(const AntController&) = delete;
  AntController(AntController&&) = delete;
  AntController& operator=(AntController&&) = delete;

 private:
  void init_scratch() {
    conc_.assign(tissue_->field_cells(), 0.0);
    stamp_.assign(tissue_->field_cells(), 0);
    motor_active_.assign(tissue_->motors().size(), 0);
    motor_state_.assign(tissue_->motors().size(), 0);
  }

  InferResult infer_uncached(const SensorFrame& frame) {
    const Tissue& t = *tissue_;
    const auto acts = active_inputs(frame);
    InferResult res;

    // Decision pass and gating.
    res.decision_states.resize(t.decisions().size());
    if (gated_) {
      ++epoch_;
      touched_.clear();
      for (size_t di = 0; di < t.decisions().size(); ++di) {
        const auto& d = t.decisions()[di];
        const double* v = t.sensor_weights(d.gene_index);
        double num = 0.0;
        for (int i = 0; i < kSensorGroups; ++i) num += v[acts[i]];
        const int s = modular_activation(num / kSensorGroups, d.act);
        res.decision_states[di] = static_cast<uint8_t>(s);
        if (s == 0) continue;
        for (int32_t n = d.box_lo[2]; n <= d.box_hi[2]; ++n)
          for (int32_t m = d.box_lo[1]; m <= d.box_hi[1]; ++m)
            for (int32_t l = d.box_lo[0]; l <= d.box_hi[0]; ++l) {
              const int32_t ci = t.flat_index({l, m, n});
              if (stamp_[ci] != epoch_) {
                stamp_[ci] = epoch_;
                conc_[ci] = 0.0;
                touched_.push_back(ci);
              }
              conc_[ci] += d.concentration;
            }
      }
      std::fill(motor_active_.begin(), motor_active_.end(), 0);
      if (!touched_.empty()) {
        double best = conc_[touched_[0]];
        for (int32_t ci : touched_) best = std::max(best, conc_[ci]);
        const auto& cm = t.cell_motor();
        for (int32_t ci : touched_) {
          if (conc_[ci] != best) continue;
          if (cm[ci] >= 0) motor_active_[cm[ci]] = 1;
        }
      }
    } else {
      std::fill(motor_active_.begin(), motor_active_.end(), 1);
    }

    // Upward propagation through the active subnetwork.
    std::array<int, kBehaviorCount> voters{};
    std::array<int, kBehaviorCount> votes{};
    const auto& motors = t.motors();
    for (size_t mi = 0; mi < motors.size(); ++mi) {
      motor_state_[mi] = 0;
      if (!motor_active_[mi]) continue;
      const auto& mn = motors[mi];
      double num = 0.0, den = 0.0;
      if (mn.pos.n == 1) {
        const double* w = t.sensor_weights(mn.gene_index);
        for (int i = 0; i < kSensorGroups; ++i) num += w[acts[i]];
        den += kSensorGroups;
      }
      for (int k = 0; k < mn.n_inputs; ++k) {
        const int32_t j = mn.in_idx[k];
        // An inactive input and an active input with state 0 contribute the
        // same nothing to both sums.
        if (motor_active_[j] && motor_state_[j]) {
          num += mn.in_w[k];
          den += 1.0;
        }
      }
      const double sigma = den == 0.0 ? 0.0 : num / den;
      const int s = modular_activation(sigma, mn.act);
      motor_state_[mi] = static_cast<uint8_t>(s);
      if (mn.pos.n == kOutputLayer && mn.binding >= 0) {
        ++voters[mn.binding];
        votes[mn.binding] += s;
      }
    }
    res.bv = arbitrate(voters, votes);
    return res;
  }

  std::optional<Tissue> owned_;  // declared before tissue_, which may point at it
  const Tissue* tissue_;
  bool gated_;
  std::unordered_map<uint64_t, InferResult> memo_;
  const InferResult* last_ = nullptr;
  // Gating scratch, reused across calls: epoch-stamped concentration cells.
  std::vector<double> conc_;
  std::vector<uint32_t> stamp_;
  std::vector<int32_t> touched_;
  std::vector<uint8_t> motor_active_;
  std::vector<uint8_t> motor_state_;
  uint32_t epoch_ = 0;
};

// One-shot convenience form of the inference operation.
inline BehaviorVector infer(const Tissue& t, const SensorFrame& f) {
  AntController c(t);
  return c.decide(f);
}

}  // namespace ant
