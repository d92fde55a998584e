#pragma once
// The grid-world simulator: heightfield terrain, 2x2 bulldozer robots, the 12
// basis behaviors, the blade soil model and the excavation fitness.
//
// Geometry conventions (shared by sensing and movement):
//   x grows east, y grows south; headings turn clockwise N -> E -> S -> W.
//   A robot's anchor is the minimum corner of its 2x2 footprint.
//   "Lanes" are the robot's left and right halves relative to its heading;
//   each lane has a front wheel cell, a rear wheel cell, a blade cell A1
//   directly ahead of the front wheel, and the cell A2 beyond that.
//   The sensed 2x2 block ahead reads row-major from the far row: Z1 far
//   left, Z2 far right, Z3 near left, Z4 near right.
//
// Soil model: on a forward move with blade not Home, each blade cell A1
// sheds the soil standing above the plane (front-wheel height plus blade
// offset) into the cell A2 beyond it; soil at or below the plane stays.
// Volumes are integers and every operation conserves their sum. Backward
// moves trail the blade and do not touch soil.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ant/behaviors.hpp"
#include "ant/blueprint.hpp"
#include "ant/controller.hpp"
#include "ant/rng.hpp"
#include "ant/sensors.hpp"

namespace ant {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Blade capacity: pushing more than this rejects the move. Throttle Up
// doubles it for the current timestep, up to the hardware maximum of 24.
constexpr int kBladeCapacity = 12;
constexpr int kBladeCapacityThrottled = 24;

struct RobotState {
  int32_t x = 0, y = 0;  // anchor cell
  Heading heading = Heading::North;
  Blade blade = Blade::Home;
  bool memory = false;  // M1
  bool stuck = false;   // U1, true iff the previous timestep rejected a move
};

struct Worksite {
  Blueprint blueprint;
  std::vector<int32_t> height;  // soil units per cell, 0 is grade
  std::vector<RobotState> robots;
  int64_t t = 0;

  explicit Worksite(Blueprint bp)
      : blueprint(std::move(bp)),
        height(static_cast<size_t>(blueprint.width()) * blueprint.height(), 0) {}

  int32_t h(int x, int y) const {
    return height[static_cast<size_t>(y) * blueprint.width() + x];
  }
  int32_t& h(int x, int y) {
    return height[static_cast<size_t>(y) * blueprint.width() + x];
  }
};

inline int64_t total_soil(const Worksite& w) {
  int64_t s = 0;
  for (int32_t v : w.height) s += v;
  return s;
}

namespace geom {

struct Cell {
  int32_t x, y;
};

inline Cell delta(Heading h) {
  switch (h) {
    case Heading::North: return {0, -1};
    case Heading::East: return {1, 0};
    case Heading::South: return {0, 1};
    default: return {-1, 0};
  }
}

inline Heading turn(Heading h, bool right) {
  return static_cast<Heading>((static_cast<int>(h) + (right ? 1 : 3)) % 4);
}

// Front wheel cells in lane order {left, right} for a robot anchored at
// (x, y). Rear cells are the other footprint row/column.
struct Lanes {
  std::array<Cell, 2> front, rear;
};

inline Lanes lanes(const RobotState& r) {
  switch (r.heading) {
    case Heading::North:
      return {{{{r.x, r.y}, {r.x + 1, r.y}}}, {{{r.x, r.y + 1}, {r.x + 1, r.y + 1}}}};
    case Heading::South:
      return {{{{r.x + 1, r.y + 1}, {r.x, r.y + 1}}}, {{{r.x + 1, r.y}, {r.x, r.y}}}};
    case Heading::East:
      return {{{{r.x + 1, r.y}, {r.x + 1, r.y + 1}}}, {{{r.x, r.y}, {r.x, r.y + 1}}}};
    default:  // West
      return {{{{r.x, r.y + 1}, {r.x, r.y}}}, {{{r.x + 1, r.y + 1}, {r.x + 1, r.y}}}};
  }
}

inline bool footprints_overlap(int32_t ax, int32_t ay, const RobotState& b) {
  return std::abs(ax - b.x) <= 1 && std::abs(ay - b.y) <= 1;
}

// Chebyshev distance between the closest cells of two 2x2 footprints.
inline int footprint_distance(const RobotState& a, const RobotState& b) {
  const int gx = std::max(0, std::abs(a.x - b.x) - 1);
  const int gy = std::max(0, std::abs(a.y - b.y) - 1);
  return std::max(gx, gy);
}

}  // namespace geom

// Blade height offset relative to the wheel plane. Home has no offset; the
// blade is carried clear of the soil.
inline int blade_offset(Blade b) {
  switch (b) {
    case Blade::Below: return -1;
    case Blade::Above: return 1;
    default: return 0;
  }
}

// Eq.-9 blade load: soil standing above the blade's cutting plane in the two
// blade cells, clamped per cell so the result is a volume. Computed at the
// robot's current pose, before any move.
inline int blade_volume(const Worksite& w, int robot_index) {
  const RobotState& r = w.robots[robot_index];
  if (r.blade == Blade::Home) return 0;
  const auto ln = geom::lanes(r);
  const auto d = geom::delta(r.heading);
  const int bh = blade_offset(r.blade);
  int v = 0;
  for (int i = 0; i < 2; ++i) {
    const geom::Cell a1{ln.front[i].x + d.x, ln.front[i].y + d.y};
    if (!w.blueprint.in_bounds(a1.x, a1.y)) continue;
    v += std::max(0, w.h(a1.x, a1.y) - w.h(ln.front[i].x, ln.front[i].y) - bh);
  }
  return v;
}

namespace detail {

// Attempts a one-cell move. Returns false (and changes nothing) when the new
// footprint would leave the grid or overlap a robot, when a pushing blade
// would shove soil off the grid, or when the blade load exceeds capacity.
inline bool try_move(Worksite& w, int robot_index, bool forward, bool throttled) {
  RobotState& r = w.robots[robot_index];
  const auto hd = geom::delta(r.heading);
  const int sx = forward ? hd.x : -hd.x, sy = forward ? hd.y : -hd.y;
  const int32_t nx = r.x + sx, ny = r.y + sy;

  if (!w.blueprint.in_bounds(nx, ny) || !w.blueprint.in_bounds(nx + 1, ny + 1))
    return false;
  for (size_t j = 0; j < w.robots.size(); ++j)
    if (j != static_cast<size_t>(robot_index) &&
        geom::footprints_overlap(nx, ny, w.robots[j]))
      return false;

  if (forward && r.blade != Blade::Home) {
    const auto ln = geom::lanes(r);
    const int bh = blade_offset(r.blade);
    const int v = blade_volume(w, robot_index);
    if (v > (throttled ? kBladeCapacityThrottled : kBladeCapacity)) return false;
    // Eq. 8: an unloaded blade at or above the wheel plane skims without
    // engaging; any load, or a cutting blade, engages fully.
    const int eps = (v == 0 && bh >= 0) ? 0 : 1;
    geom::Cell a1[2], a2[2];
    int32_t carried[2];
    for (int i = 0; i < 2; ++i) {
      a1[i] = {ln.front[i].x + hd.x, ln.front[i].y + hd.y};
      a2[i] = {a1[i].x + hd.x, a1[i].y + hd.y};
      // The blade moves only soil standing above its plane. A lane whose
      // cell already sits at or below the plane is left alone; a deficit is
      // never backfilled from the far cell.
      const int32_t plane = w.h(ln.front[i].x, ln.front[i].y) + bh * eps;
      carried[i] = std::max<int32_t>(0, w.h(a1[i].x, a1[i].y) - plane);
      if (carried[i] > 0 && !w.blueprint.in_bounds(a2[i].x, a2[i].y))
        return false;
    }
    for (int i = 0; i < 2; ++i) {
      if (carried[i] == 0) continue;
      w.h(a2[i].x, a2[i].y) += carried[i];   // Eq. 6
      w.h(a1[i].x, a1[i].y) -= carried[i];   // Eq. 7: levelled down to the plane
    }
  }

  r.x = nx;
  r.y = ny;
  return true;
}

}  // namespace detail

// Per-robot, per-timestep execution record for observers. CorrectDump needs
// to know how a Random Turn resolved.
struct BehaviorTrace {
  bool random_turn_drawn = false;
  bool random_turn_right = false;
};

// Applies one behavior vector strictly in Table-2 order. Move failures mark
// the robot stuck for the next frame; everything else always succeeds.
inline void execute_behaviors(Worksite& w, int robot_index, const BehaviorVector& bv,
                              Rng& rng, BehaviorTrace* trace = nullptr) {
  RobotState& r = w.robots[robot_index];
  bool stuck_now = false;
  const bool throttled = bv[Behavior::ThrottleUp];
  if (bv[Behavior::MoveForward])
    if (!detail::try_move(w, robot_index, true, throttled)) stuck_now = true;
  if (bv[Behavior::MoveBackward])
    if (!detail::try_move(w, robot_index, false, throttled)) stuck_now = true;
  if (bv[Behavior::RandomTurn]) {
    // Always exactly one draw, whatever else fires this step.
    const bool right = rng.bernoulli(0.5);
    if (trace) {
      trace->random_turn_drawn = true;
      trace->random_turn_right = right;
    }
    r.heading = geom::turn(r.heading, right);
  }
  if (bv[Behavior::TurnRight]) r.heading = geom::turn(r.heading, true);
  if (bv[Behavior::TurnLeft]) r.heading = geom::turn(r.heading, false);
  if (bv[Behavior::BladeAbove]) r.blade = Blade::Above;
  if (bv[Behavior::BladeBelow]) r.blade = Blade::Below;
  if (bv[Behavior::BladeLevel]) r.blade = Blade::Level;
  if (bv[Behavior::BladeHome]) r.blade = Blade::Home;
  if (bv[Behavior::BitSet]) r.memory = true;
  if (bv[Behavior::BitClear]) r.memory = false;
  r.stuck = stuck_now;
}

inline SensorFrame sense(const Worksite& w, int robot_index) {
  const RobotState& r = w.robots[robot_index];
  const auto ln = geom::lanes(r);
  const auto d = geom::delta(r.heading);
  SensorFrame f;

  const auto zone = [&](geom::Cell c) {
    if (!w.blueprint.in_bounds(c.x, c.y)) return Zone::DontCare;
    switch (w.blueprint.kind(c.x, c.y)) {
      case CellKind::Dump: return Zone::Dump;
      case CellKind::DontCare: return Zone::DontCare;
      default: break;
    }
    const int g = w.blueprint.target(c.x, c.y);
    const int z = w.h(c.x, c.y);
    if (z > g) return Zone::Above;
    if (z < g) return Zone::Below;
    return Zone::Level;
  };

  geom::Cell a1[2], a2[2];
  for (int i = 0; i < 2; ++i) {
    a1[i] = {ln.front[i].x + d.x, ln.front[i].y + d.y};
    a2[i] = {a1[i].x + d.x, a1[i].y + d.y};
  }
  // The 2x2 scan ahead reads row-major from the far row, left to right in the
  // robot's view. Z2 and Z3 (the pair the rule programs consult) therefore
  // sit diagonally, one cell per row and per lane.
  f.z[0] = zone(a2[0]);  // Z1: far left
  f.z[1] = zone(a2[1]);  // Z2: far right
  f.z[2] = zone(a1[0]);  // Z3: near left
  f.z[3] = zone(a1[1]);  // Z4: near right

  for (int i = 0; i < 2; ++i) {
    if (!w.blueprint.in_bounds(a2[i].x, a2[i].y)) {
      f.e[i] = Edge::Level;
      continue;
    }
    const int32_t ahead = w.h(a2[i].x, a2[i].y);
    const int32_t wheel = w.h(ln.front[i].x, ln.front[i].y);
    f.e[i] = ahead > wheel ? Edge::Above : ahead < wheel ? Edge::Below : Edge::Level;
  }

  f.blade = r.blade;
  if (r.blade != Blade::Home) {
    const long v = std::lround(4.0 * blade_volume(w, robot_index) / 24.0);
    f.load = static_cast<uint8_t>(std::clamp(v, 0l, 4l));
  }

  for (int i = 0; i < 2 && !f.obstacle; ++i) {
    if (!w.blueprint.in_bounds(a1[i].x, a1[i].y)) {
      f.obstacle = true;
      break;
    }
    for (size_t j = 0; j < w.robots.size(); ++j) {
      const auto& o = w.robots[j];
      if (j != static_cast<size_t>(robot_index) && a1[i].x >= o.x &&
          a1[i].x <= o.x + 1 && a1[i].y >= o.y && a1[i].y <= o.y + 1) {
        f.obstacle = true;
        break;
      }
    }
  }

  int best = -1;
  for (size_t j = 0; j < w.robots.size(); ++j) {
    if (j == static_cast<size_t>(robot_index)) continue;
    const int dist = geom::footprint_distance(r, w.robots[j]);
    if (best < 0 || dist < geom::footprint_distance(r, w.robots[best])) {
      best = static_cast<int>(j);
    }
  }
  if (best >= 0) {
    const auto& o = w.robots[best];
    f.robot_distance = static_cast<uint8_t>(
        std::clamp(geom::footprint_distance(r, o) - 1, 0, 3));
    // Dominant-axis cardinal direction, ties resolved N > E > S > W.
    const int dx = o.x - r.x, dy = o.y - r.y;
    const int score[4] = {-dy, dx, dy, -dx};  // N E S W
    int dir = 0;
    for (int k = 1; k < 4; ++k)
      if (score[k] > score[dir]) dir = k;
    f.robot_heading = static_cast<Heading>(dir);
  }

  const int32_t front_sum = w.h(ln.front[0].x, ln.front[0].y) + w.h(ln.front[1].x, ln.front[1].y);
  const int32_t rear_sum = w.h(ln.rear[0].x, ln.rear[0].y) + w.h(ln.rear[1].x, ln.rear[1].y);
  // Front axle at least one unit deeper than the rear axle (axle depth is the
  // mean of its two wheel cells; comparison kept in integer sums).
  f.tilted = rear_sum - front_sum >= 2;
  f.stuck = r.stuck;
  f.memory = r.memory;
  return f;
}

// Eq. 5: mean of e^(-2|g-z|) over scored cells.
inline double fitness(const Worksite& w) {
  double sum = 0.0;
  size_t count = 0;
  for (int y = 0; y < w.blueprint.height(); ++y)
    for (int x = 0; x < w.blueprint.width(); ++x) {
      if (w.blueprint.kind(x, y) != CellKind::Target) continue;
      sum += std::exp(-2.0 * std::abs(w.blueprint.target(x, y) - w.h(x, y)));
      ++count;
    }
  if (count == 0) throw std::invalid_argument("fitness: blueprint has no target cells");
  return sum / static_cast<double>(count);
}

// Flat terrain, robots at random non-overlapping poses inside the excavation
// region (footprint fully on target cells). Blueprints whose target region is
// too narrow for a 2x2 footprint fall back to the whole workable
// (non-DontCare) part of the site.
inline Worksite generate_scenario(const Blueprint& bp, int n_robots, Rng& rng) {
  Worksite w(bp);
  auto anchors_where = [&](auto cell_ok) {
    std::vector<geom::Cell> out;
    for (int32_t y = 0; y + 1 < bp.height(); ++y)
      for (int32_t x = 0; x + 1 < bp.width(); ++x) {
        bool ok = true;
        for (int dy = 0; dy < 2 && ok; ++dy)
          for (int dx = 0; dx < 2 && ok; ++dx)
            if (!cell_ok(bp.kind(x + dx, y + dy))) ok = false;
        if (ok) out.push_back({x, y});
      }
    return out;
  };
  std::vector<geom::Cell> anchors =
      anchors_where([](CellKind k) { return k == CellKind::Target; });
  if (anchors.empty())
    anchors = anchors_where([](CellKind k) { return k != CellKind::DontCare; });
  if (anchors.empty())
    throw ScenarioError("no placeable robot pose, area too small");

  // Sequential random placement can wedge a crowded site (earlier robots
  // fragment the free space until no footprint fits), so a jammed layout is
  // discarded and placement restarts from an empty site. Only genuinely
  // unseatable requests exhaust the restart budget.
  constexpr int kRestarts = 64;
  constexpr int kAttemptsPerRobot = 200;
  for (int restart = 0; restart < kRestarts; ++restart) {
    w.robots.clear();
    while (static_cast<int>(w.robots.size()) < n_robots) {
      bool placed = false;
      for (int attempt = 0; attempt < kAttemptsPerRobot && !placed; ++attempt) {
        RobotState r;
        const geom::Cell a = anchors[rng.below(anchors.size())];
        r.x = a.x;
        r.y = a.y;
        r.heading = static_cast<Heading>(rng.uniform_int(0, 3));
        bool ok = true;
        for (const auto& o : w.robots)
          if (geom::footprints_overlap(r.x, r.y, o)) ok = false;
        if (ok) {
          w.robots.push_back(r);
          placed = true;
        }
      }
      if (!placed) break;
    }
    if (static_cast<int>(w.robots.size()) == n_robots) return w;
  }
  throw ScenarioError("could not place " + std::to_string(n_robots) +
                      " robots, area too small");
}

// Observation hooks. Observers never mutate the worksite; enabling them does
// not change a run.
struct StepObserver {
  virtual ~StepObserver() = default;
  virtual void on_robot_step(int robot_index, const SensorFrame& frame,
                             const BehaviorVector& bv, const BehaviorTrace& trace,
                             const std::vector<uint8_t>* decision_states) {}
  virtual void on_timestep(const Worksite& w) {}
};

// One lockstep timestep: robots sense, decide and act in index order, each
// seeing the effects of lower-indexed robots within the same step.
inline void step(Worksite& w, const std::vector<Controller*>& controllers, Rng& rng,
                 const std::vector<StepObserver*>& observers = {}) {
  for (size_t i = 0; i < w.robots.size(); ++i) {
    const SensorFrame frame = sense(w, static_cast<int>(i));
    Controller* c = controllers[i];
    const BehaviorVector bv = c->decide(frame);
    BehaviorTrace trace;
    execute_behaviors(w, static_cast<int>(i), bv, rng, &trace);
    for (auto* obs : observers)
      obs->on_robot_step(static_cast<int>(i), frame, bv, trace, c->decision_states());
  }
  ++w.t;
  for (auto* obs : observers) obs->on_timestep(w);
}

// Runs one scenario from a seed and returns the final fitness. All scenario
// randomness (robot placement, random turns) derives from scenario_seed, so
// evaluations are independent of scheduling and worker count.
inline double evaluate(Controller& controller, const Blueprint& bp, int n_robots,
                       int timesteps, uint64_t scenario_seed,
                       const std::vector<StepObserver*>& observers = {}) {
  Rng place_rng(derive_seed(scenario_seed, stream::kScenario));
  Worksite w = generate_scenario(bp, n_robots, place_rng);
  Rng behavior_rng(derive_seed(scenario_seed, stream::kBehavior));
  std::vector<Controller*> controllers(w.robots.size(), &controller);
  for (int t = 0; t < timesteps; ++t) step(w, controllers, behavior_rng, observers);
  return fitness(w);
}

}  // namespace ant
