#pragma once
// Evaluation instrumentation. Sensor-behavior detectors classify each robot
// step into task-competence categories; observers aggregate them without
// touching simulation state. Also: decision-neuron activity logging, the
// evolvable-robot-count histogram with a chi-square uniformity statistic,
// and scalability sweeps over (robots, area, depth) grids.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ant/behaviors.hpp"
#include "ant/blueprint.hpp"
#include "ant/genome.hpp"
#include "ant/parallel.hpp"
#include "ant/rng.hpp"
#include "ant/sensors.hpp"
#include "ant/tissue.hpp"
#include "ant/util.hpp"
#include "ant/worksite.hpp"

namespace ant {

// One flag per detector. Indices match the detector table (1..5).
struct DetectorFlags {
  bool level = false;
  bool collision_avoidance = false;
  bool stuck_avoidance = false;
  bool cut_dig = false;
  bool correct_dump = false;
};

struct DetectorCounts {
  uint64_t level = 0;
  uint64_t collision_avoidance = 0;
  uint64_t stuck_avoidance = 0;
  uint64_t cut_dig = 0;
  uint64_t correct_dump = 0;

  DetectorCounts& operator+=(const DetectorFlags& f) {
    level += f.level;
    collision_avoidance += f.collision_avoidance;
    stuck_avoidance += f.stuck_avoidance;
    cut_dig += f.cut_dig;
    correct_dump += f.correct_dump;
    return *this;
  }
  DetectorCounts& operator+=(const DetectorCounts& o) {
    level += o.level;
    collision_avoidance += o.collision_avoidance;
    stuck_avoidance += o.stuck_avoidance;
    cut_dig += o.cut_dig;
    correct_dump += o.correct_dump;
    return *this;
  }
};

// Detector predicates over one robot step. CorrectDump's turning disjuncts
// depend on which direction the random-turn draw resolved to, which only the
// execution trace knows.
inline DetectorFlags detect(const SensorFrame& frame, const BehaviorVector& bv,
                            const BehaviorTrace& trace) {
  DetectorFlags f;
  const bool mf = bv[Behavior::MoveForward];
  const bool mb = bv[Behavior::MoveBackward];
  const bool rt = bv[Behavior::RandomTurn];
  const bool tr = bv[Behavior::TurnRight];
  const bool tl = bv[Behavior::TurnLeft];

  f.level = frame.blade == Blade::Level && frame.load > 0 && mf;
  f.collision_avoidance = frame.obstacle && !mf && !rt && (tr != tl || mb);
  f.stuck_avoidance = frame.stuck && !mf && (mb || rt || tl != tr);
  f.cut_dig = frame.blade == Blade::Below && mf;

  const bool dump_ahead =
      frame.z[1] == Zone::Dump && frame.z[2] == Zone::Dump && frame.load > 0;
  const bool drew_left = trace.random_turn_drawn && !trace.random_turn_right;
  const bool drew_right = trace.random_turn_drawn && trace.random_turn_right;
  f.correct_dump =
      dump_ahead && ((!rt && mf && tl == tr) ||
                     (rt && drew_left && tr && !tl && mf) ||
                     (rt && drew_right && !tr && tl && mf));
  return f;
}

// Accumulates detector counts over every robot step it observes.
struct DetectorObserver : StepObserver {
  DetectorCounts counts;
  void on_robot_step(int, const SensorFrame& frame, const BehaviorVector& bv,
                     const BehaviorTrace& trace,
                     const std::vector<uint8_t>*) override {
    counts += detect(frame, bv, trace);
  }
};

// Records decision-neuron states as a bitmatrix: one row per observed robot
// step (execution order), one column per decision neuron. Rows are plain
// '0'/'1' strings so the file stays a greppable ASCII matrix.
struct ActivityLogObserver : StepObserver {
  std::vector<std::string> rows;
  std::vector<uint64_t> on_counts;
  uint64_t samples = 0;

  void on_robot_step(int, const SensorFrame&, const BehaviorVector&,
                     const BehaviorTrace&,
                     const std::vector<uint8_t>* states) override {
    if (!states) return;
    if (on_counts.size() < states->size()) on_counts.resize(states->size(), 0);
    std::string row(states->size(), '0');
    for (size_t i = 0; i < states->size(); ++i)
      if ((*states)[i]) {
        row[i] = '1';
        ++on_counts[i];
      }
    rows.push_back(std::move(row));
    ++samples;
  }

  std::string to_ascii() const {
    std::string out;
    for (const auto& r : rows) {
      out += r;
      out += '\n';
    }
    return out;
  }

  // Fraction of observed steps each decision neuron spent active.
  std::vector<double> duty_cycles() const {
    std::vector<double> d(on_counts.size(), 0.0);
    if (samples == 0) return d;
    for (size_t i = 0; i < d.size(); ++i)
      d[i] = static_cast<double>(on_counts[i]) / static_cast<double>(samples);
    return d;
  }
};

namespace detail {

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// series expansion for x < a+1 and continued fraction otherwise.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Upper regularized incomplete gamma Q(a, x), a > 0, x >= 0.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

// Survival probability of a chi-square statistic with `dof` degrees of
// freedom: P(X >= stat).
inline double chi_square_p_value(double stat, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_p_value dof");
  if (stat < 0.0) return 1.0;
  return gamma_q(dof / 2.0, stat / 2.0);
}

// Histogram of population-best robot counts over independent runs, with the
// chi-square statistic against the uniform null over N in [1, 10].
struct RobotCountHistogram {
  std::array<int, kMaxRobots> bins{};  // bins[k] counts N == k+1
  int runs = 0;
  double chi_square = 0.0;
  double p_value = 1.0;
};

inline RobotCountHistogram robot_count_histogram(const std::vector<int>& best_n) {
  if (best_n.empty())
    throw std::invalid_argument("robot_count_histogram: no runs supplied");
  RobotCountHistogram h;
  for (int n : best_n) {
    if (n < kMinRobots || n > kMaxRobots)
      throw std::invalid_argument("robot_count_histogram: N out of range");
    ++h.bins[n - 1];
  }
  h.runs = static_cast<int>(best_n.size());
  const double expected = static_cast<double>(h.runs) / kMaxRobots;
  for (int k = 0; k < kMaxRobots; ++k) {
    const double d = h.bins[k] - expected;
    h.chi_square += d * d / expected;
  }
  h.p_value = chi_square_p_value(h.chi_square, kMaxRobots - 1);
  return h;
}

struct SweepCell {
  int robots = 0;
  int area_w = 0;
  int area_h = 0;
  int depth = 0;
  int reps = 0;
  uint64_t seed_base = 0;
  double mean_fitness = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 when reps < 2
};

struct SweepResult {
  std::vector<SweepCell> cells;

  bool operator==(const SweepResult& o) const {
    if (cells.size() != o.cells.size()) return false;
    for (size_t i = 0; i < cells.size(); ++i) {
      const auto& a = cells[i];
      const auto& b = o.cells[i];
      if (a.robots != b.robots || a.area_w != b.area_w || a.area_h != b.area_h ||
          a.depth != b.depth || a.reps != b.reps || a.seed_base != b.seed_base ||
          a.mean_fitness != b.mean_fitness || a.stddev != b.stddev)
        return false;
    }
    return true;
  }
};

// Controllers are rebuilt per cell via the factory so parallel cells never
// share mutable controller state (the ANT controller memoizes inference).
using ControllerFactory = std::function<std::unique_ptr<Controller>()>;

inline SweepResult scalability_sweep(const ControllerFactory& make_controller,
                                     const std::vector<int>& robots_list,
                                     const std::vector<std::pair<int, int>>& areas,
                                     const std::vector<int>& depths, int reps,
                                     int timesteps, uint64_t seed,
                                     int workers = 1) {
  SweepResult result;
  if (reps <= 0) return result;
  for (int r : robots_list)
    for (const auto& [w, h] : areas)
      for (int d : depths) {
        SweepCell cell;
        cell.robots = r;
        cell.area_w = w;
        cell.area_h = h;
        cell.depth = d;
        cell.reps = reps;
        cell.seed_base = derive_seed(seed, stream::kSweep,
                                     static_cast<uint64_t>(result.cells.size()));
        result.cells.push_back(cell);
      }
  parallel_for(result.cells.size(), workers, [&](size_t i) {
    SweepCell& cell = result.cells[i];
    const Blueprint bp = Blueprint::rectangular(cell.area_w, cell.area_h, cell.depth);
    const auto controller = make_controller();
    double sum = 0.0, sq = 0.0;
    for (int rep = 0; rep < cell.reps; ++rep) {
      const double f =
          evaluate(*controller, bp, cell.robots, timesteps,
                   derive_seed(cell.seed_base, static_cast<uint64_t>(rep)));
      sum += f;
      sq += f * f;
    }
    cell.mean_fitness = sum / cell.reps;
    if (cell.reps > 1) {
      const double var =
          (sq - sum * sum / cell.reps) / (cell.reps - 1);
      cell.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
    }
  });
  return result;
}

inline SweepResult scalability_sweep(const Genome& genome,
                                     const std::vector<int>& robots_list,
                                     const std::vector<std::pair<int, int>>& areas,
                                     const std::vector<int>& depths, int reps,
                                     int timesteps, uint64_t seed,
                                     int workers = 1, bool gated = true) {
  return scalability_sweep(
      [&genome, gated]() -> std::unique_ptr<Controller> {
        return std::make_unique<AntController>(Tissue::develop(genome), gated);
      },
      robots_list, areas, depths, reps, timesteps, seed, workers);
}

inline std::string sweep_csv(const SweepResult& r) {
  std::string out = "robots,area_w,area_h,depth,reps,mean_fitness,stddev\n";
  for (const auto& c : r.cells) {
    out += std::to_string(c.robots) + "," + std::to_string(c.area_w) + "," +
           std::to_string(c.area_h) + "," + std::to_string(c.depth) + "," +
           std::to_string(c.reps) + "," + fmt_g17(c.mean_fitness) + "," +
           fmt_g17(c.stddev) + "\n";
  }
  return out;
}

}  // namespace ant
