#pragma once
// The genetic algorithm: population init, tournament selection, position
// plane crossover with the compatibility criterion, per-parameter mutation,
// gene-duplication cell replication, and the generation loop with metrics.
//
// Reproducibility contract: every random decision flows from derived seeds
// keyed by (run seed, purpose, generation, index). Evaluations are pure per
// member, so --workers only changes scheduling, never results.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ant/analysis.hpp"
#include "ant/blueprint.hpp"
#include "ant/genome.hpp"
#include "ant/parallel.hpp"
#include "ant/rng.hpp"
#include "ant/tissue.hpp"
#include "ant/util.hpp"
#include "ant/worksite.hpp"

namespace ant {

struct EvolutionConfig {
  int population = 100;
  double crossover_prob = 0.7;
  double mutation_prob = 0.025;
  double tournament_fraction = 0.06;
  int generations = 5000;
  int scenarios_per_eval = 100;
  int min_initial_neurons = 40;
  int max_initial_neurons = 120;
  bool evolvable_robot_count = false;
  // Baseline mode: all-motor genomes and ungated inference.
  bool fixed_topology = false;
  uint64_t seed = 0;

  // Task setup.
  Blueprint blueprint = Blueprint::rectangular(8, 8, 1);
  int robots = 4;
  int timesteps = 250;

  int workers = 1;
  // Re-use generation-0 scenario seeds every generation. Evaluation noise
  // vanishes, which makes the elite's fitness non-decreasing (test hook).
  bool freeze_scenarios = false;
  // Stop once a generation's best fitness reaches this value.
  std::optional<double> target_fitness;

  // Test hook: replaces simulation fitness entirely (genome, scenario seed)
  // -> fitness. Used for selection-pressure null experiments.
  std::function<double(const Genome&, uint64_t)> eval_override;

  int tournament_size() const {
    const int size = static_cast<int>(std::lround(tournament_fraction * population));
    return std::clamp(size, 1, population);
  }
};

struct EvaluatedGenome {
  Genome genome;
  double fitness = 0.0;
  std::vector<double> per_scenario;
  DetectorCounts detectors;  // summed over this member's scenarios
  int neurons = 0;           // live neuron count of the developed tissue
};

inline Genome random_genome(const EvolutionConfig& cfg, Rng& rng) {
  Genome g;
  g.replication_prob = rng.uniform();
  g.decision_ratio = cfg.fixed_topology ? 0.0 : rng.uniform();
  g.seed_index = 0;
  if (cfg.evolvable_robot_count) g.robot_count = draw_robot_count(rng);

  const int box_cells = kSeedBoxSide * kSeedBoxSide * kLayerCount;
  const int count = static_cast<int>(
      rng.uniform_int(cfg.min_initial_neurons,
                      std::min(cfg.max_initial_neurons, box_cells)));
  // Distinct positions via partial Fisher-Yates over the seed box.
  std::vector<int> slots(box_cells);
  for (int i = 0; i < box_cells; ++i) slots[i] = i;
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.below(box_cells - i));
    std::swap(slots[i], slots[j]);
  }
  for (int i = 0; i < count; ++i) {
    Gene gene;
    const int s = slots[i];
    gene.pos = {s % kSeedBoxSide, (s / kSeedBoxSide) % kSeedBoxSide,
                s / (kSeedBoxSide * kSeedBoxSide)};
    gene.kind = (!cfg.fixed_topology && rng.bernoulli(g.decision_ratio))
                    ? GeneKind::Decision
                    : GeneKind::Motor;
    randomize_gene_params(gene, rng);
    g.genes.push_back(gene);
  }
  return g;
}

inline std::vector<Genome> init_population(const EvolutionConfig& cfg) {
  std::vector<Genome> pop;
  pop.reserve(cfg.population);
  for (int i = 0; i < cfg.population; ++i) {
    Rng rng(derive_seed(cfg.seed, stream::kInit, static_cast<uint64_t>(i)));
    pop.push_back(random_genome(cfg, rng));
  }
  return pop;
}

// Uniform sample of tournament_size distinct members; highest fitness wins.
// Ties are broken uniformly at random among the tied contestants. Breaking
// toward a fixed index would let selection collapse onto a handful of members
// whenever fitness plateaus (an all-zero early population, most visibly),
// starving the drift phase of diversity.
inline int tournament_select(const std::vector<EvaluatedGenome>& pop,
                             int tournament_size, Rng& rng) {
  const int P = static_cast<int>(pop.size());
  tournament_size = std::clamp(tournament_size, 1, P);
  std::vector<int> idx(P);
  for (int i = 0; i < P; ++i) idx[i] = i;
  int best = -1;
  uint64_t tied = 0;
  for (int i = 0; i < tournament_size; ++i) {
    const int j = i + static_cast<int>(rng.below(P - i));
    std::swap(idx[i], idx[j]);
    const int cand = idx[i];
    if (best < 0 || pop[cand].fitness > pop[best].fitness) {
      best = cand;
      tied = 1;
    } else if (pop[cand].fitness == pop[best].fitness) {
      // Reservoir draw: the k-th tied candidate replaces the incumbent with
      // probability 1/k, leaving each tied member equally likely overall.
      ++tied;
      if (rng.below(tied) == 0) best = cand;
    }
  }
  return best;
}

// Position-plane crossover. One affinity bit decides which parent seeds
// which child; a cut plane with normal along the l or m axis splits the
// coordinate range; far-side genes swap between the children only when both
// children hold a gene at the same lattice position with equal expression
// status (the compatibility criterion). The children's combined gene-position
// multiset therefore always equals the parents'.
inline std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b,
                                           Rng& rng) {
  const bool affinity = rng.bernoulli(0.5);
  Genome c1 = affinity ? b : a;
  Genome c2 = affinity ? a : b;

  const bool axis_l = rng.bernoulli(0.5);
  int32_t lo = 0, hi = 0;
  bool any = false;
  for (const Genome* g : {&a, &b})
    for (const Gene& gene : g->genes) {
      const int32_t c = axis_l ? gene.pos.l : gene.pos.m;
      if (!any) {
        lo = hi = c;
        any = true;
      } else {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
    }
  if (!any || lo == hi) return {c1, c2};  // no plane can split anything

  const int32_t cut = static_cast<int32_t>(rng.uniform_int(lo + 1, hi));

  auto far_side = [&](const Genome& g) {
    std::map<LatticePos, std::vector<int>> by_pos;
    for (int i = 0; i < static_cast<int>(g.genes.size()); ++i) {
      const int32_t c = axis_l ? g.genes[i].pos.l : g.genes[i].pos.m;
      if (c >= cut) by_pos[g.genes[i].pos].push_back(i);
    }
    return by_pos;
  };
  const auto far1 = far_side(c1);
  const auto far2 = far_side(c2);
  for (const auto& [pos, idx1] : far1) {
    const auto it = far2.find(pos);
    if (it == far2.end()) continue;
    const size_t n = std::min(idx1.size(), it->second.size());
    for (size_t k = 0; k < n; ++k) {
      Gene& g1 = c1.genes[idx1[k]];
      Gene& g2 = c2.genes[it->second[k]];
      if (g1.expressed == g2.expressed) std::swap(g1, g2);
    }
  }
  return {c1, c2};
}

// Per-parameter redraw at probability pm; expression and death flags toggle
// instead. The seed gene's expression flag is exempt so every genome stays
// developable. Positions and gene kinds never mutate. Fixed-topology genomes
// keep decision_ratio pinned at 0 so daughters stay motor neurons.
inline void mutate(Genome& g, double pm, Rng& rng, bool evolvable_robot_count,
                   bool fixed_topology = false) {
  if (rng.bernoulli(pm)) g.replication_prob = rng.uniform();
  if (!fixed_topology && rng.bernoulli(pm)) g.decision_ratio = rng.uniform();
  if (evolvable_robot_count && g.robot_count && rng.bernoulli(pm))
    g.robot_count = draw_robot_count(rng);

  for (int i = 0; i < static_cast<int>(g.genes.size()); ++i) {
    Gene& gene = g.genes[i];
    for (auto& w : gene.sensor)
      if (rng.bernoulli(pm)) w = draw_weight(rng);
    if (rng.bernoulli(pm)) gene.act.theta1 = draw_threshold(rng);
    if (rng.bernoulli(pm)) gene.act.theta2 = draw_threshold(rng);
    if (rng.bernoulli(pm)) gene.act.k1 = draw_kbit(rng);
    if (rng.bernoulli(pm)) gene.act.k2 = draw_kbit(rng);
    if (gene.kind == GeneKind::Motor) {
      for (auto& w : gene.nominal)
        if (rng.bernoulli(pm)) w = draw_weight(rng);
      if (rng.bernoulli(pm)) gene.output_binding = draw_binding(rng);
    } else {
      if (rng.bernoulli(pm)) gene.concentration = draw_concentration(rng);
      for (auto& d : gene.extent)
        if (rng.bernoulli(pm)) d = draw_extent(rng);
    }
    if (i != g.seed_index && rng.bernoulli(pm)) gene.expressed = !gene.expressed;
    if (rng.bernoulli(pm)) gene.dead = !gene.dead;
  }
}

namespace detail {

// Aligned parameter copy for gene duplication. The common prefix (sensor
// weights, thresholds, k-bits) lines up across kinds; the kind-specific tail
// only copies between like kinds.
inline void copy_prefix(const Gene& parent, Gene& daughter, double m_fraction) {
  constexpr int kCommon = kInputCount + 4;
  const int total = kCommon + (daughter.kind == GeneKind::Motor ? 10 : 4);
  const int n_copy = static_cast<int>(std::lround(m_fraction * total));
  for (int j = 0; j < n_copy; ++j) {
    if (j < kInputCount) {
      daughter.sensor[j] = parent.sensor[j];
    } else if (j < kCommon) {
      switch (j - kInputCount) {
        case 0: daughter.act.theta1 = parent.act.theta1; break;
        case 1: daughter.act.theta2 = parent.act.theta2; break;
        case 2: daughter.act.k1 = parent.act.k1; break;
        default: daughter.act.k2 = parent.act.k2; break;
      }
    } else if (parent.kind == daughter.kind) {
      const int k = j - kCommon;
      if (daughter.kind == GeneKind::Motor) {
        if (k < 9)
          daughter.nominal[k] = parent.nominal[k];
        else
          daughter.output_binding = parent.output_binding;
      } else {
        if (k == 0)
          daughter.concentration = parent.concentration;
        else
          daughter.extent[k - 1] = parent.extent[k - 1];
      }
    }
  }
}

}  // namespace detail

// Gene duplication: with probability Tr, a uniformly chosen expressed gene
// spawns a daughter in a free face neighbor of its cell (layer range
// respected). The daughter copies an m% parameter prefix from its parent and
// keeps fresh draws for the rest. No per-gene replication weights exist in
// this genome format, so parent choice is uniform.
inline void replicate_cell(Genome& g, Rng& rng) {
  if (!rng.bernoulli(g.replication_prob)) return;
  std::vector<int> expressed;
  for (int i = 0; i < static_cast<int>(g.genes.size()); ++i)
    if (g.genes[i].expressed) expressed.push_back(i);
  if (expressed.empty()) return;
  const int parent_idx = expressed[rng.below(expressed.size())];
  const Gene& parent = g.genes[parent_idx];

  const auto placed = detail::place_genes(g);
  const std::array<LatticePos, 6> around = {{
      {parent.pos.l, parent.pos.m, parent.pos.n + 1},
      {parent.pos.l, parent.pos.m, parent.pos.n - 1},
      {parent.pos.l, parent.pos.m - 1, parent.pos.n},
      {parent.pos.l, parent.pos.m + 1, parent.pos.n},
      {parent.pos.l + 1, parent.pos.m, parent.pos.n},
      {parent.pos.l - 1, parent.pos.m, parent.pos.n},
  }};
  std::vector<LatticePos> free_slots;
  for (const auto& p : around)
    if (p.n >= 0 && p.n < kLayerCount && !placed.count(p)) free_slots.push_back(p);
  if (free_slots.empty()) return;  // fully enclosed, no insertion this call

  Gene daughter;
  daughter.pos = free_slots[rng.below(free_slots.size())];
  daughter.kind = rng.bernoulli(g.decision_ratio) ? GeneKind::Decision : GeneKind::Motor;
  randomize_gene_params(daughter, rng);
  detail::copy_prefix(parent, daughter, rng.uniform(0.5, 1.0));
  g.genes.push_back(daughter);
}

struct GenerationMetrics {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  int best_neurons = 0;
  std::optional<int> best_robots;
  DetectorCounts best_detectors;
};

inline std::string metrics_csv_header(bool evolvable_robot_count) {
  std::string h = "generation,best_fitness,mean_fitness,best_neurons";
  if (evolvable_robot_count) h += ",best_robots";
  h += ",det_level,det_collision_avoidance,det_stuck_avoidance,det_cut_dig,det_correct_dump";
  return h + "\n";
}

inline std::string metrics_csv_row(const GenerationMetrics& m,
                                   bool evolvable_robot_count) {
  std::string r = std::to_string(m.generation) + "," + fmt_g17(m.best_fitness) +
                  "," + fmt_g17(m.mean_fitness) + "," + std::to_string(m.best_neurons);
  if (evolvable_robot_count) r += "," + std::to_string(m.best_robots.value_or(0));
  const auto& d = m.best_detectors;
  for (uint64_t c : {d.level, d.collision_avoidance, d.stuck_avoidance, d.cut_dig,
                     d.correct_dump})
    r += "," + std::to_string(c);
  return r + "\n";
}

// Scenario seed shared by every member of one generation (common random
// numbers). With freeze_scenarios the seeds stop depending on the generation.
inline uint64_t scenario_seed(const EvolutionConfig& cfg, int generation,
                              int scenario_index) {
  const uint64_t g = cfg.freeze_scenarios ? 0 : static_cast<uint64_t>(generation);
  return derive_seed(cfg.seed, stream::kScenario, g,
                     static_cast<uint64_t>(scenario_index));
}

inline EvaluatedGenome evaluate_member(const EvolutionConfig& cfg, Genome genome,
                                       int generation) {
  EvaluatedGenome ev;
  ev.genome = std::move(genome);
  if (cfg.eval_override) {
    for (int j = 0; j < cfg.scenarios_per_eval; ++j)
      ev.per_scenario.push_back(
          cfg.eval_override(ev.genome, scenario_seed(cfg, generation, j)));
  } else {
    const Tissue tissue = Tissue::develop(ev.genome);
    ev.neurons = static_cast<int>(tissue.neuron_count());
    AntController controller(tissue, !cfg.fixed_topology);
    DetectorObserver detectors;
    const int robots = (cfg.evolvable_robot_count && ev.genome.robot_count)
                           ? *ev.genome.robot_count
                           : cfg.robots;
    for (int j = 0; j < cfg.scenarios_per_eval; ++j)
      ev.per_scenario.push_back(evaluate(controller, cfg.blueprint, robots,
                                         cfg.timesteps,
                                         scenario_seed(cfg, generation, j),
                                         {&detectors}));
    ev.detectors = detectors.counts;
  }
  double sum = 0.0;
  for (double f : ev.per_scenario) sum += f;
  ev.fitness = ev.per_scenario.empty() ? 0.0 : sum / ev.per_scenario.size();
  return ev;
}

inline std::vector<EvaluatedGenome> evaluate_population(
    const EvolutionConfig& cfg, const std::vector<Genome>& pop, int generation) {
  std::vector<EvaluatedGenome> out(pop.size());
  parallel_for(pop.size(), cfg.workers, [&](size_t i) {
    out[i] = evaluate_member(cfg, pop[i], generation);
  });
  return out;
}

inline int best_index(const std::vector<EvaluatedGenome>& pop) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(pop.size()); ++i)
    if (pop[i].fitness > pop[best].fitness) best = i;
  return best;
}

inline GenerationMetrics make_metrics(const std::vector<EvaluatedGenome>& evaluated,
                                      int generation) {
  GenerationMetrics m;
  m.generation = generation;
  const int bi = best_index(evaluated);
  m.best_fitness = evaluated[bi].fitness;
  double sum = 0.0;
  for (const auto& e : evaluated) sum += e.fitness;
  m.mean_fitness = sum / evaluated.size();
  m.best_neurons = evaluated[bi].neurons;
  m.best_robots = evaluated[bi].genome.robot_count;
  m.best_detectors = evaluated[bi].detectors;
  return m;
}

// One selection/variation cycle over an evaluated population. The elite (best
// member, lowest index on ties) passes through unchanged.
inline std::vector<Genome> next_generation(const EvolutionConfig& cfg,
                                           const std::vector<EvaluatedGenome>& pop,
                                           int generation) {
  Rng rng(derive_seed(cfg.seed, stream::kEvolve, static_cast<uint64_t>(generation)));
  std::vector<Genome> next;
  next.reserve(cfg.population);
  next.push_back(pop[best_index(pop)].genome);
  const int tsize = cfg.tournament_size();
  while (static_cast<int>(next.size()) < cfg.population) {
    const int ia = tournament_select(pop, tsize, rng);
    const int ib = tournament_select(pop, tsize, rng);
    Genome ca, cb;
    if (rng.bernoulli(cfg.crossover_prob)) {
      auto [x, y] = crossover(pop[ia].genome, pop[ib].genome, rng);
      ca = std::move(x);
      cb = std::move(y);
    } else {
      ca = pop[ia].genome;
      cb = pop[ib].genome;
    }
    for (Genome* child : {&ca, &cb}) {
      mutate(*child, cfg.mutation_prob, rng, cfg.evolvable_robot_count,
             cfg.fixed_topology);
      replicate_cell(*child, rng);
    }
    next.push_back(std::move(ca));
    if (static_cast<int>(next.size()) < cfg.population) next.push_back(std::move(cb));
  }
  return next;
}

inline std::pair<std::vector<Genome>, GenerationMetrics> run_generation(
    const EvolutionConfig& cfg, const std::vector<Genome>& pop, int generation) {
  const auto evaluated = evaluate_population(cfg, pop, generation);
  return {next_generation(cfg, evaluated, generation),
          make_metrics(evaluated, generation)};
}

struct TrainResult {
  std::vector<GenerationMetrics> rows;  // rows[0] is the initial evaluation
  Genome best_genome;                   // member achieving the best recorded fitness
  double best_fitness = 0.0;
  bool reached_target = false;
};

// Full training loop. Generation g is evaluated and recorded, then bred into
// generation g+1; `generations` counts breeding cycles, so the metrics hold
// generations+1 rows (or fewer when target_fitness stops the run early).
inline TrainResult train(
    const EvolutionConfig& cfg,
    const std::function<void(int, const GenerationMetrics&, const Genome&)>&
        on_generation = {}) {
  TrainResult result;
  std::vector<Genome> pop = init_population(cfg);
  bool have_best = false;
  for (int gen = 0;; ++gen) {
    const auto evaluated = evaluate_population(cfg, pop, gen);
    const GenerationMetrics m = make_metrics(evaluated, gen);
    result.rows.push_back(m);
    const int bi = best_index(evaluated);
    if (!have_best || evaluated[bi].fitness > result.best_fitness) {
      result.best_fitness = evaluated[bi].fitness;
      result.best_genome = evaluated[bi].genome;
      have_best = true;
    }
    if (on_generation) on_generation(gen, m, evaluated[bi].genome);
    if (cfg.target_fitness && m.best_fitness >= *cfg.target_fitness) {
      result.reached_target = true;
      break;
    }
    if (gen == cfg.generations) break;
    pop = next_generation(cfg, evaluated, gen);
  }
  return result;
}

}  // namespace ant
