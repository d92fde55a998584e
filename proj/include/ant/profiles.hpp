#pragma once
// Named GA setting bundles shared by the CLI and the acceptance suite.
//
// The paper profile reproduces the published training protocol. The desk
// profile is sized for acceptance runs on one workstation; its selection and
// variation knobs differ from the paper values because a 40-member population
// evaluated on 10 scenarios needs stronger selection pressure and a larger
// initial tissue to make progress within 800 generations.

#include "ant/evolution.hpp"

namespace ant {

struct GaProfile {
  int population;
  int generations;
  int scenarios;
  double crossover_prob;
  double mutation_prob;
  double tournament_fraction;
  int neurons_min;
  int neurons_max;
  bool freeze_scenarios;
};

inline constexpr GaProfile kDeskProfile{40, 800, 10, 0.7, 0.025, 0.25, 80, 160, false};
inline constexpr GaProfile kPaperProfile{100, 5000, 100, 0.7, 0.025, 0.06, 40, 120, false};

inline void apply_profile(const GaProfile& p, EvolutionConfig& cfg) {
  cfg.population = p.population;
  cfg.generations = p.generations;
  cfg.scenarios_per_eval = p.scenarios;
  cfg.crossover_prob = p.crossover_prob;
  cfg.mutation_prob = p.mutation_prob;
  cfg.tournament_fraction = p.tournament_fraction;
  cfg.min_initial_neurons = p.neurons_min;
  cfg.max_initial_neurons = p.neurons_max;
  cfg.freeze_scenarios = p.freeze_scenarios;
}

}  // namespace ant
