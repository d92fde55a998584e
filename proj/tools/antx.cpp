// antx: command-line front end. Subcommands: train, eval, sweep, analyze.
//
// Every run is fully determined by its resolved configuration (written to
// <out>/config.json); re-running with --config <that file> reproduces the
// same artifacts. Randomness flows from --seed only.
//
// Flag precedence, lowest to highest: built-in desk defaults, --config file,
// --profile (when given on the command line), explicit flags.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ant/analysis.hpp"
#include "ant/baselines.hpp"
#include "ant/blueprint.hpp"
#include "ant/evolution.hpp"
#include "ant/genome_json.hpp"
#include "ant/profiles.hpp"
#include "ant/rng.hpp"
#include "ant/tissue.hpp"
#include "ant/util.hpp"
#include "ant/worksite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  uint64_t seed = 0;
  int robots = 4;
  int area_w = 8;
  int area_h = 8;
  int depth = 1;
  int timesteps = 250;
  int scenarios = ant::kDeskProfile.scenarios;
  std::string blueprint;  // file path; empty = rectangular(area, depth)
  std::string out = "runs/default";
  int workers = 1;
  std::string profile = "desk";

  // train; defaults mirror the desk profile so a bare `antx train` and
  // `antx train --profile desk` resolve identically
  int population = ant::kDeskProfile.population;
  int generations = ant::kDeskProfile.generations;
  double crossover_prob = ant::kDeskProfile.crossover_prob;
  double mutation_prob = ant::kDeskProfile.mutation_prob;
  double tournament_fraction = ant::kDeskProfile.tournament_fraction;
  int neurons_min = ant::kDeskProfile.neurons_min;
  int neurons_max = ant::kDeskProfile.neurons_max;
  bool evolvable_robots = false;
  std::string controller = "ant";  // ant | fixed | handcoded
  int checkpoint_interval = 0;     // generations between checkpoints, 0 = off
  double target_fitness = -1.0;    // < 0 = off
  bool freeze_scenarios = ant::kDeskProfile.freeze_scenarios;

  // eval
  int snapshot_interval = 0;  // timesteps between heightfield snapshots, 0 = off
  std::string genome;         // genome file for eval/sweep
  std::string activity_log;   // bitmatrix output path, empty = off

  // sweep
  std::string robots_list = "1,2,3,4,5,6,7,8,9,10";
  std::string areas = "8x8";
  std::string depths = "1";
  int reps = 10;
};

json config_to_json(const RunConfig& c) {
  return json{{"seed", c.seed},
              {"robots", c.robots},
              {"area_w", c.area_w},
              {"area_h", c.area_h},
              {"depth", c.depth},
              {"timesteps", c.timesteps},
              {"scenarios", c.scenarios},
              {"blueprint", c.blueprint},
              {"out", c.out},
              {"workers", c.workers},
              {"profile", c.profile},
              {"population", c.population},
              {"generations", c.generations},
              {"crossover_prob", c.crossover_prob},
              {"mutation_prob", c.mutation_prob},
              {"tournament_fraction", c.tournament_fraction},
              {"neurons_min", c.neurons_min},
              {"neurons_max", c.neurons_max},
              {"evolvable_robots", c.evolvable_robots},
              {"controller", c.controller},
              {"checkpoint_interval", c.checkpoint_interval},
              {"target_fitness", c.target_fitness},
              {"freeze_scenarios", c.freeze_scenarios},
              {"snapshot_interval", c.snapshot_interval},
              {"genome", c.genome},
              {"activity_log", c.activity_log},
              {"robots_list", c.robots_list},
              {"areas", c.areas},
              {"depths", c.depths},
              {"reps", c.reps}};
}

// Assigns only keys present in j and not explicitly set on the command line.
void overlay_config(const json& j, RunConfig& c,
                    const std::map<std::string, CLI::Option*>& opts) {
  auto fresh = [&](const char* key) {
    if (!j.contains(key)) return false;
    auto it = opts.find(key);
    return it == opts.end() || it->second->count() == 0;
  };
  if (fresh("seed")) c.seed = j["seed"].get<uint64_t>();
  if (fresh("robots")) c.robots = j["robots"].get<int>();
  if (fresh("area_w")) c.area_w = j["area_w"].get<int>();
  if (fresh("area_h")) c.area_h = j["area_h"].get<int>();
  if (fresh("depth")) c.depth = j["depth"].get<int>();
  if (fresh("timesteps")) c.timesteps = j["timesteps"].get<int>();
  if (fresh("scenarios")) c.scenarios = j["scenarios"].get<int>();
  if (fresh("blueprint")) c.blueprint = j["blueprint"].get<std::string>();
  if (fresh("out")) c.out = j["out"].get<std::string>();
  if (fresh("workers")) c.workers = j["workers"].get<int>();
  if (fresh("profile")) c.profile = j["profile"].get<std::string>();
  if (fresh("population")) c.population = j["population"].get<int>();
  if (fresh("generations")) c.generations = j["generations"].get<int>();
  if (fresh("crossover_prob")) c.crossover_prob = j["crossover_prob"].get<double>();
  if (fresh("mutation_prob")) c.mutation_prob = j["mutation_prob"].get<double>();
  if (fresh("tournament_fraction"))
    c.tournament_fraction = j["tournament_fraction"].get<double>();
  if (fresh("neurons_min")) c.neurons_min = j["neurons_min"].get<int>();
  if (fresh("neurons_max")) c.neurons_max = j["neurons_max"].get<int>();
  if (fresh("evolvable_robots")) c.evolvable_robots = j["evolvable_robots"].get<bool>();
  if (fresh("controller")) c.controller = j["controller"].get<std::string>();
  if (fresh("checkpoint_interval"))
    c.checkpoint_interval = j["checkpoint_interval"].get<int>();
  if (fresh("target_fitness")) c.target_fitness = j["target_fitness"].get<double>();
  if (fresh("freeze_scenarios")) c.freeze_scenarios = j["freeze_scenarios"].get<bool>();
  if (fresh("snapshot_interval"))
    c.snapshot_interval = j["snapshot_interval"].get<int>();
  if (fresh("genome")) c.genome = j["genome"].get<std::string>();
  if (fresh("activity_log")) c.activity_log = j["activity_log"].get<std::string>();
  if (fresh("robots_list")) c.robots_list = j["robots_list"].get<std::string>();
  if (fresh("areas")) c.areas = j["areas"].get<std::string>();
  if (fresh("depths")) c.depths = j["depths"].get<std::string>();
  if (fresh("reps")) c.reps = j["reps"].get<int>();
}

// One subcommand's flag bindings. Keys mirror the config JSON.
struct FlagBinder {
  CLI::App* cmd;
  RunConfig* cfg;
  std::map<std::string, CLI::Option*> opts;
  std::string config_path;
  std::string area_spec;  // staging for --area WxH

  void add_shared() {
    opts["seed"] = cmd->add_option("--seed", cfg->seed, "run seed (all randomness)");
    opts["robots"] = cmd->add_option("--robots", cfg->robots, "robots per scenario");
    opts["area"] = cmd->add_option("--area", area_spec, "excavation area, WxH");
    opts["depth"] = cmd->add_option("--depth", cfg->depth, "goal depth, soil units");
    opts["timesteps"] =
        cmd->add_option("--timesteps", cfg->timesteps, "timesteps per scenario");
    opts["scenarios"] =
        cmd->add_option("--scenarios", cfg->scenarios, "scenarios per evaluation");
    opts["blueprint"] = cmd->add_option("--blueprint", cfg->blueprint,
                                        "blueprint file (overrides --area/--depth)");
    opts["out"] = cmd->add_option("--out", cfg->out, "output directory");
    opts["workers"] =
        cmd->add_option("--workers", cfg->workers, "parallel evaluation workers");
    opts["profile"] = cmd->add_option("--profile", cfg->profile,
                                      "desk (P=40, 800 gen, 10 scen) or paper "
                                      "(P=100, 5000 gen, 100 scen)")
                          ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--config", config_path, "resolved-config JSON to load");
  }

  void add_train() {
    opts["population"] =
        cmd->add_option("--population", cfg->population, "population size");
    opts["generations"] =
        cmd->add_option("--generations", cfg->generations, "breeding cycles");
    opts["crossover_prob"] =
        cmd->add_option("--crossover-prob", cfg->crossover_prob, "crossover rate");
    opts["mutation_prob"] =
        cmd->add_option("--mutation-prob", cfg->mutation_prob, "per-parameter rate");
    opts["tournament_fraction"] = cmd->add_option(
        "--tournament-fraction", cfg->tournament_fraction, "tournament size / P");
    opts["neurons_min"] = cmd->add_option("--neurons-min", cfg->neurons_min,
                                          "initial neuron count, lower bound");
    opts["neurons_max"] = cmd->add_option("--neurons-max", cfg->neurons_max,
                                          "initial neuron count, upper bound");
    opts["evolvable_robots"] = cmd->add_flag("--evolvable-robots",
                                             cfg->evolvable_robots,
                                             "evolve the robot count gene");
    opts["checkpoint_interval"] = cmd->add_option(
        "--checkpoint-interval", cfg->checkpoint_interval,
        "generations between genome checkpoints, 0 = off");
    opts["target_fitness"] = cmd->add_option("--target-fitness", cfg->target_fitness,
                                             "stop early at this best fitness");
    opts["freeze_scenarios"] = cmd->add_flag(
        "--freeze-scenarios", cfg->freeze_scenarios,
        "reuse generation-0 scenarios every generation");
  }

  void add_controller() {
    opts["controller"] =
        cmd->add_option("--controller", cfg->controller, "ant | fixed | handcoded")
            ->check(CLI::IsMember({"ant", "fixed", "handcoded"}));
  }

  // Layering below explicit flags: config file, then profile.
  void resolve() {
    if (!config_path.empty()) {
      json j;
      try {
        j = json::parse(ant::read_file(config_path));
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
      }
      overlay_config(j, *cfg, opts);
    }
    if (opts.count("profile") && opts["profile"]->count() > 0) {
      auto fresh = [&](const char* key) {
        auto it = opts.find(key);
        return it == opts.end() || it->second->count() == 0;
      };
      const ant::GaProfile& p =
          cfg->profile == "paper" ? ant::kPaperProfile : ant::kDeskProfile;
      if (fresh("population")) cfg->population = p.population;
      if (fresh("generations")) cfg->generations = p.generations;
      if (fresh("scenarios")) cfg->scenarios = p.scenarios;
      if (fresh("crossover_prob")) cfg->crossover_prob = p.crossover_prob;
      if (fresh("mutation_prob")) cfg->mutation_prob = p.mutation_prob;
      if (fresh("tournament_fraction"))
        cfg->tournament_fraction = p.tournament_fraction;
      if (fresh("neurons_min")) cfg->neurons_min = p.neurons_min;
      if (fresh("neurons_max")) cfg->neurons_max = p.neurons_max;
      if (fresh("freeze_scenarios")) cfg->freeze_scenarios = p.freeze_scenarios;
    }
    if (opts["area"]->count() > 0) {
      const auto parts = ant::split(area_spec, 'x');
      if (parts.size() != 2)
        throw std::runtime_error("--area expects WxH, got: " + area_spec);
      cfg->area_w = std::stoi(parts[0]);
      cfg->area_h = std::stoi(parts[1]);
    }
  }
};

ant::Blueprint load_blueprint(const RunConfig& c) {
  if (!c.blueprint.empty())
    return ant::Blueprint::parse(ant::read_file(c.blueprint));
  return ant::Blueprint::rectangular(c.area_w, c.area_h, c.depth);
}

ant::EvolutionConfig to_evolution_config(const RunConfig& c) {
  ant::EvolutionConfig ec;
  ec.population = c.population;
  ec.crossover_prob = c.crossover_prob;
  ec.mutation_prob = c.mutation_prob;
  ec.tournament_fraction = c.tournament_fraction;
  ec.generations = c.generations;
  ec.scenarios_per_eval = c.scenarios;
  ec.min_initial_neurons = c.neurons_min;
  ec.max_initial_neurons = c.neurons_max;
  ec.evolvable_robot_count = c.evolvable_robots;
  ec.fixed_topology = c.controller == "fixed";
  ec.seed = c.seed;
  ec.blueprint = load_blueprint(c);
  ec.robots = c.robots;
  ec.timesteps = c.timesteps;
  ec.workers = c.workers;
  ec.freeze_scenarios = c.freeze_scenarios;
  if (c.target_fitness >= 0.0) ec.target_fitness = c.target_fitness;
  return ec;
}

ant::Genome load_genome_file(const std::string& path) {
  if (path.empty())
    throw std::runtime_error("a genome file is required (--genome PATH)");
  return ant::genome_from_string(ant::read_file(path));
}

void write_resolved_config(const RunConfig& c) {
  ant::write_file(c.out + "/config.json", config_to_json(c).dump(1) + "\n");
}

std::string heightfield_ascii(const ant::Worksite& w) {
  std::string s;
  for (int y = 0; y < w.blueprint.height(); ++y) {
    for (int x = 0; x < w.blueprint.width(); ++x) {
      if (x) s += ' ';
      s += std::to_string(w.h(x, y));
    }
    s += '\n';
  }
  return s;
}

struct SnapshotObserver : ant::StepObserver {
  std::string dir;
  int interval = 0;
  int scenario = 0;
  void on_timestep(const ant::Worksite& w) override {
    if (interval <= 0 || w.t % interval != 0) return;
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_s%02d_t%06d.txt", scenario,
                  static_cast<int>(w.t));
    ant::write_file(dir + "/" + name, heightfield_ascii(w));
  }
};

int cmd_train(const RunConfig& c) {
  if (c.controller == "handcoded")
    throw std::runtime_error("the hand-coded controller has nothing to train");
  const ant::EvolutionConfig ec = to_evolution_config(c);
  fs::create_directories(c.out);
  if (c.checkpoint_interval > 0) fs::create_directories(c.out + "/checkpoints");
  write_resolved_config(c);

  std::ofstream metrics(c.out + "/metrics.csv", std::ios::binary | std::ios::trunc);
  if (!metrics) throw std::runtime_error("cannot open for writing: " + c.out +
                                         "/metrics.csv");
  metrics << ant::metrics_csv_header(ec.evolvable_robot_count);

  const ant::TrainResult result = ant::train(
      ec, [&](int gen, const ant::GenerationMetrics& m, const ant::Genome& best) {
        metrics << ant::metrics_csv_row(m, ec.evolvable_robot_count);
        metrics.flush();
        if (c.checkpoint_interval > 0 && gen % c.checkpoint_interval == 0) {
          char name[64];
          std::snprintf(name, sizeof(name), "/checkpoints/gen_%06d.json", gen);
          ant::write_file(c.out + name, ant::genome_to_string(best));
        }
      });
  metrics.close();
  if (!metrics) throw std::runtime_error("write failed: " + c.out + "/metrics.csv");

  ant::write_file(c.out + "/best_genome.json", ant::genome_to_string(result.best_genome));
  std::cout << "generations_evaluated " << result.rows.size() << "\n"
            << "best_fitness " << ant::fmt_g17(result.best_fitness) << "\n"
            << "reached_target " << (result.reached_target ? 1 : 0) << "\n"
            << "artifacts " << c.out << "\n";
  return 0;
}

int cmd_eval(const RunConfig& c) {
  const ant::Blueprint bp = load_blueprint(c);
  std::unique_ptr<ant::Controller> controller;
  if (c.controller == "handcoded") {
    controller = std::make_unique<ant::HandCodedController>();
  } else {
    const ant::Genome genome = load_genome_file(c.genome);
    controller = std::make_unique<ant::AntController>(ant::Tissue::develop(genome),
                                                      c.controller == "ant");
  }

  const bool wants_files = c.snapshot_interval > 0 || !c.activity_log.empty();
  if (wants_files) fs::create_directories(c.out);

  ant::DetectorObserver detectors;
  ant::ActivityLogObserver activity;
  SnapshotObserver snapshots;
  snapshots.dir = c.out;
  snapshots.interval = c.snapshot_interval;

  double sum = 0.0;
  for (int j = 0; j < c.scenarios; ++j) {
    std::vector<ant::StepObserver*> observers{&detectors};
    if (!c.activity_log.empty()) observers.push_back(&activity);
    if (c.snapshot_interval > 0) {
      snapshots.scenario = j;
      observers.push_back(&snapshots);
    }
    const uint64_t seed =
        ant::derive_seed(c.seed, ant::stream::kScenario, 0, static_cast<uint64_t>(j));
    const double f =
        ant::evaluate(*controller, bp, c.robots, c.timesteps, seed, observers);
    sum += f;
    std::cout << "scenario " << j << " fitness " << ant::fmt_g17(f) << "\n";
  }
  std::cout << "mean_fitness " << ant::fmt_g17(c.scenarios > 0 ? sum / c.scenarios : 0.0)
            << "\n";
  const auto& d = detectors.counts;
  std::cout << "detectors level=" << d.level
            << " collision_avoidance=" << d.collision_avoidance
            << " stuck_avoidance=" << d.stuck_avoidance << " cut_dig=" << d.cut_dig
            << " correct_dump=" << d.correct_dump << "\n";
  if (!c.activity_log.empty()) {
    ant::write_file(c.activity_log, activity.to_ascii());
    std::cout << "activity_log " << c.activity_log << " rows " << activity.rows.size();
    std::cout << " duty";
    for (double v : activity.duty_cycles()) std::cout << " " << ant::fmt_g17(v);
    std::cout << "\n";
  }
  return 0;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const auto& tok : ant::split(s, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  if (out.empty()) throw std::runtime_error(std::string("empty ") + what + " list");
  return out;
}

std::vector<std::pair<int, int>> parse_area_list(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  for (const auto& tok : ant::split(s, ',')) {
    if (tok.empty()) continue;
    const auto parts = ant::split(tok, 'x');
    if (parts.size() != 2)
      throw std::runtime_error("--areas expects WxH entries, got: " + tok);
    out.emplace_back(std::stoi(parts[0]), std::stoi(parts[1]));
  }
  if (out.empty()) throw std::runtime_error("empty areas list");
  return out;
}

int cmd_sweep(const RunConfig& c) {
  const auto robots = parse_int_list(c.robots_list, "robots");
  const auto areas = parse_area_list(c.areas);
  const auto depths = parse_int_list(c.depths, "depths");
  if (c.reps <= 0) throw std::runtime_error("--reps must be positive");

  ant::ControllerFactory factory;
  if (c.controller == "handcoded") {
    factory = [] { return std::make_unique<ant::HandCodedController>(); };
  } else {
    const ant::Genome genome = load_genome_file(c.genome);
    const bool gated = c.controller == "ant";
    factory = [genome, gated]() -> std::unique_ptr<ant::Controller> {
      return std::make_unique<ant::AntController>(ant::Tissue::develop(genome), gated);
    };
  }
  const ant::SweepResult result = ant::scalability_sweep(
      factory, robots, areas, depths, c.reps, c.timesteps, c.seed, c.workers);
  const std::string csv = ant::sweep_csv(result);
  fs::create_directories(c.out);
  write_resolved_config(c);
  ant::write_file(c.out + "/sweep.csv", csv);
  std::cout << csv << "artifacts " << c.out << "\n";
  return 0;
}

int cmd_analyze(const std::vector<std::string>& runs) {
  std::vector<int> best_n;
  for (const auto& run : runs) {
    std::string path = run;
    if (fs::is_directory(path)) path += "/best_genome.json";
    const ant::Genome g = ant::genome_from_string(ant::read_file(path));
    if (!g.robot_count)
      throw std::runtime_error(path + ": genome has no robot-count gene "
                                      "(not an evolvable-N run)");
    best_n.push_back(*g.robot_count);
  }
  const ant::RobotCountHistogram h = ant::robot_count_histogram(best_n);
  std::cout << "runs " << h.runs << "\nhistogram";
  for (int k = 0; k < ant::kMaxRobots; ++k) std::cout << " " << h.bins[k];
  std::cout << "\nchi_square " << ant::fmt_g17(h.chi_square) << "\np_value "
            << ant::fmt_g17(h.p_value) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ANT neuroevolution engine for multirobot excavation"};
  app.require_subcommand(1);

  RunConfig train_cfg, eval_cfg, sweep_cfg;
  std::vector<std::string> analyze_runs;

  FlagBinder train_binder{app.add_subcommand("train", "evolve a controller"),
                          &train_cfg};
  train_binder.add_shared();
  train_binder.add_train();
  train_binder.add_controller();

  FlagBinder eval_binder{
      app.add_subcommand("eval", "evaluate a genome or the hand-coded controller"),
      &eval_cfg};
  eval_binder.add_shared();
  eval_binder.add_controller();
  eval_binder.cmd->add_option("--genome", eval_cfg.genome, "genome JSON file");
  eval_binder.cmd->add_option("--snapshot-interval", eval_cfg.snapshot_interval,
                              "timesteps between heightfield snapshots, 0 = off");
  eval_binder.cmd->add_option("--activity-log", eval_cfg.activity_log,
                              "write the decision-neuron bitmatrix here");

  FlagBinder sweep_binder{
      app.add_subcommand("sweep", "fitness grid over robots x area x depth"),
      &sweep_cfg};
  sweep_binder.add_shared();
  sweep_binder.add_controller();
  sweep_binder.cmd->add_option("--genome", sweep_cfg.genome, "genome JSON file");
  sweep_binder.cmd->add_option("--robots-list", sweep_cfg.robots_list,
                               "comma-separated robot counts");
  sweep_binder.cmd->add_option("--areas", sweep_cfg.areas,
                               "comma-separated WxH areas");
  sweep_binder.cmd->add_option("--depths", sweep_cfg.depths,
                               "comma-separated goal depths");
  sweep_binder.cmd->add_option("--reps", sweep_cfg.reps, "scenarios per grid cell");

  CLI::App* analyze =
      app.add_subcommand("analyze", "robot-count histogram over evolvable-N runs");
  analyze->add_option("runs", analyze_runs,
                      "run directories or best_genome.json files")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_binder.cmd->parsed()) {
      train_binder.resolve();
      return cmd_train(train_cfg);
    }
    if (eval_binder.cmd->parsed()) {
      eval_binder.resolve();
      return cmd_eval(eval_cfg);
    }
    if (sweep_binder.cmd->parsed()) {
      sweep_binder.resolve();
      return cmd_sweep(sweep_cfg);
    }
    if (analyze->parsed()) return cmd_analyze(analyze_runs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
