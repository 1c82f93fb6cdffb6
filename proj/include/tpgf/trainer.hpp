#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tpgf/config.hpp"
#include "tpgf/env.hpp"
#include "tpgf/evo.hpp"
#include "tpgf/tpg.hpp"
#include "tpgf/trajectory.hpp"

namespace tpgf::train {

// Labeled seed streams derived from the master seed. Training episodes,
// mutation and evaluation scenarios live under distinct labels so their
// draws never overlap.
std::uint64_t init_seed(std::uint64_t master);
std::uint64_t episode_seed(std::uint64_t master, int generation, int episode);
std::uint64_t mutation_seed(std::uint64_t master, int generation);
std::uint64_t eval_scenario_base(std::uint64_t master);
std::uint64_t scenario_seed(std::uint64_t base, int scenario);
std::uint64_t sweep_point_seed(std::uint64_t master, int point);

struct EpisodeOutcome {
  double final_reward = 0.0;  // reward of the terminal step
  double final_y = 0.0;
  env::Terminal terminal = env::Terminal::running;
  int steps = 0;
};

// Greedy rollout of one episode: reset(seed), then traverse + step until a
// terminal state. Optionally records a trajectory log.
EpisodeOutcome run_episode(env::DroneForestEnv& environment, const tpg::TpgGraph& graph,
                           tpg::TeamId root, std::uint64_t seed, env::RewardMode mode,
                           io::TrajectoryLog* log = nullptr);

// Root fitness: mean over the episode seeds of the terminal-step reward.
// Goal-reaching episodes contribute +100, crashes -25 and timeouts the
// distance still missing to the goal.
double root_fitness(env::DroneForestEnv& environment, const tpg::TpgGraph& graph,
                    tpg::TeamId root, std::span<const std::uint64_t> episode_seeds,
                    env::RewardMode mode);

// Serial reference implementation: one root after another, one shared
// environment. Kept as the ground truth the parallel kernel is tested
// against.
std::vector<evo::RootFitness> evaluate_roots_serial(const tpg::TpgGraph& graph,
                                                    std::span<const tpg::TeamId> roots,
                                                    const env::EnvConfig& env_cfg,
                                                    std::span<const std::uint64_t> episode_seeds,
                                                    env::RewardMode mode);

// OpenMP kernel over roots; every worker owns its environment instance and
// writes only its own slot, so the result is identical to the serial
// reference for any worker count. workers <= 0 uses the hardware default,
// workers == 1 runs the serial path.
std::vector<evo::RootFitness> evaluate_roots(const tpg::TpgGraph& graph,
                                             std::span<const tpg::TeamId> roots,
                                             const env::EnvConfig& env_cfg,
                                             std::span<const std::uint64_t> episode_seeds,
                                             env::RewardMode mode, int workers);

struct GenerationStats {
  int generation = 0;
  double best = 0.0;
  double median = 0.0;
  double worst = 0.0;
  double best_ever = 0.0;  // non-decreasing across generations
  int teams = 0;
  long programs = 0;
};

struct EvalReport {
  double avg_distance = 0.0;             // mean final y over scenarios
  double accuracy = 0.0;                 // percent of goal-reaching scenarios
  std::vector<double> scores;            // final y per scenario
  std::vector<env::Terminal> terminals;  // terminal flag per scenario
  tpg::TeamId champion = 0;
  std::uint64_t config_digest = 0;
};

// Evaluation protocol: n_scenarios episodes with seeds scenario_seed(base, i),
// scored by the final y coordinate. `root` picks the policy within `graph`.
EvalReport evaluate_root(const tpg::TpgGraph& graph, tpg::TeamId root,
                         const env::EnvConfig& env_cfg, std::uint64_t scenario_seed_base,
                         int n_scenarios, int workers = 0);

// Same protocol for a standalone champion graph (must have exactly one root).
EvalReport evaluate(const tpg::TpgGraph& champion, const env::EnvConfig& env_cfg,
                    std::uint64_t scenario_seed_base, int n_scenarios, int workers = 0);

struct TrainResult {
  tpg::TpgGraph champion;       // reachable subgraph of the winning root
  tpg::TeamId champion_root = 0;
  EvalReport report;            // evaluation-protocol report of the champion
  std::vector<GenerationStats> log;
  tpg::TpgGraph best_fitness_champion;  // best training-fitness root ever seen
  tpg::TeamId best_fitness_root = 0;
  double best_fitness = 0.0;
};

// The full experiment: init_population, n_generations of evaluate + evolve,
// then champion selection by the evaluation protocol over the final roots.
// Identical config and master seed give bit-identical results for any worker
// count. Per-generation progress lines go to `progress` when given.
TrainResult train(const config::ExperimentConfig& cfg, int workers = 0,
                  std::ostream* progress = nullptr);

struct SweepRow {
  std::string label;   // "nbRoots=288, pMutate=0.7" or "base" for the empty grid
  bool ok = false;
  std::string error;
  std::uint64_t master_seed = 0;
  EvalReport report;
};

// One train + evaluate per grid point (cartesian product, independent child
// seeds). Failures are recorded and the sweep continues. Rows come back
// sorted by accuracy, then avg_distance, best first.
std::vector<SweepRow> sweep(const config::ExperimentConfig& base, const config::SweepGrid& grid,
                            int workers = 0, std::ostream* progress = nullptr);

// Text renderings shared by the CLI and the tests. All are deterministic
// functions of their inputs.
std::string write_generation_log(std::span<const GenerationStats> log);
std::string write_eval_report(const EvalReport& report, const std::string& label);
std::string write_eval_report_tsv(const EvalReport& report);
std::string write_sweep_table(std::span<const SweepRow> rows);
std::string write_sweep_tsv(std::span<const SweepRow> rows);

}  // namespace tpgf::train
