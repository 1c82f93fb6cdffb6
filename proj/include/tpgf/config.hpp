#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpgf/env.hpp"
#include "tpgf/evo.hpp"

namespace tpgf::config {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  env::EnvConfig env;
  evo::EvolutionParams evo;
  int n_generations = 250;
  int eval_scenarios = 100;
  std::uint64_t master_seed = 1;
  env::RewardMode reward_mode = env::RewardMode::tpg;
  std::string label = "run";

  void validate() const;
};

// Sectioned key = value text with [env], [evo] and [trainer] sections and
// '#' comments. Every key is optional (defaults apply); unknown sections,
// unknown keys and duplicates are rejected.
ExperimentConfig parse_experiment_config(const std::string& text);

// Canonical echo: all sections, all keys, fixed order. Parsing the output
// reproduces the config exactly.
std::string write_experiment_config(const ExperimentConfig& cfg);

// Flat scenario document holding only EnvConfig keys (no section headers).
env::EnvConfig parse_env_config(const std::string& text);
std::string write_env_config(const env::EnvConfig& cfg);

// "section.key" override; value parsed exactly like a config line.
// Throws ConfigError for unknown keys before touching the config.
void apply_override(ExperimentConfig& cfg, const std::string& dotted_key,
                    const std::string& value);

// All valid dotted keys, for error messages and validation.
std::vector<std::string> known_keys();

// Sweep grid: lines "key = v1, v2, ...". Keys are [evo] hyperparameters;
// points are the cartesian product in file order.
using SweepGrid = std::vector<std::pair<std::string, std::vector<std::string>>>;
SweepGrid parse_sweep_grid(const std::string& text);

std::uint64_t digest_bytes(std::string_view bytes);
std::uint64_t config_digest(const ExperimentConfig& cfg);

}  // namespace tpgf::config
