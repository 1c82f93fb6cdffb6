#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tpgf/rng.hpp"
#include "tpgf/tpg.hpp"

namespace tpgf::evo {

// Training hyperparameters. Field names match the experiment-config keys
// one to one, hence the mixed naming style.
struct EvolutionParams {
  // program mutation
  double maxConstValue = 50.0;
  int maxProgramSize = 96;
  double minConstValue = -20.0;
  double pAdd = 0.5;
  double pConstantMutation = 0.5;
  double pDelete = 0.5;
  double pMutate = 0.7;
  double pSwap = 0.7;
  // graph mutation
  int maxInitOutEdges = 3;
  int maxOutEdges = 5;
  int nbRoots = 288;
  double pEdgeAddition = 0.7;
  double pEdgeDeletion = 0.7;
  double pEdgeDestChange = 0.1;
  double pEdgeDestIsAction = 0.5;
  double pProgramMutation = 0.2;
  // selection / evaluation
  double ratio_deleted_roots = 0.5;
  int episodes_per_evaluation = 10;

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

struct RootFitness {
  tpg::TeamId root = 0;
  double fitness = 0.0;
};

tpg::Instruction random_instruction(std::uint32_t n_inputs, Rng& rng);
tpg::Program random_program(const EvolutionParams& params, std::uint32_t n_inputs, Rng& rng);

// nbRoots teams, each with 2..maxInitOutEdges edges leading straight to
// actions (covering at least two distinct ones) and uniformly random
// programs. Passes tpg::validate.
tpg::TpgGraph init_population(const EvolutionParams& params, std::uint32_t n_actions,
                              std::uint32_t n_inputs, std::uint64_t seed);

// Ranks roots by fitness (ties to the lower id), drops the worst
// floor(ratio_deleted_roots * nbRoots) of them and garbage-collects every
// team that is no longer reachable from a surviving root. Returns the
// surviving root ids, best first.
std::vector<tpg::TeamId> select_survivors(tpg::TpgGraph& graph,
                                          std::span<const RootFitness> fitness,
                                          const EvolutionParams& params);

// Deep-copies `source` (programs copied, destinations shared) into a fresh
// root team, then applies edge deletion / addition / retargeting / program
// mutation until at least one change happened. Team-destined edges pick
// uniformly from `team_dest_candidates` (the post-selection snapshot), which
// never contains the clone, so no self-loop can form. Teams keep >= 2 edges
// and >= 1 action edge throughout.
tpg::TeamId clone_and_mutate(tpg::TpgGraph& graph, tpg::TeamId source,
                             std::span<const tpg::TeamId> team_dest_candidates,
                             const EvolutionParams& params, Rng& rng);

// In-place program mutation, repeated until at least one change: insert /
// delete / swap instructions, alter an opcode or operand, replace a constant.
void mutate_program(tpg::Program& program, const EvolutionParams& params, std::uint32_t n_inputs,
                    Rng& rng);

// One evolution step: survivor selection followed by clone_and_mutate until
// the root count is back to nbRoots. Clones are sampled uniformly from the
// surviving teams (roots and internal alike).
void next_generation(tpg::TpgGraph& graph, std::span<const RootFitness> fitness,
                     const EvolutionParams& params, Rng& rng);

// Hyperparameter-bound check (program length, out-degree, constant range),
// one line per violation.
std::vector<std::string> check_bounds(const tpg::TpgGraph& graph, const EvolutionParams& params);

}  // namespace tpgf::evo
