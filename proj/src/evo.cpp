#include "tpgf/evo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace tpgf::evo {

using tpg::Edge;
using tpg::EdgeDest;
using tpg::Instruction;
using tpg::Operand;
using tpg::OperandSource;
using tpg::Program;
using tpg::Team;
using tpg::TeamId;
using tpg::TpgGraph;

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("EvolutionParams: ") + what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

int min_init_edges(const EvolutionParams& params) {
  return std::max(2, std::min(2, params.maxInitOutEdges));
}

std::size_t action_edge_count(const Team& team) {
  return static_cast<std::size_t>(
      std::count_if(team.edges.begin(), team.edges.end(),
                    [](const Edge& e) { return e.dest.kind == EdgeDest::Kind::action; }));
}

}  // namespace

void EvolutionParams::validate() const {
  require(minConstValue < maxConstValue, "minConstValue < maxConstValue required");
  require(maxProgramSize >= 1, "maxProgramSize >= 1 required");
  for (double p : {pAdd, pConstantMutation, pDelete, pMutate, pSwap, pEdgeAddition, pEdgeDeletion,
                   pEdgeDestChange, pEdgeDestIsAction, pProgramMutation}) {
    require(is_probability(p), "probabilities must lie in [0,1]");
  }
  require(maxInitOutEdges >= 1, "maxInitOutEdges >= 1 required");
  require(maxOutEdges >= std::max(2, maxInitOutEdges),
          "maxOutEdges >= max(2, maxInitOutEdges) required");
  require(nbRoots >= 2, "nbRoots >= 2 required");
  require(ratio_deleted_roots > 0.0 && ratio_deleted_roots < 1.0,
          "ratio_deleted_roots in (0,1) required");
  require(episodes_per_evaluation >= 1, "episodes_per_evaluation >= 1 required");
}

Instruction random_instruction(std::uint32_t n_inputs, Rng& rng) {
  auto operand = [&rng, n_inputs]() -> Operand {
    switch (rng.below(3)) {
      case 0:
        return {OperandSource::reg, static_cast<std::uint16_t>(rng.below(tpg::kNumRegisters))};
      case 1:
        return {OperandSource::obs, static_cast<std::uint16_t>(rng.below(n_inputs))};
      default:
        return {OperandSource::cnst, static_cast<std::uint16_t>(rng.below(tpg::kNumConstants))};
    }
  };
  Instruction ins;
  ins.op = static_cast<tpg::Opcode>(rng.below(tpg::kOpcodeCount));
  ins.dest = static_cast<std::uint8_t>(rng.below(tpg::kNumRegisters));
  ins.a = operand();
  ins.b = operand();
  return ins;
}

Program random_program(const EvolutionParams& params, std::uint32_t n_inputs, Rng& rng) {
  Program p;
  const int len = rng.uniform_int(1, params.maxProgramSize);
  p.instructions.reserve(len);
  for (int i = 0; i < len; ++i) p.instructions.push_back(random_instruction(n_inputs, rng));
  for (double& c : p.constants) c = rng.uniform(params.minConstValue, params.maxConstValue);
  return p;
}

tpg::TpgGraph init_population(const EvolutionParams& params, std::uint32_t n_actions,
                              std::uint32_t n_inputs, std::uint64_t seed) {
  params.validate();
  if (n_actions < 2) throw std::invalid_argument("init_population: n_actions >= 2 required");
  Rng rng(seed);

  TpgGraph graph;
  graph.n_actions = n_actions;
  graph.n_inputs = n_inputs;
  graph.teams.reserve(params.nbRoots);

  for (int t = 0; t < params.nbRoots; ++t) {
    Team team{static_cast<TeamId>(t), {}};
    const int k = rng.uniform_int(min_init_edges(params), std::max(2, params.maxInitOutEdges));

    std::vector<std::uint32_t> actions(k);
    for (;;) {  // the team's edges must cover at least two distinct actions
      for (int e = 0; e < k; ++e) actions[e] = static_cast<std::uint32_t>(rng.below(n_actions));
      if (std::set<std::uint32_t>(actions.begin(), actions.end()).size() >= 2) break;
    }
    for (int e = 0; e < k; ++e) {
      team.edges.push_back({random_program(params, n_inputs, rng), EdgeDest::to_action(actions[e])});
    }
    graph.teams.push_back(std::move(team));
  }
  return graph;
}

std::vector<TeamId> select_survivors(TpgGraph& graph, std::span<const RootFitness> fitness,
                                     const EvolutionParams& params) {
  const std::vector<TeamId> roots = graph.root_ids();
  if (fitness.size() != roots.size()) {
    throw std::invalid_argument("select_survivors: one fitness entry per root required");
  }
  for (const RootFitness& f : fitness) {
    if (!std::binary_search(roots.begin(), roots.end(), f.root)) {
      throw std::invalid_argument("select_survivors: fitness entry for non-root team " +
                                  std::to_string(f.root));
    }
  }

  std::vector<RootFitness> ranked(fitness.begin(), fitness.end());
  std::sort(ranked.begin(), ranked.end(), [](const RootFitness& a, const RootFitness& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.root < b.root;
  });

  const std::size_t n_delete = static_cast<std::size_t>(
      std::floor(params.ratio_deleted_roots * static_cast<double>(params.nbRoots)));
  const std::size_t n_keep = ranked.size() > n_delete ? ranked.size() - n_delete : 1;

  std::vector<TeamId> survivors;
  survivors.reserve(n_keep);
  for (std::size_t i = 0; i < n_keep; ++i) survivors.push_back(ranked[i].root);

  // Garbage-collect teams unreachable from any surviving root. Teams that
  // stay reachable as internal vertices of survivors are kept.
  std::set<TeamId> reachable;
  std::vector<TeamId> stack(survivors.begin(), survivors.end());
  while (!stack.empty()) {
    const TeamId id = stack.back();
    stack.pop_back();
    if (!reachable.insert(id).second) continue;
    for (const Edge& edge : graph.find_team(id)->edges) {
      if (edge.dest.kind == EdgeDest::Kind::team) stack.push_back(edge.dest.id);
    }
  }
  std::erase_if(graph.teams, [&reachable](const Team& t) { return reachable.count(t.id) == 0; });

  return survivors;
}

namespace {

EdgeDest sample_dest(const TpgGraph& graph, std::span<const TeamId> candidates,
                     const EvolutionParams& params, Rng& rng) {
  if (rng.chance(params.pEdgeDestIsAction) || candidates.empty()) {
    return EdgeDest::to_action(static_cast<std::uint32_t>(rng.below(graph.n_actions)));
  }
  return EdgeDest::to_team(candidates[rng.below(candidates.size())]);
}

}  // namespace

TeamId clone_and_mutate(TpgGraph& graph, TeamId source,
                        std::span<const TeamId> team_dest_candidates,
                        const EvolutionParams& params, Rng& rng) {
  const Team* parent = graph.find_team(source);
  if (parent == nullptr) throw std::invalid_argument("clone_and_mutate: unknown source team");

  Team clone = *parent;
  clone.id = graph.next_team_id();

  bool changed = false;
  for (long guard = 0; !changed; ++guard) {
    if (guard > 100000) {
      throw std::logic_error("clone_and_mutate: mutation probabilities admit no change");
    }
    // edge deletion
    if (rng.chance(params.pEdgeDeletion) && clone.edges.size() > 2) {
      const bool single_action = action_edge_count(clone) == 1;
      std::vector<std::uint32_t> eligible;
      for (std::uint32_t i = 0; i < clone.edges.size(); ++i) {
        if (single_action && clone.edges[i].dest.kind == EdgeDest::Kind::action) continue;
        eligible.push_back(i);
      }
      if (!eligible.empty()) {
        clone.edges.erase(clone.edges.begin() + eligible[rng.below(eligible.size())]);
        changed = true;
      }
    }

    // edge addition
    if (rng.chance(params.pEdgeAddition) &&
        clone.edges.size() < static_cast<std::size_t>(params.maxOutEdges)) {
      Edge edge{random_program(params, graph.n_inputs, rng),
                sample_dest(graph, team_dest_candidates, params, rng)};
      clone.edges.push_back(std::move(edge));
      changed = true;
    }

    // destination changes
    for (Edge& edge : clone.edges) {
      if (!rng.chance(params.pEdgeDestChange)) continue;
      EdgeDest dest;
      if (edge.dest.kind == EdgeDest::Kind::action && action_edge_count(clone) == 1) {
        // the last action edge must stay an action edge
        dest = EdgeDest::to_action(static_cast<std::uint32_t>(rng.below(graph.n_actions)));
      } else {
        dest = sample_dest(graph, team_dest_candidates, params, rng);
      }
      if (!(dest == edge.dest)) changed = true;
      edge.dest = dest;
    }

    // program mutations
    for (Edge& edge : clone.edges) {
      if (!rng.chance(params.pProgramMutation)) continue;
      mutate_program(edge.program, params, graph.n_inputs, rng);
      changed = true;
    }
  }

  const TeamId id = clone.id;
  graph.insert_team(std::move(clone));
  return id;
}

void mutate_program(Program& program, const EvolutionParams& params, std::uint32_t n_inputs,
                    Rng& rng) {
  bool changed = false;
  for (long guard = 0; !changed; ++guard) {
    if (guard > 100000) {
      throw std::logic_error("mutate_program: mutation probabilities admit no change");
    }
    auto& ins = program.instructions;

    if (rng.chance(params.pAdd) &&
        ins.size() < static_cast<std::size_t>(params.maxProgramSize)) {
      const std::size_t pos = rng.below(ins.size() + 1);
      ins.insert(ins.begin() + pos, random_instruction(n_inputs, rng));
      changed = true;
    }

    if (rng.chance(params.pDelete) && ins.size() > 1) {
      ins.erase(ins.begin() + rng.below(ins.size()));
      changed = true;
    }

    if (rng.chance(params.pSwap) && ins.size() >= 2) {
      const std::size_t i = rng.below(ins.size());
      std::size_t j = rng.below(ins.size() - 1);
      if (j >= i) ++j;
      if (!(ins[i] == ins[j])) changed = true;
      std::swap(ins[i], ins[j]);
    }

    if (rng.chance(params.pMutate)) {
      Instruction& target = ins[rng.below(ins.size())];
      switch (rng.below(3)) {
        case 0: {  // opcode, guaranteed different
          std::uint64_t r = rng.below(tpg::kOpcodeCount - 1);
          if (r >= static_cast<std::uint64_t>(target.op)) ++r;
          target.op = static_cast<tpg::Opcode>(r);
          changed = true;
          break;
        }
        case 1: {
          const Operand o = random_instruction(n_inputs, rng).a;
          if (!(o == target.a)) changed = true;
          target.a = o;
          break;
        }
        default: {
          const Operand o = random_instruction(n_inputs, rng).a;
          if (!(o == target.b)) changed = true;
          target.b = o;
          break;
        }
      }
    }

    if (rng.chance(params.pConstantMutation)) {
      const std::size_t idx = rng.below(tpg::kNumConstants);
      const double v = rng.uniform(params.minConstValue, params.maxConstValue);
      if (v != program.constants[idx]) changed = true;
      program.constants[idx] = v;
    }
  }
}

void next_generation(TpgGraph& graph, std::span<const RootFitness> fitness,
                     const EvolutionParams& params, Rng& rng) {
  params.validate();
  select_survivors(graph, fitness, params);

  std::vector<TeamId> candidates;
  candidates.reserve(graph.teams.size());
  for (const Team& team : graph.teams) candidates.push_back(team.id);

  long guard = 0;
  while (graph.root_ids().size() < static_cast<std::size_t>(params.nbRoots)) {
    const TeamId source = candidates[rng.below(candidates.size())];
    clone_and_mutate(graph, source, candidates, params, rng);
    if (++guard > 100L * params.nbRoots) {
      throw std::logic_error("next_generation: root count failed to converge");
    }
  }
}

std::vector<std::string> check_bounds(const TpgGraph& graph, const EvolutionParams& params) {
  std::vector<std::string> out;
  for (const Team& team : graph.teams) {
    const std::string tag = "team " + std::to_string(team.id);
    if (team.edges.size() > static_cast<std::size_t>(params.maxOutEdges)) {
      out.push_back(tag + ": out-degree " + std::to_string(team.edges.size()) + " > maxOutEdges");
    }
    for (std::size_t e = 0; e < team.edges.size(); ++e) {
      const Program& p = team.edges[e].program;
      if (p.instructions.size() > static_cast<std::size_t>(params.maxProgramSize)) {
        out.push_back(tag + " edge " + std::to_string(e) + ": program length " +
                      std::to_string(p.instructions.size()) + " > maxProgramSize");
      }
      for (double c : p.constants) {
        if (c < params.minConstValue || c > params.maxConstValue) {
          out.push_back(tag + " edge " + std::to_string(e) + ": constant out of bounds");
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace tpgf::evo
