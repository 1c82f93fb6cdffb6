#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "tpgf/evo.hpp"
#include "tpgf/rng.hpp"
#include "tpgf/tpg.hpp"

using namespace tpgf::evo;
using namespace tpgf::tpg;
using tpgf::Rng;

namespace {

constexpr std::uint32_t kActions = 40;
constexpr std::uint32_t kInputs = 36;

EvolutionParams small_params() {
  EvolutionParams p;
  p.nbRoots = 16;
  return p;
}

std::vector<RootFitness> random_fitness(const TpgGraph& g, Rng& rng) {
  std::vector<RootFitness> out;
  for (TeamId id : g.root_ids()) out.push_back({id, rng.uniform(-100.0, 100.0)});
  return out;
}

bool all_reachable_from_roots(const TpgGraph& g) {
  std::set<TeamId> seen;
  std::vector<TeamId> stack = g.root_ids();
  while (!stack.empty()) {
    const TeamId id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    for (const Edge& e : g.find_team(id)->edges) {
      if (e.dest.kind == EdgeDest::Kind::team) stack.push_back(e.dest.id);
    }
  }
  return seen.size() == g.teams.size();
}

}  // namespace

TEST_CASE("default hyperparameters") {
  EvolutionParams p;
  CHECK(p.maxConstValue == 50.0);
  CHECK(p.maxProgramSize == 96);
  CHECK(p.minConstValue == -20.0);
  CHECK(p.pAdd == 0.5);
  CHECK(p.pConstantMutation == 0.5);
  CHECK(p.pDelete == 0.5);
  CHECK(p.pMutate == 0.7);
  CHECK(p.pSwap == 0.7);
  CHECK(p.maxInitOutEdges == 3);
  CHECK(p.maxOutEdges == 5);
  CHECK(p.nbRoots == 288);
  CHECK(p.pEdgeAddition == 0.7);
  CHECK(p.pEdgeDeletion == 0.7);
  CHECK(p.pEdgeDestChange == 0.1);
  CHECK(p.pEdgeDestIsAction == 0.5);
  CHECK(p.pProgramMutation == 0.2);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("init_population builds root-only graphs of action edges") {
  EvolutionParams p;  // nbRoots = 288
  TpgGraph g = init_population(p, kActions, kInputs, 5);
  CHECK(g.teams.size() == 288);
  CHECK(g.root_ids().size() == 288);  // no internal teams
  REQUIRE(validate(g).empty());
  REQUIRE(check_bounds(g, p).empty());

  std::vector<double> obs(kInputs, 0.5);
  for (const Team& team : g.teams) {
    CHECK(team.edges.size() >= 2);
    CHECK(team.edges.size() <= static_cast<std::size_t>(p.maxInitOutEdges));
    std::set<std::uint32_t> actions;
    for (const Edge& e : team.edges) {
      REQUIRE(e.dest.kind == EdgeDest::Kind::action);
      actions.insert(e.dest.id);
    }
    CHECK(actions.size() >= 2);
    TraversalTrace trace;
    traverse(g, team.id, obs, &trace);
    CHECK(trace.steps.size() == 1);  // every path is a single hop to an action
  }
}

TEST_CASE("init_population is deterministic per seed") {
  auto p = small_params();
  CHECK(init_population(p, kActions, kInputs, 9) == init_population(p, kActions, kInputs, 9));
  CHECK(init_population(p, kActions, kInputs, 9) != init_population(p, kActions, kInputs, 10));
}

TEST_CASE("select_survivors keeps the best half") {
  auto p = small_params();
  p.nbRoots = 4;
  TpgGraph g = init_population(p, kActions, kInputs, 1);
  auto roots = g.root_ids();
  REQUIRE(roots.size() == 4);
  std::vector<RootFitness> fitness{
      {roots[0], 5.0}, {roots[1], 3.0}, {roots[2], 1.0}, {roots[3], -2.0}};
  auto survivors = select_survivors(g, fitness, p);
  REQUIRE(survivors.size() == 2);
  CHECK(survivors[0] == roots[0]);
  CHECK(survivors[1] == roots[1]);
  CHECK(g.teams.size() == 2);
  CHECK(validate(g).empty());
}

TEST_CASE("select_survivors breaks fitness ties by lower id") {
  auto p = small_params();
  p.nbRoots = 4;
  TpgGraph g = init_population(p, kActions, kInputs, 2);
  auto roots = g.root_ids();
  std::vector<RootFitness> fitness;
  for (TeamId id : roots) fitness.push_back({id, 7.0});
  auto survivors = select_survivors(g, fitness, p);
  REQUIRE(survivors.size() == 2);
  CHECK(survivors[0] == roots[0]);
  CHECK(survivors[1] == roots[1]);
}

TEST_CASE("clone_and_mutate always changes the team and keeps the graph valid") {
  auto p = small_params();
  TpgGraph g = init_population(p, kActions, kInputs, 3);
  std::vector<TeamId> candidates;
  for (const Team& t : g.teams) candidates.push_back(t.id);

  Rng rng(42);
  for (int i = 0; i < 300; ++i) {
    const TeamId source = candidates[rng.below(candidates.size())];
    const Team parent = *g.find_team(source);
    const TeamId child_id = clone_and_mutate(g, source, candidates, p, rng);
    const Team* child = g.find_team(child_id);
    REQUIRE(child != nullptr);
    CHECK(child->edges != parent.edges);  // at least one change
    CHECK(child->edges.size() >= 2);
    CHECK(child->has_action_edge());
  }
  CHECK(validate(g).empty());
  CHECK(check_bounds(g, p).empty());
}

TEST_CASE("new-edge destinations are actions with probability pEdgeDestIsAction") {
  EvolutionParams p;
  p.nbRoots = 4;
  p.pEdgeDeletion = 0.0;
  p.pEdgeAddition = 1.0;  // exactly one destination draw per clone
  p.pEdgeDestChange = 0.0;
  p.pProgramMutation = 0.0;
  REQUIRE(p.pEdgeDestIsAction == 0.5);

  Rng rng(1001);
  long actions = 0;
  const long trials = 100000;
  TpgGraph g = init_population(p, kActions, kInputs, 0);
  std::vector<TeamId> candidates;
  for (const Team& t : g.teams) candidates.push_back(t.id);
  for (long i = 0; i < trials; ++i) {
    if (g.teams.size() > 600) {  // keep the graph small; only the draw matters
      g = init_population(p, kActions, kInputs, static_cast<std::uint64_t>(i));
      candidates.clear();
      for (const Team& t : g.teams) candidates.push_back(t.id);
    }
    const TeamId source = candidates[rng.below(candidates.size())];
    const TeamId child = clone_and_mutate(g, source, candidates, p, rng);
    if (g.find_team(child)->edges.back().dest.kind == EdgeDest::Kind::action) ++actions;
  }
  const double freq = static_cast<double>(actions) / static_cast<double>(trials);
  CHECK(freq > 0.48);
  CHECK(freq < 0.52);
}

TEST_CASE("mutate_program respects maxProgramSize") {
  EvolutionParams p;
  p.pAdd = 1.0;
  p.pDelete = 0.0;
  p.pSwap = 0.0;
  p.pMutate = 0.0;
  p.pConstantMutation = 1.0;  // provides the guaranteed change when insertion is skipped
  Rng rng(7);
  Program prog = random_program(p, kInputs, rng);
  prog.instructions.resize(96, prog.instructions[0]);
  REQUIRE(prog.instructions.size() == 96);
  for (int i = 0; i < 50; ++i) {
    mutate_program(prog, p, kInputs, rng);
    CHECK(prog.instructions.size() == 96);
  }
}

TEST_CASE("mutate_program respects the minimum length of one") {
  EvolutionParams p;
  p.pAdd = 0.0;
  p.pDelete = 1.0;
  p.pSwap = 0.0;
  p.pMutate = 1.0;  // alters the single instruction instead
  p.pConstantMutation = 0.0;
  Rng rng(8);
  Program prog;
  prog.instructions.push_back(random_instruction(kInputs, rng));
  for (int i = 0; i < 50; ++i) {
    mutate_program(prog, p, kInputs, rng);
    CHECK(prog.instructions.size() == 1);
  }
}

TEST_CASE("mutated constants stay within bounds") {
  EvolutionParams p;
  Rng rng(9);
  Program prog = random_program(p, kInputs, rng);
  for (int i = 0; i < 10000; ++i) {
    mutate_program(prog, p, kInputs, rng);
    CHECK(prog.instructions.size() >= 1);
    CHECK(prog.instructions.size() <= static_cast<std::size_t>(p.maxProgramSize));
    for (double c : prog.constants) {
      CHECK(c >= p.minConstValue);
      CHECK(c <= p.maxConstValue);
    }
  }
}

TEST_CASE("next_generation restores the root count and stays valid") {
  auto p = small_params();
  TpgGraph g = init_population(p, kActions, kInputs, 11);
  Rng fit_rng(100);
  Rng mut_rng(200);
  for (int gen = 0; gen < 120; ++gen) {
    auto fitness = random_fitness(g, fit_rng);
    next_generation(g, fitness, p, mut_rng);
    REQUIRE(g.root_ids().size() == static_cast<std::size_t>(p.nbRoots));
    REQUIRE(validate(g).empty());
    REQUIRE(check_bounds(g, p).empty());
    REQUIRE(all_reachable_from_roots(g));
  }
  // after many generations some survivors should have become internal
  CHECK(g.teams.size() > static_cast<std::size_t>(p.nbRoots));
}

TEST_CASE("the best root of a generation is never deleted") {
  auto p = small_params();
  TpgGraph g = init_population(p, kActions, kInputs, 12);
  Rng fit_rng(300);
  Rng mut_rng(400);
  for (int gen = 0; gen < 40; ++gen) {
    auto fitness = random_fitness(g, fit_rng);
    const auto best =
        std::max_element(fitness.begin(), fitness.end(), [](const auto& a, const auto& b) {
          if (a.fitness != b.fitness) return a.fitness < b.fitness;
          return a.root > b.root;
        });
    const TeamId best_root = best->root;
    next_generation(g, fitness, p, mut_rng);
    CHECK(g.contains_team(best_root));
  }
}

TEST_CASE("next_generation is deterministic") {
  auto p = small_params();
  TpgGraph a = init_population(p, kActions, kInputs, 13);
  TpgGraph b = a;
  Rng fit_rng(1);
  auto fitness = random_fitness(a, fit_rng);
  Rng r1(77), r2(77);
  next_generation(a, fitness, p, r1);
  next_generation(b, fitness, p, r2);
  CHECK(a == b);
}
