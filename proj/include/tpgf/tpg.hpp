#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tpgf::tpg {

inline constexpr int kNumRegisters = 8;
inline constexpr int kNumConstants = 8;

// Protected-arithmetic guards. Division returns the numerator for near-zero
// denominators, ln operates on |x| floored away from zero, exp on a clamped
// argument, and any non-finite instruction result is replaced by zero, so a
// bid is always finite.
inline constexpr double kDivEpsilon = 1e-9;
inline constexpr double kLnFloor = 1e-9;
inline constexpr double kExpClamp = 64.0;

enum class Opcode : std::uint8_t { add, sub, mul, div, exp, ln, cos, min, max, neg };
inline constexpr int kOpcodeCount = 10;

// exp, ln, cos and neg use only operand a.
bool opcode_is_unary(Opcode op);
const char* opcode_name(Opcode op);

enum class OperandSource : std::uint8_t { reg, obs, cnst };

struct Operand {
  OperandSource source = OperandSource::reg;
  std::uint16_t index = 0;
  bool operator==(const Operand&) const = default;
};

struct Instruction {
  Opcode op = Opcode::add;
  std::uint8_t dest = 0;  // register index
  Operand a;
  Operand b;  // ignored by unary opcodes
  bool operator==(const Instruction&) const = default;
};

struct Program {
  std::vector<Instruction> instructions;           // length >= 1
  std::array<double, kNumConstants> constants{};   // within the configured bounds
  bool operator==(const Program&) const = default;
};

using TeamId = std::uint32_t;

struct EdgeDest {
  enum class Kind : std::uint8_t { team, action };
  Kind kind = Kind::action;
  std::uint32_t id = 0;
  bool operator==(const EdgeDest&) const = default;

  static EdgeDest to_team(TeamId t) { return {Kind::team, t}; }
  static EdgeDest to_action(std::uint32_t a) { return {Kind::action, a}; }
};

struct Edge {
  Program program;
  EdgeDest dest;
  bool operator==(const Edge&) const = default;
};

struct Team {
  TeamId id = 0;
  std::vector<Edge> edges;  // ordered; order breaks bid ties

  bool has_action_edge() const;
  bool operator==(const Team&) const = default;
};

// Directed policy graph: teams are internal nodes, actions are leaves,
// programs sit on the edges and bid for traversal.
struct TpgGraph {
  std::uint32_t n_actions = 0;
  std::uint32_t n_inputs = 0;          // observation length programs may index
  std::vector<Team> teams;             // ascending unique ids

  const Team* find_team(TeamId id) const;
  Team* find_team(TeamId id);
  bool contains_team(TeamId id) const { return find_team(id) != nullptr; }

  // Teams with no incoming edge, ascending.
  std::vector<TeamId> root_ids() const;

  // Smallest id strictly greater than every existing team id.
  TeamId next_team_id() const;

  // Insert keeping the id ordering. The id must not exist yet.
  void insert_team(Team team);
  void erase_team(TeamId id);

  std::size_t program_count() const;
  bool operator==(const TpgGraph&) const = default;
};

// Runs the register machine on the observation: registers start at zero,
// instructions execute in order, the bid is register 0 afterwards.
double execute_program(const Program& program, std::span<const double> observation);

struct TraceStep {
  TeamId team = 0;
  std::uint32_t edge_index = 0;
};

struct TraversalTrace {
  std::vector<TraceStep> steps;   // visited teams with the winning edge index
  std::uint32_t action = 0;
};

// Greedy bid traversal from root to an action. At each team all edges whose
// destination is not an already-visited team compete; the highest bid wins,
// ties go to the earlier edge. The root starts visited. Every team keeps at
// least one action edge, so the walk always terminates.
std::uint32_t traverse(const TpgGraph& graph, TeamId root, std::span<const double> observation,
                       TraversalTrace* trace = nullptr);

// Structural invariant check; each violation is one human-readable line.
std::vector<std::string> validate(const TpgGraph& graph);

// Teams reachable from root, copied into a standalone graph (ids preserved).
TpgGraph extract_subgraph(const TpgGraph& graph, TeamId root);

}  // namespace tpgf::tpg
