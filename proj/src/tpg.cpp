#include "tpgf/tpg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tpgf::tpg {

bool opcode_is_unary(Opcode op) {
  switch (op) {
    case Opcode::exp:
    case Opcode::ln:
    case Opcode::cos:
    case Opcode::neg:
      return true;
    default:
      return false;
  }
}

const char* opcode_name(Opcode op) {
  switch (op) {
    case Opcode::add: return "add";
    case Opcode::sub: return "sub";
    case Opcode::mul: return "mul";
    case Opcode::div: return "div";
    case Opcode::exp: return "exp";
    case Opcode::ln: return "ln";
    case Opcode::cos: return "cos";
    case Opcode::min: return "min";
    case Opcode::max: return "max";
    case Opcode::neg: return "neg";
  }
  return "?";
}

bool Team::has_action_edge() const {
  return std::any_of(edges.begin(), edges.end(),
                     [](const Edge& e) { return e.dest.kind == EdgeDest::Kind::action; });
}

namespace {

struct TeamIdLess {
  bool operator()(const Team& t, TeamId id) const { return t.id < id; }
};

}  // namespace

const Team* TpgGraph::find_team(TeamId id) const {
  auto it = std::lower_bound(teams.begin(), teams.end(), id, TeamIdLess{});
  return it != teams.end() && it->id == id ? &*it : nullptr;
}

Team* TpgGraph::find_team(TeamId id) {
  auto it = std::lower_bound(teams.begin(), teams.end(), id, TeamIdLess{});
  return it != teams.end() && it->id == id ? &*it : nullptr;
}

std::vector<TeamId> TpgGraph::root_ids() const {
  std::vector<TeamId> with_incoming;
  for (const Team& team : teams) {
    for (const Edge& edge : team.edges) {
      if (edge.dest.kind == EdgeDest::Kind::team) with_incoming.push_back(edge.dest.id);
    }
  }
  std::sort(with_incoming.begin(), with_incoming.end());
  std::vector<TeamId> roots;
  for (const Team& team : teams) {
    if (!std::binary_search(with_incoming.begin(), with_incoming.end(), team.id)) {
      roots.push_back(team.id);
    }
  }
  return roots;
}

TeamId TpgGraph::next_team_id() const { return teams.empty() ? 0 : teams.back().id + 1; }

void TpgGraph::insert_team(Team team) {
  auto it = std::lower_bound(teams.begin(), teams.end(), team.id, TeamIdLess{});
  if (it != teams.end() && it->id == team.id) {
    throw std::logic_error("insert_team: id already present");
  }
  teams.insert(it, std::move(team));
}

void TpgGraph::erase_team(TeamId id) {
  auto it = std::lower_bound(teams.begin(), teams.end(), id, TeamIdLess{});
  if (it == teams.end() || it->id != id) throw std::logic_error("erase_team: no such team");
  teams.erase(it);
}

std::size_t TpgGraph::program_count() const {
  std::size_t n = 0;
  for (const Team& team : teams) n += team.edges.size();
  return n;
}

double execute_program(const Program& program, std::span<const double> observation) {
  double reg[kNumRegisters] = {0, 0, 0, 0, 0, 0, 0, 0};

  auto fetch = [&](const Operand& o) -> double {
    switch (o.source) {
      case OperandSource::reg: return reg[o.index];
      case OperandSource::obs: return observation[o.index];
      case OperandSource::cnst: return program.constants[o.index];
    }
    return 0.0;
  };

  for (const Instruction& ins : program.instructions) {
    const double a = fetch(ins.a);
    double r;
    switch (ins.op) {
      case Opcode::add: r = a + fetch(ins.b); break;
      case Opcode::sub: r = a - fetch(ins.b); break;
      case Opcode::mul: r = a * fetch(ins.b); break;
      case Opcode::div: {
        const double b = fetch(ins.b);
        r = std::abs(b) < kDivEpsilon ? a : a / b;
        break;
      }
      case Opcode::exp: r = std::exp(std::clamp(a, -kExpClamp, kExpClamp)); break;
      case Opcode::ln: r = std::log(std::max(std::abs(a), kLnFloor)); break;
      case Opcode::cos: r = std::cos(a); break;
      case Opcode::min: r = std::fmin(a, fetch(ins.b)); break;
      case Opcode::max: r = std::fmax(a, fetch(ins.b)); break;
      case Opcode::neg: r = -a; break;
      default: r = 0.0; break;
    }
    reg[ins.dest] = std::isfinite(r) ? r : 0.0;
  }
  return reg[0];
}

std::uint32_t traverse(const TpgGraph& graph, TeamId root, std::span<const double> observation,
                       TraversalTrace* trace) {
  const Team* team = graph.find_team(root);
  if (team == nullptr) throw std::invalid_argument("traverse: unknown root team");
  if (trace != nullptr) trace->steps.clear();

  std::vector<TeamId> visited;
  visited.reserve(8);
  visited.push_back(root);

  for (;;) {
    double best_bid = -std::numeric_limits<double>::infinity();
    const Edge* best = nullptr;
    std::uint32_t best_index = 0;
    for (std::uint32_t i = 0; i < team->edges.size(); ++i) {
      const Edge& edge = team->edges[i];
      if (edge.dest.kind == EdgeDest::Kind::team &&
          std::find(visited.begin(), visited.end(), edge.dest.id) != visited.end()) {
        continue;
      }
      const double bid = execute_program(edge.program, observation);
      if (best == nullptr || bid > best_bid) {
        best_bid = bid;
        best = &edge;
        best_index = i;
      }
    }
    if (best == nullptr) {
      throw std::logic_error("traverse: team " + std::to_string(team->id) +
                             " has no eligible edge");
    }
    if (trace != nullptr) trace->steps.push_back({team->id, best_index});
    if (best->dest.kind == EdgeDest::Kind::action) {
      if (trace != nullptr) trace->action = best->dest.id;
      return best->dest.id;
    }
    visited.push_back(best->dest.id);
    team = graph.find_team(best->dest.id);
  }
}

std::vector<std::string> validate(const TpgGraph& graph) {
  std::vector<std::string> out;
  auto fail = [&out](std::string msg) { out.push_back(std::move(msg)); };

  for (std::size_t i = 1; i < graph.teams.size(); ++i) {
    if (graph.teams[i - 1].id >= graph.teams[i].id) {
      fail("teams not in strictly ascending id order near id " +
           std::to_string(graph.teams[i].id));
    }
  }

  for (const Team& team : graph.teams) {
    const std::string tag = "team " + std::to_string(team.id);
    if (team.edges.empty()) fail(tag + ": no out-edges");
    if (!team.edges.empty() && !team.has_action_edge()) fail(tag + ": no action edge");
    for (std::size_t e = 0; e < team.edges.size(); ++e) {
      const Edge& edge = team.edges[e];
      const std::string etag = tag + " edge " + std::to_string(e);
      if (edge.dest.kind == EdgeDest::Kind::team) {
        if (edge.dest.id == team.id) {
          fail(etag + ": self-loop");
        } else if (!graph.contains_team(edge.dest.id)) {
          fail(etag + ": destination team " + std::to_string(edge.dest.id) + " does not exist");
        }
      } else if (edge.dest.id >= graph.n_actions) {
        fail(etag + ": action id " + std::to_string(edge.dest.id) + " out of range");
      }
      if (edge.program.instructions.empty()) fail(etag + ": empty program");
      for (std::size_t k = 0; k < edge.program.instructions.size(); ++k) {
        const Instruction& ins = edge.program.instructions[k];
        const std::string itag = etag + " instr " + std::to_string(k);
        if (ins.dest >= kNumRegisters) fail(itag + ": dest register out of range");
        for (const Operand* o : {&ins.a, &ins.b}) {
          switch (o->source) {
            case OperandSource::reg:
              if (o->index >= kNumRegisters) fail(itag + ": register operand out of range");
              break;
            case OperandSource::obs:
              if (o->index >= graph.n_inputs) fail(itag + ": observation operand out of range");
              break;
            case OperandSource::cnst:
              if (o->index >= kNumConstants) fail(itag + ": constant operand out of range");
              break;
          }
        }
      }
      for (double c : edge.program.constants) {
        if (!std::isfinite(c)) {
          fail(etag + ": non-finite constant");
          break;
        }
      }
    }
  }
  return out;
}

TpgGraph extract_subgraph(const TpgGraph& graph, TeamId root) {
  if (!graph.contains_team(root)) throw std::invalid_argument("extract_subgraph: unknown root");
  std::vector<TeamId> stack{root};
  std::vector<TeamId> keep;
  while (!stack.empty()) {
    const TeamId id = stack.back();
    stack.pop_back();
    if (std::find(keep.begin(), keep.end(), id) != keep.end()) continue;
    keep.push_back(id);
    for (const Edge& edge : graph.find_team(id)->edges) {
      if (edge.dest.kind == EdgeDest::Kind::team) stack.push_back(edge.dest.id);
    }
  }
  std::sort(keep.begin(), keep.end());

  TpgGraph out;
  out.n_actions = graph.n_actions;
  out.n_inputs = graph.n_inputs;
  out.teams.reserve(keep.size());
  for (TeamId id : keep) out.teams.push_back(*graph.find_team(id));
  return out;
}

}  // namespace tpgf::tpg
