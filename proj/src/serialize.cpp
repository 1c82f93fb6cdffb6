#include "tpgf/serialize.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "tpgf/env.hpp"
#include "tpgf/textio.hpp"

namespace tpgf::io {

using tpg::Edge;
using tpg::EdgeDest;
using tpg::Instruction;
using tpg::Operand;
using tpg::OperandSource;
using tpg::Opcode;
using tpg::Program;
using tpg::Team;
using tpg::TeamId;
using tpg::TpgGraph;

namespace {

constexpr const char* kMagic = "tpgforest-graph";
constexpr int kVersion = 1;

std::string operand_token(const Operand& o) {
  const char tag = o.source == OperandSource::reg ? 'r' : o.source == OperandSource::obs ? 'o' : 'c';
  return tag + std::to_string(o.index);
}

Operand parse_operand(const std::string& token, int line) {
  if (token.size() < 2) throw ParseError("line " + std::to_string(line) + ": bad operand '" + token + "'");
  OperandSource source;
  switch (token[0]) {
    case 'r': source = OperandSource::reg; break;
    case 'o': source = OperandSource::obs; break;
    case 'c': source = OperandSource::cnst; break;
    default:
      throw ParseError("line " + std::to_string(line) + ": bad operand '" + token + "'");
  }
  const long long idx = textio::parse_int(std::string_view(token).substr(1));
  if (idx < 0 || idx > 0xffff) {
    throw ParseError("line " + std::to_string(line) + ": operand index out of range");
  }
  return {source, static_cast<std::uint16_t>(idx)};
}

Opcode parse_opcode(const std::string& token, int line) {
  for (int i = 0; i < tpg::kOpcodeCount; ++i) {
    const auto op = static_cast<Opcode>(i);
    if (token == tpg::opcode_name(op)) return op;
  }
  throw ParseError("line " + std::to_string(line) + ": unknown opcode '" + token + "'");
}

// Line reader that tracks line numbers and skips blank lines.
class LineReader {
 public:
  explicit LineReader(const std::string& text) : stream_(text) {}

  // Returns false at end of input.
  bool next(std::vector<std::string>& tokens, int& line_no) {
    std::string line;
    while (std::getline(stream_, line)) {
      ++line_;
      tokens.clear();
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (!tokens.empty()) {
        line_no = line_;
        return true;
      }
    }
    return false;
  }

  int line() const { return line_; }

 private:
  std::istringstream stream_;
  int line_ = 0;
};

}  // namespace

std::string save_graph(const TpgGraph& graph) {
  auto violations = tpg::validate(graph);
  if (!violations.empty()) {
    std::string msg = "save_graph: invalid graph:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }

  std::string out;
  out += kMagic;
  out += ' ';
  out += std::to_string(kVersion);
  out += ' ';
  out += std::to_string(graph.n_actions);
  out += ' ';
  out += std::to_string(graph.n_inputs);
  out += '\n';

  for (const Team& team : graph.teams) {
    out += "team " + std::to_string(team.id) + "\n";
    for (const Edge& edge : team.edges) {
      out += "edge ";
      out += edge.dest.kind == EdgeDest::Kind::team ? "team " : "action ";
      out += std::to_string(edge.dest.id);
      out += ' ';
      out += std::to_string(edge.program.instructions.size());
      out += '\n';
      out += "const";
      for (double c : edge.program.constants) {
        out += ' ';
        out += textio::format_double(c);
      }
      out += '\n';
      for (const Instruction& ins : edge.program.instructions) {
        out += "i ";
        out += tpg::opcode_name(ins.op);
        out += ' ';
        out += std::to_string(ins.dest);
        out += ' ';
        out += operand_token(ins.a);
        out += ' ';
        out += operand_token(ins.b);
        out += '\n';
      }
    }
  }

  out += "roots";
  for (TeamId id : graph.root_ids()) out += ' ' + std::to_string(id);
  out += '\n';
  return out;
}

TpgGraph load_graph(const std::string& text) {
  LineReader reader(text);
  std::vector<std::string> tok;
  int line = 0;

  auto fail = [](int l, const std::string& msg) -> ParseError {
    return ParseError("line " + std::to_string(l) + ": " + msg);
  };

  if (!reader.next(tok, line)) throw ParseError("empty input");
  if (tok.size() != 4 || tok[0] != kMagic) throw fail(line, "bad header");
  if (textio::parse_int(tok[1]) != kVersion) {
    throw fail(line, "unsupported format version " + tok[1]);
  }

  TpgGraph graph;
  graph.n_actions = static_cast<std::uint32_t>(textio::parse_u64(tok[2]));
  graph.n_inputs = static_cast<std::uint32_t>(textio::parse_u64(tok[3]));

  std::vector<TeamId> declared_roots;
  bool roots_seen = false;
  Team* team = nullptr;

  while (reader.next(tok, line)) {
    if (roots_seen) throw fail(line, "content after roots line");
    if (tok[0] == "team") {
      if (tok.size() != 2) throw fail(line, "team line needs one id");
      Team t;
      t.id = static_cast<TeamId>(textio::parse_u64(tok[1]));
      if (!graph.teams.empty() && graph.teams.back().id >= t.id) {
        throw fail(line, "team ids must be strictly ascending");
      }
      graph.teams.push_back(std::move(t));
      team = &graph.teams.back();
    } else if (tok[0] == "edge") {
      if (team == nullptr) throw fail(line, "edge before any team");
      if (tok.size() != 4) throw fail(line, "edge line needs kind, id, length");
      Edge edge;
      if (tok[1] == "team") {
        edge.dest.kind = EdgeDest::Kind::team;
      } else if (tok[1] == "action") {
        edge.dest.kind = EdgeDest::Kind::action;
      } else {
        throw fail(line, "edge kind must be 'team' or 'action'");
      }
      edge.dest.id = static_cast<std::uint32_t>(textio::parse_u64(tok[2]));
      const long long n_ins = textio::parse_int(tok[3]);
      if (n_ins < 1) throw fail(line, "edge needs at least one instruction");

      if (!reader.next(tok, line) || tok[0] != "const") throw fail(line, "expected const line");
      if (tok.size() != 1 + tpg::kNumConstants) {
        throw fail(line, "const line needs " + std::to_string(tpg::kNumConstants) + " values");
      }
      for (int i = 0; i < tpg::kNumConstants; ++i) {
        edge.program.constants[i] = textio::parse_double(tok[1 + i]);
      }

      edge.program.instructions.reserve(static_cast<std::size_t>(n_ins));
      for (long long i = 0; i < n_ins; ++i) {
        if (!reader.next(tok, line) || tok[0] != "i") throw fail(line, "expected instruction line");
        if (tok.size() != 5) throw fail(line, "instruction line needs opcode, dest, a, b");
        Instruction ins;
        ins.op = parse_opcode(tok[1], line);
        const long long dest = textio::parse_int(tok[2]);
        if (dest < 0 || dest >= tpg::kNumRegisters) throw fail(line, "dest register out of range");
        ins.dest = static_cast<std::uint8_t>(dest);
        ins.a = parse_operand(tok[3], line);
        ins.b = parse_operand(tok[4], line);
        edge.program.instructions.push_back(ins);
      }
      team->edges.push_back(std::move(edge));
    } else if (tok[0] == "roots") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        declared_roots.push_back(static_cast<TeamId>(textio::parse_u64(tok[i])));
      }
      roots_seen = true;
    } else {
      throw fail(line, "unknown directive '" + tok[0] + "'");
    }
  }
  if (!roots_seen) throw ParseError("truncated input: missing roots line");

  auto violations = tpg::validate(graph);
  if (graph.root_ids() != declared_roots) {
    violations.push_back("declared roots do not match the in-degree-0 teams");
  }
  if (!violations.empty()) {
    std::string msg = "load_graph: invalid graph:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  return graph;
}

namespace {

std::string action_label(std::uint32_t action, const TpgGraph& graph, const DotOptions& options) {
  const int levels = options.n_speed_levels > 0
                         ? options.n_speed_levels
                         : std::max(1, static_cast<int>(graph.n_actions) / 4);
  if (graph.n_actions != static_cast<std::uint32_t>(4 * levels)) {
    return "action " + std::to_string(action);
  }
  const auto a = env::Action::from_id(static_cast<int>(action), levels);
  const double speed = a.speed_level * options.v_max / levels;
  std::ostringstream os;
  os << env::direction_name(a.direction) << " @ ";
  os.precision(3);
  os << speed << " m/s";
  return os.str();
}

}  // namespace

std::string export_dot(const TpgGraph& graph, const tpg::TraversalTrace* highlight,
                       const DotOptions& options) {
  std::vector<std::uint32_t> used_actions;
  for (const Team& team : graph.teams) {
    for (const Edge& edge : team.edges) {
      if (edge.dest.kind == EdgeDest::Kind::action) used_actions.push_back(edge.dest.id);
    }
  }
  std::sort(used_actions.begin(), used_actions.end());
  used_actions.erase(std::unique(used_actions.begin(), used_actions.end()), used_actions.end());

  auto on_path = [highlight](TeamId team) {
    if (highlight == nullptr) return false;
    return std::any_of(highlight->steps.begin(), highlight->steps.end(),
                       [team](const tpg::TraceStep& s) { return s.team == team; });
  };
  auto winning_edge = [highlight](TeamId team, std::uint32_t index) {
    if (highlight == nullptr) return false;
    return std::any_of(
        highlight->steps.begin(), highlight->steps.end(),
        [team, index](const tpg::TraceStep& s) { return s.team == team && s.edge_index == index; });
  };

  std::string out = "digraph tpg {\n  rankdir=TB;\n";
  for (const Team& team : graph.teams) {
    out += "  t" + std::to_string(team.id) + " [shape=ellipse, label=\"team " +
           std::to_string(team.id) + "\"";
    if (on_path(team.id)) out += ", style=filled, fillcolor=gold";
    out += "];\n";
  }
  for (std::uint32_t action : used_actions) {
    out += "  a" + std::to_string(action) + " [shape=box, label=\"" +
           action_label(action, graph, options) + "\"";
    if (highlight != nullptr && highlight->action == action &&
        !highlight->steps.empty()) {
      out += ", style=filled, fillcolor=gold";
    }
    out += "];\n";
  }
  for (const Team& team : graph.teams) {
    for (std::uint32_t i = 0; i < team.edges.size(); ++i) {
      const Edge& edge = team.edges[i];
      out += "  t" + std::to_string(team.id) + " -> ";
      out += (edge.dest.kind == EdgeDest::Kind::team ? "t" : "a") + std::to_string(edge.dest.id);
      out += " [label=\"" + std::to_string(edge.program.instructions.size()) + "\"";
      if (winning_edge(team.id, i)) out += ", color=red, penwidth=2.0";
      out += "];\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace tpgf::io
