#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "tpgf/tpg.hpp"

namespace tpgf::io {

// Malformed input; the message carries the line number.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally well-formed input that violates graph invariants; the message
// lists every violation.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-oriented text format, version 1 (see docs/formats.md):
//
//   tpgforest-graph 1 <n_actions> <n_inputs>
//   team <id>
//   edge <team|action> <dest-id> <n-instructions>
//   const <c0> ... <c7>
//   i <opcode> <dest-register> <operand-a> <operand-b>
//   ...
//   roots <id> <id> ...
//
// Operands are r<k> (register), o<k> (observation) or c<k> (constant).
// Teams are written in ascending id order and edges in list order, so
// identical graphs serialize identically.
std::string save_graph(const tpg::TpgGraph& graph);
tpg::TpgGraph load_graph(const std::string& text);

struct DotOptions {
  double v_max = 1.0;       // used for the action speed labels
  int n_speed_levels = 0;   // 0: derived as n_actions / 4
};

// Graphviz export: teams as ellipses, actions as boxes labeled with their
// direction and speed, edges labeled with program length. A traversal trace
// highlights the visited teams and winning edges.
std::string export_dot(const tpg::TpgGraph& graph,
                       const tpg::TraversalTrace* highlight = nullptr,
                       const DotOptions& options = {});

}  // namespace tpgf::io
