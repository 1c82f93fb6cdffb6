#include "tpgf/trajectory.hpp"

#include <sstream>

#include "tpgf/serialize.hpp"
#include "tpgf/textio.hpp"

namespace tpgf::io {

namespace {
constexpr const char* kMagic = "# tpgforest-trajectory 1";
}

std::string write_trajectory(const TrajectoryLog& log) {
  std::string out;
  out += kMagic;
  out += "\n# seed " + std::to_string(log.seed);
  out += "\n# forest-digest " + std::to_string(log.forest_digest);
  out += "\n# columns: step pos_x pos_y vel_x vel_y action reward terminal\n";
  for (const TrajectoryRow& row : log.rows) {
    out += std::to_string(row.step);
    out += ' ' + textio::format_double(row.position.x);
    out += ' ' + textio::format_double(row.position.y);
    out += ' ' + textio::format_double(row.velocity.x);
    out += ' ' + textio::format_double(row.velocity.y);
    out += ' ' + std::to_string(row.action);
    out += ' ' + textio::format_double(row.reward);
    out += ' ';
    out += env::terminal_name(row.terminal);
    out += '\n';
  }
  return out;
}

TrajectoryLog read_trajectory(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  auto fail = [&line_no](const std::string& msg) -> ParseError {
    return ParseError("line " + std::to_string(line_no) + ": " + msg);
  };

  if (!std::getline(stream, line) || line != kMagic) {
    line_no = 1;
    throw fail("bad trajectory header");
  }
  ++line_no;

  TrajectoryLog log;
  if (!std::getline(stream, line) || line.rfind("# seed ", 0) != 0) {
    ++line_no;
    throw fail("missing seed line");
  }
  ++line_no;
  log.seed = textio::parse_u64(std::string_view(line).substr(7));

  if (!std::getline(stream, line) || line.rfind("# forest-digest ", 0) != 0) {
    ++line_no;
    throw fail("missing forest-digest line");
  }
  ++line_no;
  log.forest_digest = textio::parse_u64(std::string_view(line).substr(16));

  if (!std::getline(stream, line) || line.rfind("# columns:", 0) != 0) {
    ++line_no;
    throw fail("missing columns line");
  }
  ++line_no;

  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.size() != 8) throw fail("row needs 8 columns");
    TrajectoryRow row;
    row.step = static_cast<int>(textio::parse_int(tok[0]));
    row.position.x = textio::parse_double(tok[1]);
    row.position.y = textio::parse_double(tok[2]);
    row.velocity.x = textio::parse_double(tok[3]);
    row.velocity.y = textio::parse_double(tok[4]);
    row.action = static_cast<int>(textio::parse_int(tok[5]));
    row.reward = textio::parse_double(tok[6]);
    try {
      row.terminal = env::terminal_from_name(tok[7]);
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
    log.rows.push_back(row);
  }
  return log;
}

}  // namespace tpgf::io
