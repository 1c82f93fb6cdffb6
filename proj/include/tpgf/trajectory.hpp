#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpgf/env.hpp"

namespace tpgf::io {

// One record per executed step; positions and velocities are the post-step
// state. Written with shortest-round-trip number formatting so a log replays
// bit-exactly.
struct TrajectoryRow {
  int step = 0;  // 1-based
  geom::Vec2 position;
  geom::Vec2 velocity;
  int action = 0;
  double reward = 0.0;
  env::Terminal terminal = env::Terminal::running;
};

struct TrajectoryLog {
  std::uint64_t seed = 0;
  std::uint64_t forest_digest = 0;
  std::vector<TrajectoryRow> rows;
};

// Text form:
//   # tpgforest-trajectory 1
//   # seed <u64>
//   # forest-digest <u64>
//   # columns: step pos_x pos_y vel_x vel_y action reward terminal
//   <rows, space separated>
std::string write_trajectory(const TrajectoryLog& log);
TrajectoryLog read_trajectory(const std::string& text);

}  // namespace tpgf::io
