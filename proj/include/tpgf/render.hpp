#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpgf/env.hpp"
#include "tpgf/trajectory.hpp"

namespace tpgf::io {

// The trajectory log does not belong to the given forest.
struct MismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  bool operator==(const Image&) const = default;
};

// Binary PPM (P6) bytes.
std::string encode_ppm(const Image& image);

// Top-down plot: trees as filled circles (moving trees get motion-bound
// whiskers), the horizontal bounds and goal line, the drone path colored by
// step index and a marker at the terminal point. Throws MismatchError when
// the log's forest digest disagrees with the forest.
Image render_trajectory(const TrajectoryLog& log, std::span<const env::Tree> forest,
                        const env::EnvConfig& cfg, double pixels_per_meter = 24.0);

}  // namespace tpgf::io
