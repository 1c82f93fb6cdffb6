#include "tpgf/render.hpp"

#include <algorithm>
#include <cmath>

namespace tpgf::io {

namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kWall{60, 60, 60};
constexpr Rgb kGoal{40, 170, 40};
constexpr Rgb kStaticTree{34, 120, 34};
constexpr Rgb kMovingTree{226, 140, 30};
constexpr Rgb kCrash{210, 30, 30};
constexpr Rgb kTimeout{120, 120, 120};

class Canvas {
 public:
  Canvas(Image& image, double x_lo, double y_hi, double ppm)
      : img_(image), x_lo_(x_lo), y_hi_(y_hi), ppm_(ppm) {}

  void set(int px, int py, Rgb c) {
    if (px < 0 || py < 0 || px >= img_.width || py >= img_.height) return;
    auto* p = &img_.rgb[3 * (static_cast<std::size_t>(py) * img_.width + px)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  int to_px(double x) const { return static_cast<int>(std::lround((x - x_lo_) * ppm_)); }
  int to_py(double y) const { return static_cast<int>(std::lround((y_hi_ - y) * ppm_)); }

  void fill_circle(double cx, double cy, double radius, Rgb c) {
    const int px0 = to_px(cx - radius) - 1;
    const int px1 = to_px(cx + radius) + 1;
    const int py0 = to_py(cy + radius) - 1;
    const int py1 = to_py(cy - radius) + 1;
    const double r_px = radius * ppm_;
    const double ccx = (cx - x_lo_) * ppm_;
    const double ccy = (y_hi_ - cy) * ppm_;
    for (int py = py0; py <= py1; ++py) {
      for (int px = px0; px <= px1; ++px) {
        const double dx = px - ccx;
        const double dy = py - ccy;
        if (dx * dx + dy * dy <= r_px * r_px) set(px, py, c);
      }
    }
  }

  // Pixel-space segment with the given half thickness.
  void line(double x0, double y0, double x1, double y1, Rgb c, int thick = 1) {
    const double px0 = (x0 - x_lo_) * ppm_;
    const double py0 = (y_hi_ - y0) * ppm_;
    const double px1 = (x1 - x_lo_) * ppm_;
    const double py1 = (y_hi_ - y1) * ppm_;
    const int steps = 1 + static_cast<int>(std::max(std::abs(px1 - px0), std::abs(py1 - py0)));
    for (int s = 0; s <= steps; ++s) {
      const double t = static_cast<double>(s) / steps;
      const int px = static_cast<int>(std::lround(px0 + t * (px1 - px0)));
      const int py = static_cast<int>(std::lround(py0 + t * (py1 - py0)));
      for (int dy = -thick + 1; dy <= thick - 1; ++dy) {
        for (int dx = -thick + 1; dx <= thick - 1; ++dx) set(px + dx, py + dy, c);
      }
    }
  }

 private:
  Image& img_;
  double x_lo_, y_hi_, ppm_;
};

}  // namespace

std::string encode_ppm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
  return out;
}

Image render_trajectory(const TrajectoryLog& log, std::span<const env::Tree> forest,
                        const env::EnvConfig& cfg, double pixels_per_meter) {
  if (env::forest_digest(forest) != log.forest_digest) {
    throw MismatchError("render_trajectory: log forest digest does not match the forest");
  }

  double path_y_lo = 0.0, path_y_hi = 0.0;
  for (const TrajectoryRow& row : log.rows) {
    path_y_lo = std::min(path_y_lo, row.position.y);
    path_y_hi = std::max(path_y_hi, row.position.y);
  }
  const double margin = 1.0;
  const double x_lo = cfg.x_min - margin;
  const double x_hi = cfg.x_max + margin;
  const double y_lo = std::min(-2.0, path_y_lo - margin);
  const double y_hi = std::max(cfg.y_goal + margin, path_y_hi + margin);

  Image image;
  image.width = std::max(8, static_cast<int>(std::lround((x_hi - x_lo) * pixels_per_meter)));
  image.height = std::max(8, static_cast<int>(std::lround((y_hi - y_lo) * pixels_per_meter)));
  image.rgb.assign(static_cast<std::size_t>(image.width) * image.height * 3, 255);
  Canvas canvas(image, x_lo, y_hi, pixels_per_meter);
  (void)kWhite;

  canvas.line(cfg.x_min, y_lo, cfg.x_min, y_hi, kWall, 2);
  canvas.line(cfg.x_max, y_lo, cfg.x_max, y_hi, kWall, 2);
  canvas.line(x_lo, cfg.y_goal, x_hi, cfg.y_goal, kGoal, 2);

  for (const env::Tree& tree : forest) {
    if (tree.moving()) {
      canvas.line(tree.x_lo, tree.shape.center.y, tree.x_hi, tree.shape.center.y, kMovingTree, 1);
      canvas.fill_circle(tree.shape.center.x, tree.shape.center.y, tree.shape.radius, kMovingTree);
    } else {
      canvas.fill_circle(tree.shape.center.x, tree.shape.center.y, tree.shape.radius, kStaticTree);
    }
  }

  geom::Vec2 prev{0.0, 0.0};
  const std::size_t n = log.rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    const Rgb c{static_cast<std::uint8_t>(std::lround(40 + 200 * t)), 40,
                static_cast<std::uint8_t>(std::lround(240 - 200 * t))};
    canvas.line(prev.x, prev.y, log.rows[i].position.x, log.rows[i].position.y, c, 2);
    prev = log.rows[i].position;
  }

  if (!log.rows.empty()) {
    const TrajectoryRow& last = log.rows.back();
    const double x = last.position.x;
    const double y = last.position.y;
    const double m = 0.25;  // marker half extent in meters
    switch (last.terminal) {
      case env::Terminal::collision:
      case env::Terminal::out_of_bounds:
        canvas.line(x - m, y - m, x + m, y + m, kCrash, 2);
        canvas.line(x - m, y + m, x + m, y - m, kCrash, 2);
        break;
      case env::Terminal::goal_reached:
        canvas.fill_circle(x, y, m, kGoal);
        break;
      default:
        canvas.line(x - m, y - m, x + m, y - m, kTimeout, 2);
        canvas.line(x + m, y - m, x + m, y + m, kTimeout, 2);
        canvas.line(x + m, y + m, x - m, y + m, kTimeout, 2);
        canvas.line(x - m, y + m, x - m, y - m, kTimeout, 2);
        break;
    }
  }
  return image;
}

}  // namespace tpgf::io
