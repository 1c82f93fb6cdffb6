#include "tpgf/env.hpp"

#include <algorithm>
#include <cmath>

#include "tpgf/rng.hpp"

namespace tpgf::env {

namespace {

constexpr int kMaxConsecutiveRejections = 100000;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("EnvConfig: ") + what);
}

}  // namespace

void EnvConfig::validate() const {
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_min < 0.0 && 0.0 < x_max,
          "x_min < 0 < x_max required");
  require(0.0 < y_spawn_min && y_spawn_min < y_spawn_max && y_spawn_max < y_goal,
          "0 < y_spawn_min < y_spawn_max < y_goal required");
  require(n_trees >= 0, "n_trees >= 0 required");
  require(tree_radius_min > 0.0 && tree_radius_min <= tree_radius_max,
          "0 < tree_radius_min <= tree_radius_max required");
  require(min_spare_distance >= 0.0, "min_spare_distance >= 0 required");
  require(drone_half_width > 0.0 && drone_half_height > 0.0, "drone half extents must be > 0");
  require(v_max > 0.0, "v_max > 0 required");
  require(a_max > 0.0, "a_max > 0 required");
  require(dt > 0.0, "dt > 0 required");
  require(max_steps > 0, "max_steps > 0 required");
  require(lidar_n_beams >= 1, "lidar_n_beams >= 1 required");
  require(lidar_range > 0.0, "lidar_range > 0 required");
  require(n_speed_levels >= 1, "n_speed_levels >= 1 required");
  require(dynamic_fraction >= 0.0 && dynamic_fraction <= 1.0, "dynamic_fraction in [0,1] required");
  require(dynamic_speed_max >= 0.0, "dynamic_speed_max >= 0 required");
}

Action Action::from_id(int id, int n_speed_levels) {
  if (id < 0 || id >= 4 * n_speed_levels) throw std::out_of_range("Action id out of range");
  return Action{static_cast<Direction>(id / n_speed_levels), id % n_speed_levels + 1};
}

int Action::id(int n_speed_levels) const {
  return static_cast<int>(direction) * n_speed_levels + speed_level - 1;
}

geom::Vec2 Action::unit() const {
  switch (direction) {
    case Direction::forward: return {0.0, 1.0};
    case Direction::left: return {-1.0, 0.0};
    case Direction::backward: return {0.0, -1.0};
    case Direction::right: return {1.0, 0.0};
  }
  return {0.0, 1.0};
}

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::forward: return "forward";
    case Direction::left: return "left";
    case Direction::backward: return "backward";
    case Direction::right: return "right";
  }
  return "?";
}

const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::running: return "running";
    case Terminal::collision: return "collision";
    case Terminal::goal_reached: return "goal_reached";
    case Terminal::out_of_bounds: return "out_of_bounds";
    case Terminal::timeout: return "timeout";
  }
  return "?";
}

Terminal terminal_from_name(const std::string& name) {
  for (Terminal t : {Terminal::running, Terminal::collision, Terminal::goal_reached,
                     Terminal::out_of_bounds, Terminal::timeout}) {
    if (name == terminal_name(t)) return t;
  }
  throw std::invalid_argument("unknown terminal flag: " + name);
}

std::vector<Tree> generate_forest(const EnvConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Tree> trees;
  trees.reserve(cfg.n_trees);

  const double band = cfg.y_spawn_max - cfg.y_spawn_min;
  const double dyn_threshold = cfg.y_spawn_max - cfg.dynamic_fraction * band;
  int rejections = 0;

  while (static_cast<int>(trees.size()) < cfg.n_trees) {
    const double x = rng.uniform(cfg.x_min, cfg.x_max);
    const double y = rng.uniform(cfg.y_spawn_min, cfg.y_spawn_max);
    const double r = rng.uniform(cfg.tree_radius_min, cfg.tree_radius_max);
    const bool dynamic = cfg.dynamic_fraction > 0.0 && y >= dyn_threshold;

    bool ok = std::sqrt(x * x + y * y) - r >= cfg.min_spare_distance;  // spawn point clearance
    if (ok && dynamic && (x < cfg.x_min + r || x > cfg.x_max - r)) ok = false;
    if (ok) {
      for (const Tree& other : trees) {
        const double dx = x - other.shape.center.x;
        const double dy = y - other.shape.center.y;
        const double gap = std::sqrt(dx * dx + dy * dy) - r - other.shape.radius;
        if (gap < cfg.min_spare_distance) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      if (++rejections >= kMaxConsecutiveRejections) {
        throw PlacementInfeasible("generate_forest: " + std::to_string(rejections) +
                                  " consecutive rejections placing tree " +
                                  std::to_string(trees.size()) + " of " +
                                  std::to_string(cfg.n_trees));
      }
      continue;
    }
    rejections = 0;

    Tree tree{geom::Circle{{x, y}, r}, 0.0, x, x};
    if (dynamic) {
      tree.vx = rng.uniform(-cfg.dynamic_speed_max, cfg.dynamic_speed_max);
      tree.x_lo = cfg.x_min + r;
      tree.x_hi = cfg.x_max - r;
    }
    trees.push_back(tree);
  }
  return trees;
}

std::vector<double> lidar_scan(const geom::Vec2& origin, std::span<const Tree> trees,
                               const EnvConfig& cfg) {
  std::vector<double> out(cfg.lidar_n_beams, cfg.lidar_range);
  for (int i = 0; i < cfg.lidar_n_beams; ++i) {
    const double theta = 2.0 * M_PI * i / cfg.lidar_n_beams;
    const geom::Vec2 dir{-std::sin(theta), std::cos(theta)};  // CCW from +y
    for (const Tree& tree : trees) {
      if (auto t = geom::ray_circle_intersect({origin, dir}, tree.shape)) {
        out[i] = std::min(out[i], *t);
      }
    }
    out[i] = std::min(out[i], cfg.lidar_range);
  }
  return out;
}

std::uint64_t forest_digest(std::span<const Tree> trees) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a 64
  auto feed = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    __builtin_memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  for (const Tree& t : trees) {
    feed(t.shape.center.x);
    feed(t.shape.center.y);
    feed(t.shape.radius);
    feed(t.vx);
    feed(t.x_lo);
    feed(t.x_hi);
  }
  return h;
}

DroneForestEnv::DroneForestEnv(EnvConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  beam_dirs_.reserve(cfg_.lidar_n_beams);
  for (int i = 0; i < cfg_.lidar_n_beams; ++i) {
    const double theta = 2.0 * M_PI * i / cfg_.lidar_n_beams;
    beam_dirs_.push_back({-std::sin(theta), std::cos(theta)});
  }
}

std::vector<double> DroneForestEnv::reset(std::uint64_t seed) {
  return reset_with(generate_forest(cfg_, seed), seed);
}

std::vector<double> DroneForestEnv::reset_with(std::vector<Tree> trees, std::uint64_t seed_tag) {
  seed_ = seed_tag;
  trees_ = std::move(trees);
  drone_ = DroneState{};
  status_ = Terminal::running;
  steps_ = 0;
  std::vector<double> obs;
  scan_into(obs);
  return obs;
}

void DroneForestEnv::scan_into(std::vector<double>& out) const {
  out.assign(cfg_.lidar_n_beams, cfg_.lidar_range);

  // Only trees whose perimeter can fall inside lidar_range matter: any hit on
  // a tree satisfies t >= |center - origin| - radius.
  scan_candidates_.clear();
  const geom::Vec2 o = drone_.position;
  for (std::uint32_t k = 0; k < trees_.size(); ++k) {
    const geom::Circle& c = trees_[k].shape;
    if ((c.center - o).norm() - c.radius <= cfg_.lidar_range) scan_candidates_.push_back(k);
  }

  for (int i = 0; i < cfg_.lidar_n_beams; ++i) {
    const geom::Vec2& dir = beam_dirs_[i];
    double best = cfg_.lidar_range;
    for (std::uint32_t k : scan_candidates_) {
      const geom::Circle& c = trees_[k].shape;
      const geom::Vec2 oc = c.center - o;
      const double proj = dir.dot(oc);
      if (proj - c.radius >= best) continue;  // cannot beat the current minimum
      const double disc = proj * proj - (oc.norm2() - c.radius * c.radius);
      if (disc < 0.0) continue;
      const double s = std::sqrt(disc);
      const double t_near = proj - s;
      const double t = t_near >= 0.0 ? t_near : proj + s;
      if (t >= 0.0 && t < best) best = t;
    }
    out[i] = best;
  }
}

StepResult DroneForestEnv::step(int action_id, RewardMode mode) {
  return step(Action::from_id(action_id, cfg_.n_speed_levels), mode);
}

StepResult DroneForestEnv::step(const Action& action, RewardMode mode) {
  if (status_ != Terminal::running) {
    throw EpisodeFinished("step() called after terminal state " +
                          std::string(terminal_name(status_)));
  }

  drone_.commanded_velocity = action.unit() * action.target_speed(cfg_);

  const geom::Vec2 dv = drone_.commanded_velocity - drone_.velocity;
  const double dv_norm = dv.norm();
  const double a_step = cfg_.a_max * cfg_.dt;
  if (dv_norm > a_step) {
    drone_.velocity += dv * (a_step / dv_norm);
  } else {
    drone_.velocity = drone_.commanded_velocity;
  }
  const double v_norm = drone_.velocity.norm();
  if (v_norm > cfg_.v_max) drone_.velocity = drone_.velocity * (cfg_.v_max / v_norm);

  const double prev_y = drone_.position.y;
  drone_.position += drone_.velocity * cfg_.dt;

  for (Tree& tree : trees_) {
    if (!tree.moving()) continue;
    double x = tree.shape.center.x + tree.vx * cfg_.dt;
    while (x < tree.x_lo || x > tree.x_hi) {
      if (x < tree.x_lo) {
        x = 2.0 * tree.x_lo - x;
        tree.vx = -tree.vx;
      } else {
        x = 2.0 * tree.x_hi - x;
        tree.vx = -tree.vx;
      }
    }
    tree.shape.center.x = x;
  }

  ++steps_;

  const geom::Rect body{drone_.position, cfg_.drone_half_width, cfg_.drone_half_height};
  Terminal term = Terminal::running;
  for (const Tree& tree : trees_) {
    if (geom::rect_circle_overlap(body, tree.shape)) {
      term = Terminal::collision;
      break;
    }
  }
  if (term == Terminal::running &&
      (drone_.position.x - cfg_.drone_half_width < cfg_.x_min ||
       drone_.position.x + cfg_.drone_half_width > cfg_.x_max)) {
    term = Terminal::out_of_bounds;
  }
  if (term == Terminal::running && drone_.position.y >= cfg_.y_goal) {
    term = Terminal::goal_reached;
  }
  if (term == Terminal::running && steps_ >= cfg_.max_steps) {
    term = Terminal::timeout;
  }

  double reward;
  if (term == Terminal::collision || term == Terminal::out_of_bounds) {
    reward = -25.0;
  } else if (term == Terminal::goal_reached) {
    reward = 100.0;
  } else {
    reward = mode == RewardMode::tpg ? v_tpg(drone_.position.y, cfg_.y_goal)
                                     : v_ppo(drone_.position.y, prev_y);
  }

  status_ = term;
  StepResult result;
  result.reward = reward;
  result.terminal = term;
  result.y_uav = drone_.position.y;
  scan_into(result.observation);
  return result;
}

double evaluation_score(const DroneForestEnv& env) { return env.drone().position.y; }

}  // namespace tpgf::env
