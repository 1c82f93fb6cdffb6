#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpgf/geom.hpp"

namespace tpgf::env {

// Thrown by generate_forest when rejection sampling cannot place a tree.
struct PlacementInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by step() once the episode has reached a terminal state.
struct EpisodeFinished : std::logic_error {
  using std::logic_error::logic_error;
};

struct EnvConfig {
  double x_min = -10.0;  // horizontal bounds, x_min < 0 < x_max
  double x_max = 10.0;
  double y_goal = 22.0;       // goal line y = g, g > 0
  double y_spawn_min = 2.0;   // band in which tree centers are placed
  double y_spawn_max = 20.0;
  int n_trees = 50;
  double tree_radius_min = 0.2;
  double tree_radius_max = 0.75;
  double min_spare_distance = 0.75;  // gap between tree perimeters and around the spawn point
  double drone_half_width = 0.1;
  double drone_half_height = 0.1;
  double v_max = 1.0;    // m/s
  double a_max = 0.6;    // m/s^2
  double dt = 0.1;       // s per step
  int max_steps = 600;
  int lidar_n_beams = 36;
  double lidar_range = 3.0;
  int n_speed_levels = 10;  // 4 directions x levels = action count
  double dynamic_fraction = 0.0;   // top fraction of the spawn band whose trees move
  double dynamic_speed_max = 0.3;  // m/s

  int action_count() const { return 4 * n_speed_levels; }

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

struct Tree {
  geom::Circle shape;
  double vx = 0.0;    // constant within an episode; 0 for static trees
  double x_lo = 0.0;  // motion bounds; x_lo <= center.x <= x_hi at all times
  double x_hi = 0.0;

  bool moving() const { return vx != 0.0; }
  bool operator==(const Tree&) const = default;
};

struct DroneState {
  geom::Vec2 position;
  geom::Vec2 velocity;
  geom::Vec2 commanded_velocity;
};

// forward(+y), left(-x), backward(-y), right(+x)
enum class Direction : int { forward = 0, left = 1, backward = 2, right = 3 };

struct Action {
  Direction direction = Direction::forward;
  int speed_level = 1;  // 1..n_speed_levels

  static Action from_id(int id, int n_speed_levels);
  int id(int n_speed_levels) const;
  geom::Vec2 unit() const;
  double target_speed(const EnvConfig& cfg) const {
    return speed_level * cfg.v_max / cfg.n_speed_levels;
  }
};

const char* direction_name(Direction d);

enum class Terminal { running, collision, goal_reached, out_of_bounds, timeout };

const char* terminal_name(Terminal t);
Terminal terminal_from_name(const std::string& name);

enum class RewardMode { tpg, ppo };

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  Terminal terminal = Terminal::running;
  double y_uav = 0.0;
};

// Running-step reward shaping: distance to the goal along y, negative and
// approaching 0 from the left as the drone progresses.
inline double v_tpg(double y_uav, double y_goal) { return y_uav - y_goal; }

// Running-step reward shaping: per-step progress along y, doubled when
// negative.
inline double v_ppo(double y_k, double y_k_minus_1) {
  const double delta = y_k - y_k_minus_1;
  return y_k >= y_k_minus_1 ? delta : 2.0 * delta;
}

// Rejection-samples n_trees circles into the spawn band. Pairwise perimeter
// gaps and the gap to the spawn point stay >= min_spare_distance. Trees whose
// center lies in the top dynamic_fraction of the band move horizontally at a
// constant random velocity between [x_min + r, x_max - r]; their initial
// center must already lie within those bounds or the placement is rejected.
// Identical (config, seed) produce identical forests.
std::vector<Tree> generate_forest(const EnvConfig& cfg, std::uint64_t seed);

// One distance per beam; beam i points at angle 2*pi*i/n counterclockwise
// from +y. Distances are clipped to lidar_range; bounds walls are invisible.
std::vector<double> lidar_scan(const geom::Vec2& origin, std::span<const Tree> trees,
                               const EnvConfig& cfg);

// FNV-1a over the canonical text form of the tree list.
std::uint64_t forest_digest(std::span<const Tree> trees);

class DroneForestEnv {
 public:
  explicit DroneForestEnv(EnvConfig cfg);

  // Drone to the origin with zero velocity, fresh forest from (config, seed),
  // step counter zeroed. Returns the initial scan.
  std::vector<double> reset(std::uint64_t seed);

  // Same protocol but with an explicit forest (tests, replay of hand-built
  // scenes). The seed tag is recorded but no generation happens.
  std::vector<double> reset_with(std::vector<Tree> trees, std::uint64_t seed_tag);

  // One control step:
  //   1. commanded velocity <- action direction * target speed
  //   2. velocity moves toward it by at most a_max*dt, then is clamped to v_max
  //   3. position integrates velocity*dt
  //   4. moving trees advance, reflecting at their bounds
  //   5. terminal check, in priority order: tree collision / bounds crossing
  //      (-25), goal line reached (+100), timeout; otherwise the running
  //      reward is v_tpg or v_ppo depending on mode
  //   6. fresh scan
  // Throws EpisodeFinished after a terminal step.
  StepResult step(const Action& action, RewardMode mode);
  StepResult step(int action_id, RewardMode mode);

  bool running() const { return status_ == Terminal::running; }
  Terminal status() const { return status_; }
  int step_count() const { return steps_; }
  const EnvConfig& config() const { return cfg_; }
  const std::vector<Tree>& trees() const { return trees_; }
  const DroneState& drone() const { return drone_; }
  std::uint64_t seed() const { return seed_; }

 private:
  void scan_into(std::vector<double>& out) const;

  EnvConfig cfg_;
  std::vector<geom::Vec2> beam_dirs_;
  std::vector<Tree> trees_;
  DroneState drone_;
  Terminal status_ = Terminal::running;
  int steps_ = 0;
  std::uint64_t seed_ = 0;
  mutable std::vector<std::uint32_t> scan_candidates_;  // scratch
};

// Final y coordinate of a finished episode (the evaluation metric).
double evaluation_score(const DroneForestEnv& env);

}  // namespace tpgf::env
