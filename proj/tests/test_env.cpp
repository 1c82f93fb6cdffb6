#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tpgf/env.hpp"
#include "tpgf/rng.hpp"

using namespace tpgf::env;
using tpgf::Rng;
using tpgf::geom::Vec2;

namespace {

EnvConfig quick_cfg() {
  EnvConfig cfg;
  cfg.n_trees = 0;
  cfg.a_max = 1000.0;  // commanded speed reached within one step
  return cfg;
}

Action forward_full(const EnvConfig& cfg) { return {Direction::forward, cfg.n_speed_levels}; }

}  // namespace

TEST_CASE("reward shaping functions") {
  CHECK(v_tpg(0.0, 22.0) == -22.0);
  CHECK(v_tpg(22.0, 22.0) == 0.0);
  CHECK(v_tpg(10.5, 22.0) == -11.5);
  CHECK(v_tpg(5.0, 22.0) == -17.0);
  CHECK(v_ppo(1.2, 1.0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(v_ppo(1.0, 1.2) == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(v_ppo(1.0, 1.0) == 0.0);
}

TEST_CASE("generate_forest is deterministic per seed") {
  EnvConfig cfg;
  auto a = generate_forest(cfg, 1);
  auto b = generate_forest(cfg, 1);
  auto c = generate_forest(cfg, 2);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.size() == 50);
}

TEST_CASE("generate_forest respects geometry constraints") {
  EnvConfig cfg;
  cfg.n_trees = 80;
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    auto trees = generate_forest(cfg, seed);
    REQUIRE(trees.size() == 80);
    for (size_t i = 0; i < trees.size(); ++i) {
      const auto& t = trees[i];
      CHECK(t.shape.center.x >= cfg.x_min);
      CHECK(t.shape.center.x <= cfg.x_max);
      CHECK(t.shape.center.y >= cfg.y_spawn_min);
      CHECK(t.shape.center.y <= cfg.y_spawn_max);
      CHECK(t.shape.radius >= cfg.tree_radius_min);
      CHECK(t.shape.radius <= cfg.tree_radius_max);
      CHECK(t.shape.center.norm() - t.shape.radius >= cfg.min_spare_distance);
      for (size_t j = i + 1; j < trees.size(); ++j) {
        const double gap = (t.shape.center - trees[j].shape.center).norm() - t.shape.radius -
                           trees[j].shape.radius;
        CHECK(gap >= cfg.min_spare_distance - 1e-12);
      }
    }
  }
}

TEST_CASE("dynamic_fraction splits the band: bottom static, top moving") {
  EnvConfig cfg;
  cfg.dynamic_fraction = 0.5;
  cfg.n_trees = 60;
  auto trees = generate_forest(cfg, 11);
  const double threshold = cfg.y_spawn_max - 0.5 * (cfg.y_spawn_max - cfg.y_spawn_min);
  int moving = 0;
  for (const auto& t : trees) {
    if (t.shape.center.y < threshold) {
      CHECK(t.vx == 0.0);
    } else {
      ++moving;
      CHECK(std::abs(t.vx) <= cfg.dynamic_speed_max);
      CHECK(t.x_lo == cfg.x_min + t.shape.radius);
      CHECK(t.x_hi == cfg.x_max - t.shape.radius);
      CHECK(t.shape.center.x >= t.x_lo);
      CHECK(t.shape.center.x <= t.x_hi);
    }
  }
  CHECK(moving > 10);  // about half the band
  CHECK(moving < 50);
}

TEST_CASE("generate_forest throws PlacementInfeasible on overdense configs") {
  EnvConfig cfg;
  cfg.x_min = -1.0;
  cfg.x_max = 1.0;
  cfg.y_spawn_min = 2.0;
  cfg.y_spawn_max = 3.0;
  cfg.n_trees = 50;
  CHECK_THROWS_AS(generate_forest(cfg, 1), PlacementInfeasible);
}

TEST_CASE("lidar_scan on empty forest returns range everywhere") {
  EnvConfig cfg;
  auto scan = lidar_scan({0, 0}, {}, cfg);
  REQUIRE(scan.size() == 36);
  for (double d : scan) CHECK(d == cfg.lidar_range);
}

TEST_CASE("lidar_scan collinear tree") {
  EnvConfig cfg;
  std::vector<Tree> trees{{{{0.0, 2.0}, 0.5}, 0, 0, 0}};
  auto scan = lidar_scan({0, 0}, trees, cfg);
  CHECK(scan[0] == doctest::Approx(1.5).epsilon(1e-12));  // beam 0 points at +y
  CHECK(scan[18] == cfg.lidar_range);                     // opposite beam sees nothing
}

TEST_CASE("lidar_scan matches per-tree marching oracle on random scenes") {
  EnvConfig cfg;
  cfg.lidar_n_beams = 12;
  Rng rng(314159);
  for (int scene = 0; scene < 1000; ++scene) {
    const Vec2 origin{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    std::vector<Tree> trees;
    const int n = rng.uniform_int(0, 4);
    for (int k = 0; k < n; ++k) {
      tpgf::geom::Circle c{{origin.x + rng.uniform(-4, 4), origin.y + rng.uniform(-4, 4)},
                           rng.uniform(0.2, 0.75)};
      if ((c.center - origin).norm() <= c.radius + 1e-3) {
        --k;  // keep the sensor outside every tree
        continue;
      }
      trees.push_back({c, 0, c.center.x, c.center.x});
    }
    auto scan = lidar_scan(origin, trees, cfg);
    for (int i = 0; i < cfg.lidar_n_beams; ++i) {
      const double theta = 2.0 * M_PI * i / cfg.lidar_n_beams;
      const tpgf::geom::Ray ray{origin, {-std::sin(theta), std::cos(theta)}};
      double want = cfg.lidar_range;
      bool near_tangent = false;
      for (const auto& tree : trees) {
        if (auto t = oracle::ray_circle_march(ray, tree.shape)) want = std::min(want, *t);
        if (std::abs(oracle::ray_center_closest(ray, tree.shape) - tree.shape.radius) <= 2e-4)
          near_tangent = true;
      }
      if (std::abs(scan[i] - want) > 2e-4) {
        REQUIRE(near_tangent);  // disagreement is only allowed at grazing incidence
      }
    }
  }
}

TEST_CASE("step reaches the goal line with +100") {
  auto cfg = quick_cfg();
  DroneForestEnv env(cfg);
  env.reset(1);
  StepResult last;
  while (env.running()) last = env.step(forward_full(cfg), RewardMode::tpg);
  CHECK(last.terminal == Terminal::goal_reached);
  CHECK(last.reward == 100.0);
  CHECK(last.y_uav >= cfg.y_goal);
  CHECK(evaluation_score(env) == last.y_uav);
  CHECK(evaluation_score(env) <= cfg.y_goal + cfg.v_max * cfg.dt);
}

TEST_CASE("step collision with a tree gives -25") {
  auto cfg = quick_cfg();
  DroneForestEnv env(cfg);
  env.reset_with({{{{0.0, 2.0}, 0.5}, 0, 0, 0}}, 7);
  StepResult last;
  while (env.running()) last = env.step(forward_full(cfg), RewardMode::tpg);
  CHECK(last.terminal == Terminal::collision);
  CHECK(last.reward == -25.0);
  CHECK(last.y_uav < 2.0);
  CHECK(evaluation_score(env) == last.y_uav);
}

TEST_CASE("collision wins over goal when both happen in one step") {
  auto cfg = quick_cfg();
  DroneForestEnv env(cfg);
  env.reset_with({{{{0.0, 22.7}, 0.6}, 0, 0, 0}}, 7);
  StepResult last;
  while (env.running()) last = env.step(forward_full(cfg), RewardMode::tpg);
  CHECK(last.y_uav >= cfg.y_goal);  // the goal condition held on the final step
  CHECK(last.terminal == Terminal::collision);
  CHECK(last.reward == -25.0);
}

TEST_CASE("crossing the horizontal bounds terminates with the collision penalty") {
  auto cfg = quick_cfg();
  DroneForestEnv env(cfg);
  env.reset(1);
  StepResult last;
  while (env.running()) last = env.step({Direction::right, cfg.n_speed_levels}, RewardMode::tpg);
  CHECK(last.terminal == Terminal::out_of_bounds);
  CHECK(last.reward == -25.0);
}

TEST_CASE("timeout emits the running reward") {
  auto cfg = quick_cfg();
  cfg.max_steps = 5;
  DroneForestEnv env(cfg);
  env.reset(1);
  StepResult last;
  while (env.running()) last = env.step({Direction::forward, 1}, RewardMode::tpg);
  CHECK(last.terminal == Terminal::timeout);
  CHECK(last.reward == v_tpg(last.y_uav, cfg.y_goal));
  CHECK(env.step_count() == 5);
}

TEST_CASE("running reward matches v_tpg / v_ppo branch") {
  auto cfg = quick_cfg();
  DroneForestEnv env(cfg);
  env.reset(1);
  double prev_y = 0.0;
  for (int i = 0; i < 60; ++i) {
    auto res = env.step(forward_full(cfg), RewardMode::tpg);
    CHECK(res.reward == v_tpg(res.y_uav, cfg.y_goal));
    prev_y = res.y_uav;
  }
  DroneForestEnv env2(cfg);
  env2.reset(1);
  prev_y = 0.0;
  for (int i = 0; i < 60; ++i) {
    auto res = env2.step(forward_full(cfg), RewardMode::ppo);
    CHECK(res.reward == doctest::Approx(v_ppo(res.y_uav, prev_y)).epsilon(1e-12));
    prev_y = res.y_uav;
  }
}

TEST_CASE("step after terminal throws EpisodeFinished") {
  auto cfg = quick_cfg();
  cfg.max_steps = 2;
  DroneForestEnv env(cfg);
  env.reset(1);
  env.step(forward_full(cfg), RewardMode::tpg);
  env.step(forward_full(cfg), RewardMode::tpg);
  CHECK_THROWS_AS(env.step(forward_full(cfg), RewardMode::tpg), EpisodeFinished);
}

TEST_CASE("reset determinism and state") {
  EnvConfig cfg;
  DroneForestEnv env(cfg);
  auto obs1 = env.reset(7);
  CHECK(env.drone().velocity == Vec2{0, 0});
  CHECK(env.drone().position == Vec2{0, 0});
  CHECK(env.step_count() == 0);
  auto forest1 = env.trees();
  auto obs2 = env.reset(7);
  CHECK(obs1 == obs2);
  CHECK(forest1 == env.trees());
  env.reset(8);
  CHECK(forest1 != env.trees());
}

TEST_CASE("speed, acceleration and confinement bounds under random action sequences") {
  EnvConfig cfg;
  cfg.n_trees = 8;
  cfg.dynamic_fraction = 0.7;
  cfg.max_steps = 120;
  DroneForestEnv env(cfg);
  Rng rng(2024);
  const double a_step = cfg.a_max * cfg.dt;
  for (int seq = 0; seq < 200; ++seq) {
    env.reset(seq);
    Vec2 prev_v = env.drone().velocity;
    while (env.running()) {
      const int action = static_cast<int>(rng.below(cfg.action_count()));
      env.step(action, RewardMode::tpg);
      const Vec2 v = env.drone().velocity;
      CHECK(v.norm() <= cfg.v_max + 1e-12);
      CHECK((v - prev_v).norm() <= a_step + 1e-9);
      prev_v = v;
      for (const auto& tree : env.trees()) {
        CHECK(tree.shape.center.x >= tree.x_lo - 1e-12);
        CHECK(tree.shape.center.x <= tree.x_hi + 1e-12);
      }
    }
    CHECK(env.step_count() <= cfg.max_steps);
  }
}

TEST_CASE("dynamic trees reflect at their motion bounds") {
  auto cfg = quick_cfg();
  cfg.max_steps = 2000;
  DroneForestEnv env(cfg);
  Tree mover{{{0.0, 10.0}, 0.5}, 0.29, -1.0, 1.0};
  env.reset_with({mover}, 0);
  bool flipped = false;
  double prev_vx = 0.29;
  while (env.running()) {
    env.step({Direction::backward, 1}, RewardMode::tpg);
    const auto& t = env.trees()[0];
    CHECK(t.shape.center.x >= t.x_lo - 1e-12);
    CHECK(t.shape.center.x <= t.x_hi + 1e-12);
    CHECK(std::abs(t.vx) == doctest::Approx(0.29));
    if (t.vx != prev_vx) flipped = true;
    prev_vx = t.vx;
  }
  CHECK(flipped);
}

TEST_CASE("replaying an action sequence reproduces the trajectory bit-exactly") {
  EnvConfig cfg;
  cfg.n_trees = 20;
  DroneForestEnv env(cfg);
  Rng rng(99);
  std::vector<int> actions;
  std::vector<Vec2> positions;
  env.reset(123);
  while (env.running() && actions.size() < 300) {
    const int a = static_cast<int>(rng.below(cfg.action_count()));
    actions.push_back(a);
    env.step(a, RewardMode::tpg);
    positions.push_back(env.drone().position);
  }
  DroneForestEnv env2(cfg);
  env2.reset(123);
  for (size_t i = 0; i < actions.size(); ++i) {
    env2.step(actions[i], RewardMode::tpg);
    REQUIRE(env2.drone().position == positions[i]);
  }
}
