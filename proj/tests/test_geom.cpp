#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tpgf/geom.hpp"
#include "tpgf/rng.hpp"

using tpgf::Rng;
using namespace tpgf::geom;

namespace {

Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

}  // namespace

TEST_CASE("ray_circle_intersect collinear hit") {
  Ray ray{{0, 0}, {0, 1}};
  Circle circle{{0, 5}, 1.0};
  auto t = ray_circle_intersect(ray, circle);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ray_circle_intersect circle behind ray") {
  Ray ray{{0, 0}, {0, -1}};
  Circle circle{{0, 5}, 1.0};
  CHECK_FALSE(ray_circle_intersect(ray, circle).has_value());
}

TEST_CASE("ray_circle_intersect from inside returns exit distance") {
  Ray ray{{0, 5.2}, {1, 0}};
  Circle circle{{0, 5}, 1.0};
  auto t = ray_circle_intersect(ray, circle);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(std::sqrt(1.0 - 0.2 * 0.2)).epsilon(1e-12));
}

TEST_CASE("ray_circle_intersect matches marching oracle on 1e4 random pairs") {
  Rng rng(20250810);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec2 origin{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Circle circle{{rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(0.2, 1.5)};
    if ((circle.center - origin).norm() <= circle.radius) {
      --i;  // the marching oracle is only meaningful for outside origins
      continue;
    }
    // Half the rays are aimed near the circle so the hit path gets exercised.
    double angle = rng.uniform(0, 2 * M_PI);
    if (i % 2 == 0) {
      const Vec2 to_center = circle.center - origin;
      angle = std::atan2(to_center.y, to_center.x) + rng.uniform(-0.4, 0.4);
    }
    Ray ray{origin, unit_from_angle(angle)};
    auto got = ray_circle_intersect(ray, circle);
    auto want = oracle::ray_circle_march(ray, circle);
    if (got.has_value() != want.has_value()) {
      // Grazing rays: the two may disagree only within the tangency band.
      const double closest = oracle::ray_center_closest(ray, circle);
      REQUIRE(std::abs(closest - circle.radius) <= 2e-4);
      continue;
    }
    if (got) {
      ++hits;
      CHECK(std::abs(*got - *want) <= 2e-4);
    }
  }
  CHECK(hits > 1000);  // the generator must actually exercise the hit path
}

TEST_CASE("ray_circle_intersect hit point lies on the circle") {
  Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    Ray ray{{rng.uniform(-5, 5), rng.uniform(-5, 5)}, unit_from_angle(rng.uniform(0, 2 * M_PI))};
    Circle circle{{rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(0.2, 1.5)};
    auto t = ray_circle_intersect(ray, circle);
    if (!t) continue;
    REQUIRE(*t >= 0.0);
    const Vec2 p = ray.origin + ray.direction * *t;
    CHECK(std::abs((p - circle.center).norm() - circle.radius) <= 1e-6);
  }
}

TEST_CASE("ray_circle_intersect is invariant under rotation about the origin of the ray") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 origin{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double beam = rng.uniform(0, 2 * M_PI);
    Circle circle{{rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(0.2, 1.5)};
    const double rot = rng.uniform(0, 2 * M_PI);

    Ray ray{origin, unit_from_angle(beam)};
    const Vec2 rel = circle.center - origin;
    const double c = std::cos(rot), s = std::sin(rot);
    Ray rotated_ray{origin, unit_from_angle(beam + rot)};
    Circle rotated_circle{
        {origin.x + c * rel.x - s * rel.y, origin.y + s * rel.x + c * rel.y}, circle.radius};

    auto a = ray_circle_intersect(ray, circle);
    auto b = ray_circle_intersect(rotated_ray, rotated_circle);
    if (!a && !b) continue;
    // Tangency can flip under rotation round-off; everything else must agree.
    if (a.has_value() != b.has_value()) {
      const double closest = oracle::ray_center_closest(ray, circle);
      REQUIRE(std::abs(closest - circle.radius) <= 1e-7);
      continue;
    }
    CHECK(std::abs(*a - *b) <= 1e-9 * (1.0 + std::abs(*a)));
  }
}

TEST_CASE("rect_circle_overlap containment and gap") {
  Rect rect{{0, 0}, 0.1, 0.1};
  CHECK(rect_circle_overlap(rect, Circle{{0, 0}, 0.5}));
  CHECK_FALSE(rect_circle_overlap(rect, Circle{{1, 0}, 0.5}));
}

TEST_CASE("rect_circle_overlap tangent contact counts") {
  Rect rect{{0, 0}, 0.1, 0.1};
  CHECK(rect_circle_overlap(rect, Circle{{0.6, 0}, 0.5}));
}

TEST_CASE("rect_circle_overlap matches grid oracle on 1e4 random pairs") {
  Rng rng(42);
  int overlaps = 0;
  for (int i = 0; i < 10000; ++i) {
    Rect rect{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0.02, 0.2),
              rng.uniform(0.02, 0.2)};
    Circle circle{{rect.center.x + rng.uniform(-1.2, 1.2), rect.center.y + rng.uniform(-1.2, 1.2)},
                  rng.uniform(0.05, 0.8)};
    const bool got = rect_circle_overlap(rect, circle);
    const bool want = oracle::rect_circle_grid(rect, circle);
    if (got != want) {
      REQUIRE(std::abs(oracle::rect_circle_gap(rect, circle)) <= 2e-3);
      continue;
    }
    overlaps += got ? 1 : 0;
  }
  CHECK(overlaps > 1000);
  CHECK(overlaps < 9000);
}

TEST_CASE("rect_circle_overlap is translation invariant") {
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    Rect rect{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0.02, 0.3),
              rng.uniform(0.02, 0.3)};
    Circle circle{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(0.05, 1.0)};
    const Vec2 offset{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    Rect moved_rect{rect.center + offset, rect.half_width, rect.half_height};
    Circle moved_circle{circle.center + offset, circle.radius};
    CHECK(rect_circle_overlap(rect, circle) == rect_circle_overlap(moved_rect, moved_circle));
  }
}
