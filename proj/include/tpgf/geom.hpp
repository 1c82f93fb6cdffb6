#pragma once

#include <cmath>
#include <optional>

namespace tpgf::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  constexpr double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
  bool operator==(const Vec2&) const = default;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;  // > 0
  bool operator==(const Circle&) const = default;
};

// Axis-aligned rectangle.
struct Rect {
  Vec2 center;
  double half_width = 0.0;   // > 0
  double half_height = 0.0;  // > 0
};

struct Ray {
  Vec2 origin;
  Vec2 direction;  // unit length
};

// Smallest t >= 0 with |origin + t*direction - center| = radius, or nullopt.
// Tangent contact counts as a hit. If the origin is inside the circle the
// forward exit distance is returned.
inline std::optional<double> ray_circle_intersect(const Ray& ray, const Circle& circle) {
  const Vec2 oc = circle.center - ray.origin;
  const double proj = ray.direction.dot(oc);
  const double disc = proj * proj - (oc.norm2() - circle.radius * circle.radius);
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  const double t_near = proj - s;
  if (t_near >= 0.0) return t_near;
  const double t_far = proj + s;
  if (t_far >= 0.0) return t_far;
  return std::nullopt;
}

// Closed rectangle versus closed disk; tangent contact counts as overlap.
inline bool rect_circle_overlap(const Rect& rect, const Circle& circle) {
  const double dx = std::abs(circle.center.x - rect.center.x);
  const double dy = std::abs(circle.center.y - rect.center.y);
  const double gx = dx > rect.half_width ? dx - rect.half_width : 0.0;
  const double gy = dy > rect.half_height ? dy - rect.half_height : 0.0;
  return gx * gx + gy * gy <= circle.radius * circle.radius;
}

}  // namespace tpgf::geom
