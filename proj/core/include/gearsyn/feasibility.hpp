#pragma once

#include <optional>
#include <span>

#include "gearsyn/geometry.hpp"
#include "gearsyn/simulator.hpp"

namespace gearsyn {

struct Aabb {
  Vec3 min;
  Vec3 max;

  static Aabb around(const Vec3& center, const Vec3& extent);
  static Aabb of(const Placement& p) { return around(p.center, p.extent); }
};

/// Boxes closer than this along an axis count as touching.
inline constexpr double kContactTolerance = 1e-9;

/// True iff the open boxes overlap on all three axes; touching faces and
/// zero-width boxes never intersect.
bool boxes_intersect(const Aabb& a, const Aabb& b);

struct Collision {
  std::size_t first = 0;
  std::size_t second = 0;
  friend bool operator==(const Collision&, const Collision&) = default;
};

/// Tests every pair (i, j) with j > i + 1; components directly connected
/// in the chain are never compared. Returns the lexicographically first
/// collision, or nullopt when the train is free of interference.
std::optional<Collision> check_interference(std::span<const Placement> placements);

}  // namespace gearsyn
