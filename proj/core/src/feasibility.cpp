#include "gearsyn/feasibility.hpp"

#include <algorithm>
#include <vector>

namespace gearsyn {

Aabb Aabb::around(const Vec3& center, const Vec3& extent) {
  const Vec3 half = extent * 0.5;
  return Aabb{center - half, center + half};
}

bool boxes_intersect(const Aabb& a, const Aabb& b) {
  for (std::size_t k = 0; k < 3; ++k) {
    const double lo = std::max(a.min[k], b.min[k]);
    const double hi = std::min(a.max[k], b.max[k]);
    if (hi - lo <= kContactTolerance) return false;
  }
  return true;
}

std::optional<Collision> check_interference(std::span<const Placement> placements) {
  std::vector<Aabb> boxes;
  boxes.reserve(placements.size());
  for (const auto& p : placements) boxes.push_back(Aabb::of(p));
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 2; j < boxes.size(); ++j) {
      if (boxes_intersect(boxes[i], boxes[j])) return Collision{i, j};
    }
  }
  return std::nullopt;
}

}  // namespace gearsyn
