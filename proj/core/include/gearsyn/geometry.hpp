#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace gearsyn {

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }

  constexpr Vec3& operator+=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    for (auto& x : v) x *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  constexpr double dot(const Vec3& o) const {
    return v[0] * o.v[0] + v[1] * o.v[1] + v[2] * o.v[2];
  }
  constexpr Vec3 cross(const Vec3& o) const {
    return {v[1] * o.v[2] - v[2] * o.v[1], v[2] * o.v[0] - v[0] * o.v[2],
            v[0] * o.v[1] - v[1] * o.v[0]};
  }
  double norm() const { return std::sqrt(dot(*this)); }
};

/// A signed standard basis vector, +-e0, +-e1 or +-e2.
struct SignedAxis {
  std::uint8_t index = 0;
  std::int8_t sign = 1;

  constexpr SignedAxis() = default;
  constexpr SignedAxis(int idx, int sgn)
      : index(static_cast<std::uint8_t>(idx)), sign(static_cast<std::int8_t>(sgn < 0 ? -1 : 1)) {}

  constexpr Vec3 vec() const {
    Vec3 out;
    out[index] = static_cast<double>(sign);
    return out;
  }
  /// Unsigned direction of this axis (always the positive basis vector).
  constexpr Vec3 unsigned_vec() const {
    Vec3 out;
    out[index] = 1.0;
    return out;
  }
  constexpr SignedAxis flipped() const { return {index, -sign}; }

  /// The k-th perpendicular of the unsigned axis: e_(index+k) mod 3.
  constexpr SignedAxis perpendicular(int k, int sgn) const {
    return {(index + k) % 3, sgn};
  }

  /// Cross product of two orthogonal signed axes.
  constexpr SignedAxis cross(const SignedAxis& o) const {
    if (index == o.index) throw std::invalid_argument("cross of parallel axes");
    // e_i x e_(i+1) = e_(i+2); e_i x e_(i+2) = -e_(i+1).
    const int third = 3 - index - o.index;
    const int orient = ((o.index - index + 3) % 3 == 1) ? 1 : -1;
    return {third, orient * sign * o.sign};
  }

  friend constexpr bool operator==(const SignedAxis&, const SignedAxis&) = default;
};

constexpr Vec3 e0{1.0, 0.0, 0.0};
constexpr Vec3 e1{0.0, 1.0, 0.0};
constexpr Vec3 e2{0.0, 0.0, 1.0};

}  // namespace gearsyn
