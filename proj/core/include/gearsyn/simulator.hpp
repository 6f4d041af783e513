#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/error.hpp"
#include "gearsyn/geometry.hpp"
#include "gearsyn/token.hpp"

namespace gearsyn {

enum class MotionType : std::uint8_t { Rotation, Translation };
std::string_view to_string(MotionType m);

/// Kinematic frame carried along the chain. For rotating members `axis`
/// is the rotation axis with its sign giving the sense (right-hand rule);
/// for a translating rack it is the signed travel direction.
struct FrameState {
  Vec3 position;
  SignedAxis axis{0, 1};
  MotionType motion = MotionType::Rotation;
  double speed_ratio = 1.0;
};

struct Placement {
  PartIndex part = 0;
  Vec3 center;
  SignedAxis axis;
  /// World-aligned box extents (full widths, metres).
  Vec3 extent;
};

struct SimResult {
  double speed_ratio = 1.0;
  /// Reference point of the last component: centre of a gear or rack,
  /// far end of a shaft.
  Vec3 position;
  SignedAxis motion;
  MotionType input = MotionType::Rotation;
  MotionType output = MotionType::Rotation;
  double weight_kg = 0.0;
  std::vector<Placement> placements;
  /// Speed factor contributed by each mesh, in chain order.
  std::vector<double> mesh_factors;
};

class SimulationError : public Error {
 public:
  enum class Kind { InvalidSequence, IncompatibleMesh, TranslationOnRack };
  SimulationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Origin, axis +e0, rotation, unit input speed.
constexpr FrameState initial_frame() { return FrameState{}; }

/// Moves the frame along sign * axis by the shaft length.
FrameState apply_translate(const FrameState& state, int sign, const PartRecord& shaft);

struct MeshStep {
  FrameState state;
  double factor = 1.0;
};

/// Places `next` against `cur` for a mesh token. The placement direction
/// is d = sign * e_((k + perp) mod 3) where e_k is the current axis line.
///
///   spur -> spur        centre += d (r_cur + r_next), axis reversed, ratio N_cur / N_next
///   crossed-axis pairs  centre += d r_cur + |axis| r_next, axis = d, ratio N_cur / N_next
///   rack -> pinion      centre += d r_pinion, axis = travel x d, ratio 1 / r_pinion
///   pinion -> rack      centre += d r_pinion, travel = axis x d, ratio r_pinion
MeshStep mesh_step(const FrameState& state, Token mesh, const PartRecord& cur, const PartRecord& next);

inline FrameState apply_mesh(const FrameState& state, Token mesh, const PartRecord& cur,
                             const PartRecord& next) {
  return mesh_step(state, mesh, cur, next).state;
}

/// Local bounding box rotated onto the world axes for a part whose motion
/// axis is `axis`.
Vec3 world_extent(const PartRecord& part, SignedAxis axis);

/// Throws SimulationError(InvalidSequence) unless the tokens form a valid
/// sentence.
SimResult simulate(std::span<const Token> tokens, const Catalogue& cat);
inline SimResult simulate(const GearSequence& seq, const Catalogue& cat) { return simulate(seq.tokens, cat); }

/// Sum of part weights; interface and sentinel tokens weigh nothing.
double weight_of(std::span<const Token> tokens, const Catalogue& cat);

}  // namespace gearsyn
