#include "gearsyn/simulator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <optional>

#include "gearsyn/grammar.hpp"

namespace gearsyn {

std::string_view to_string(MotionType m) {
  return m == MotionType::Rotation ? "rotation" : "translation";
}

FrameState apply_translate(const FrameState& state, int sign, const PartRecord& shaft) {
  if (state.motion != MotionType::Rotation) {
    throw SimulationError(SimulationError::Kind::TranslationOnRack, "cannot translate from a rack");
  }
  FrameState out = state;
  const double length = shaft.length_m.value_or(0.0);
  out.position += state.axis.vec() * (static_cast<double>(sign < 0 ? -1 : 1) * length);
  return out;
}

MeshStep mesh_step(const FrameState& state, Token mesh, const PartRecord& cur, const PartRecord& next) {
  using T = ComponentType;
  const auto incompatible = [&] {
    return SimulationError(SimulationError::Kind::IncompatibleMesh,
                           fmt::format("{} cannot mesh {}", cur.part_number, next.part_number));
  };
  if (mesh.kind != TokenKind::Mesh) throw incompatible();
  if (std::find(cur.mesh_partners.begin(), cur.mesh_partners.end(), next.part_number) ==
      cur.mesh_partners.end()) {
    throw incompatible();
  }

  const SignedAxis d = state.axis.perpendicular(mesh.perp, mesh.sign);
  MeshStep step{state, 1.0};
  FrameState& out = step.state;

  if (cur.type == T::SpurGear && next.type == T::SpurGear) {
    out.position += d.vec() * (*cur.pitch_radius_m + *next.pitch_radius_m);
    out.axis = state.axis.flipped();
    step.factor = static_cast<double>(*cur.teeth) / static_cast<double>(*next.teeth);
  } else if (cur.type == T::Rack && next.type == T::SpurGear) {
    out.position += d.vec() * *next.pitch_radius_m;
    out.axis = state.axis.cross(d);
    out.motion = MotionType::Rotation;
    step.factor = 1.0 / *next.pitch_radius_m;
  } else if (cur.type == T::SpurGear && next.type == T::Rack) {
    out.position += d.vec() * *cur.pitch_radius_m;
    out.axis = state.axis.cross(d);
    out.motion = MotionType::Translation;
    step.factor = *cur.pitch_radius_m;
  } else if (is_perpendicular_mesh(cur.type) && is_perpendicular_mesh(next.type)) {
    out.position += d.vec() * *cur.pitch_radius_m + state.axis.unsigned_vec() * *next.pitch_radius_m;
    out.axis = d;
    step.factor = static_cast<double>(*cur.teeth) / static_cast<double>(*next.teeth);
  } else {
    throw incompatible();
  }
  out.speed_ratio = state.speed_ratio * step.factor;
  return step;
}

Vec3 world_extent(const PartRecord& part, SignedAxis axis) {
  Vec3 out;
  out[axis.index] = part.bbox_m[0];
  out[(axis.index + 1) % 3] = part.bbox_m[1];
  out[(axis.index + 2) % 3] = part.bbox_m[2];
  return out;
}

SimResult simulate(std::span<const Token> tokens, const Catalogue& cat) {
  if (auto violation = validate_grammar(tokens, cat)) {
    throw SimulationError(SimulationError::Kind::InvalidSequence,
                          "invalid sequence: " + violation->describe(cat));
  }

  SimResult result;
  FrameState state = initial_frame();
  const PartRecord* current = nullptr;
  int pending_translate = 0;  // sign of a translate awaiting its shaft
  std::optional<Token> pending_mesh;
  // Set when the frame just moved along a zero-length shaft away from a
  // gear: the next mounted gear then sits flush against that gear.
  std::optional<std::pair<Vec3, double>> flush_mount;

  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const Token t = tokens[i];
    if (t.kind == TokenKind::Translate) {
      pending_translate = t.sign;
      continue;
    }
    if (t.kind == TokenKind::Mesh) {
      pending_mesh = t;
      continue;
    }
    if (!t.is_part()) continue;

    const PartRecord& rec = cat.part(t.part);
    Vec3 center;
    if (current == nullptr && rec.type == ComponentType::Rack) {
      state.motion = MotionType::Translation;
      result.input = MotionType::Translation;
      center = state.position;
    } else if (pending_translate != 0) {
      const int sign = pending_translate;
      const Vec3 from = state.position;
      state = apply_translate(state, sign, rec);
      center = (from + state.position) * 0.5;
      flush_mount.reset();
      if (rec.length_m.value_or(0.0) == 0.0 && current != nullptr && is_gear(current->type)) {
        flush_mount.emplace(state.axis.vec() * static_cast<double>(sign),
                            current->bbox_m[0]);
      }
    } else if (pending_mesh) {
      const auto step = mesh_step(state, *pending_mesh, *current, rec);
      state = step.state;
      result.mesh_factors.push_back(step.factor);
      center = state.position;
    } else {
      if (flush_mount) {
        const auto& [direction, previous_width] = *flush_mount;
        state.position += direction * (0.5 * previous_width + 0.5 * rec.bbox_m[0]);
      }
      center = state.position;
    }
    if (pending_translate == 0) flush_mount.reset();

    result.placements.push_back(Placement{t.part, center, state.axis, world_extent(rec, state.axis)});
    result.weight_kg += rec.weight_kg;
    current = &rec;
    pending_translate = 0;
    pending_mesh.reset();
  }

  result.speed_ratio = state.speed_ratio;
  result.position = state.position;
  result.motion = state.axis;
  result.output = state.motion;
  return result;
}

double weight_of(std::span<const Token> tokens, const Catalogue& cat) {
  double total = 0.0;
  for (const auto& t : tokens) {
    if (t.is_part()) total += cat.part(t.part).weight_kg;
  }
  return total;
}

}  // namespace gearsyn
