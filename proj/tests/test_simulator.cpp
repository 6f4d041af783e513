#include <cmath>

#include <gtest/gtest.h>

#include "gearsyn/generate.hpp"
#include "gearsyn/simulator.hpp"
#include "support.hpp"

namespace gearsyn {
namespace {

using test::catalogue;
using test::seq;

const PartRecord& part(std::string_view name) { return catalogue().part(catalogue().index_of(name)); }

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], tol) << "component " << i;
}

// Spur chain on one shaft: <start> tra SH G mesh G mesh G ... <end>.
GearSequence random_spur_chain(Rng& rng, int gears) {
  const auto& cat = catalogue();
  static const char* modules[] = {"1.5", "2", "2.5", "3"};
  static const char* teeth[4][4] = {
      {"20", "40", "60", "80"}, {"18", "25", "40", "60"}, {"15", "40", "55", "70"}, {"15", "30", "45", "60"}};
  const auto m = rng.index(4);
  const auto gear = [&] {
    return Token::of_part(cat.index_of(std::string("MSGA") + modules[m] + "-" + teeth[m][rng.index(4)]));
  };
  GearSequence s;
  s.tokens.push_back(Token::start());
  s.tokens.push_back(Token::translate(rng.index(2) ? 1 : -1));
  s.tokens.push_back(Token::of_part(static_cast<PartIndex>(1 + rng.index(5))));
  s.tokens.push_back(gear());
  for (int i = 1; i < gears; ++i) {
    s.tokens.push_back(Token::mesh(1 + static_cast<int>(rng.index(2)), rng.index(2) ? 1 : -1));
    s.tokens.push_back(gear());
  }
  s.tokens.push_back(Token::end());
  return s;
}

TEST(Simulate, SingleShaft) {
  const auto r = simulate(seq("<start> tra+ SH-100 <end>"), catalogue());
  EXPECT_EQ(r.speed_ratio, 1.0);
  expect_vec_near(r.position, {0.1, 0, 0}, 1e-15);
  EXPECT_EQ(r.motion, SignedAxis(0, +1));
  EXPECT_EQ(r.input, MotionType::Rotation);
  EXPECT_EQ(r.output, MotionType::Rotation);
  EXPECT_NEAR(r.weight_kg, test::rod_mass(0.1), 1e-12);
  ASSERT_EQ(r.placements.size(), 1u);
  expect_vec_near(r.placements[0].center, {0.05, 0, 0}, 1e-15);
}

TEST(Simulate, ZeroLengthShaft) {
  const auto r = simulate(seq("<start> tra+ SH-* <end>"), catalogue());
  expect_vec_near(r.position, {0, 0, 0}, 0.0);
  EXPECT_EQ(r.weight_kg, 0.0);
}

TEST(Simulate, SpurPairOnShaft) {
  const auto r = simulate(seq("<start> tra+ SH-100 MSGA2-18 mesh_1p MSGA2-60 <end>"), catalogue());
  // Ratio of teeth; centres separated by the sum of pitch radii along +e1.
  EXPECT_DOUBLE_EQ(r.speed_ratio, 18.0 / 60.0);
  expect_vec_near(r.position, {0.1, 0.018 + 0.060, 0}, 1e-12);
  EXPECT_EQ(r.motion, SignedAxis(0, -1));
  ASSERT_EQ(r.mesh_factors.size(), 1u);
  EXPECT_DOUBLE_EQ(r.mesh_factors[0], 0.3);
  EXPECT_NEAR(r.weight_kg, part("SH-100").weight_kg + part("MSGA2-18").weight_kg + part("MSGA2-60").weight_kg,
              1e-15);
}

TEST(Simulate, WormPair) {
  const auto r = simulate(seq("<start> tra+ SH-100 SWG1-R1 mesh_1p AG1-60R1 <end>"), catalogue());
  EXPECT_DOUBLE_EQ(r.speed_ratio, 1.0 / 60.0);
  EXPECT_EQ(r.motion, SignedAxis(1, +1));
}

TEST(Simulate, WorkedExample) {
  const auto& cat = catalogue();
  const auto s = seq(test::kExampleSentence);
  const auto r = simulate(s, cat);
  // Rack to 40-tooth pinion: 1 / r = 1 / 0.04. Bevel 30 -> 20: 1.5.
  EXPECT_NEAR(r.speed_ratio, 25.0 * 1.5, 1e-12);
  EXPECT_EQ(r.input, MotionType::Translation);
  EXPECT_EQ(r.output, MotionType::Rotation);
  const double expected = part("MRGF2-500").weight_kg + part("MSGA2-40").weight_kg + part("SH-200").weight_kg +
                          part("SBSG2-3020R").weight_kg + part("SBSG2-2030L").weight_kg;
  EXPECT_NEAR(r.weight_kg, expected, 1e-12);
  EXPECT_NEAR(weight_of(s.tokens, cat), expected, 1e-12);
  EXPECT_EQ(r.placements.size(), 5u);
}

TEST(Simulate, RackOutput) {
  const auto r = simulate(seq("<start> tra+ SH-100 MSGA2-40 mesh_1p MRGF2-500 <end>"), catalogue());
  EXPECT_EQ(r.output, MotionType::Translation);
  EXPECT_DOUBLE_EQ(r.speed_ratio, 0.04);
  // Travel = axis x d = e0 x e1 = e2.
  EXPECT_EQ(r.motion, SignedAxis(2, +1));
}

TEST(Simulate, InvalidSequenceThrows) {
  try {
    simulate(seq("<start> MRGF2-500 <end>"), catalogue());
    FAIL();
  } catch (const SimulationError& e) {
    EXPECT_EQ(e.kind(), SimulationError::Kind::InvalidSequence);
  }
}

TEST(Translate, SignFollowsTheAxis) {
  FrameState s = initial_frame();
  expect_vec_near(apply_translate(s, +1, part("SH-200")).position, {0.2, 0, 0}, 0.0);
  expect_vec_near(apply_translate(s, -1, part("SH-200")).position, {-0.2, 0, 0}, 0.0);
  expect_vec_near(apply_translate(s, +1, part("SH-*")).position, {0, 0, 0}, 0.0);
  s.axis = SignedAxis(1, -1);
  expect_vec_near(apply_translate(s, +1, part("SH-300")).position, {0, -0.3, 0}, 0.0);
  s.motion = MotionType::Translation;
  EXPECT_THROW(apply_translate(s, +1, part("SH-100")), SimulationError);
}

TEST(Mesh, PerpendicularIndexIsCyclic) {
  FrameState s = initial_frame();
  s.axis = SignedAxis(2, +1);
  const auto out = apply_mesh(s, Token::mesh(1, -1), part("MSGA2-18"), part("MSGA2-60"));
  expect_vec_near(out.position, {-(0.018 + 0.060), 0, 0}, 1e-15);
  const auto out2 = apply_mesh(s, Token::mesh(2, +1), part("MSGA2-18"), part("MSGA2-60"));
  expect_vec_near(out2.position, {0, 0.078, 0}, 1e-15);
}

TEST(Mesh, RatioFactorsAreReciprocal) {
  const auto s = initial_frame();
  const auto fwd = mesh_step(s, Token::mesh(1, 1), part("MSGA2-18"), part("MSGA2-60"));
  const auto back = mesh_step(s, Token::mesh(1, 1), part("MSGA2-60"), part("MSGA2-18"));
  EXPECT_DOUBLE_EQ(fwd.factor, 0.3);
  EXPECT_DOUBLE_EQ(back.factor, 60.0 / 18.0);
  EXPECT_NEAR(fwd.factor * back.factor, 1.0, 1e-15);
}

TEST(Mesh, IncompatiblePairThrows) {
  try {
    apply_mesh(initial_frame(), Token::mesh(1, 1), part("MSGA2-18"), part("MSGA3-30"));
    FAIL();
  } catch (const SimulationError& e) {
    EXPECT_EQ(e.kind(), SimulationError::Kind::IncompatibleMesh);
  }
}

TEST(Mesh, DoubleSpurMeshRestoresSense) {
  const auto s = initial_frame();
  for (int p1 = 1; p1 <= 2; ++p1) {
    for (int p2 = 1; p2 <= 2; ++p2) {
      for (int s1 : {1, -1}) {
        for (int s2 : {1, -1}) {
          const auto a = apply_mesh(s, Token::mesh(p1, s1), part("MSGA2-18"), part("MSGA2-40"));
          EXPECT_EQ(a.axis, s.axis.flipped());
          const auto b = apply_mesh(a, Token::mesh(p2, s2), part("MSGA2-40"), part("MSGA2-60"));
          EXPECT_EQ(b.axis, s.axis);
        }
      }
    }
  }
}

TEST(WorldExtent, RotatesWithTheAxis) {
  const auto& g = part("MSGA2-60");
  const auto e = world_extent(g, SignedAxis(1, -1));
  EXPECT_EQ(e[1], g.bbox_m[0]);
  EXPECT_EQ(e[2], g.bbox_m[1]);
  EXPECT_EQ(e[0], g.bbox_m[2]);
}

// Property suite over sequences from both samplers.
class Conservation : public ::testing::TestWithParam<int> {
 protected:
  std::vector<GearSequence> draws(std::size_t n) const {
    const auto& cat = catalogue();
    std::vector<GearSequence> out;
    if (GetParam() == 0) {
      for (std::uint64_t s = 0; s < n; ++s) out.push_back(random_valid_sequence(derive_seed(11, s), 10, cat));
    } else {
      const VariableSequenceSampler sampler(cat);
      for (std::uint64_t s = 0; s < n; ++s) out.push_back(sampler.sample(derive_seed(12, s)));
    }
    return out;
  }
};

TEST_P(Conservation, SpeedIsTheProductOfMeshFactors) {
  for (const auto& s : draws(1000)) {
    const auto r = simulate(s, catalogue());
    double product = 1.0;
    for (double f : r.mesh_factors) product *= f;
    ASSERT_EQ(r.speed_ratio, product);
    ASSERT_GT(r.speed_ratio, 0.0);
    const auto meshes = std::count_if(s.tokens.begin(), s.tokens.end(),
                                      [](Token t) { return t.kind == TokenKind::Mesh; });
    ASSERT_EQ(r.mesh_factors.size(), static_cast<std::size_t>(meshes));
  }
}

TEST_P(Conservation, WeightIsAdditive) {
  const auto& cat = catalogue();
  for (const auto& s : draws(1000)) {
    const auto r = simulate(s, cat);
    double total = 0.0;
    for (const auto& p : r.placements) total += cat.part(p.part).weight_kg;
    ASSERT_EQ(r.weight_kg, total);
    ASSERT_EQ(r.weight_kg, weight_of(s.tokens, cat));
    ASSERT_GE(r.weight_kg, 0.0);
    ASSERT_EQ(r.placements.size(), s.component_count());
  }
}

TEST_P(Conservation, AxesStayOnTheBasisAndSpurMeshesFlip) {
  const auto& cat = catalogue();
  for (const auto& s : draws(1000)) {
    const auto r = simulate(s, cat);
    for (std::size_t i = 0; i < r.placements.size(); ++i) {
      const auto& p = r.placements[i];
      ASSERT_LT(p.axis.index, 3);
      ASSERT_TRUE(p.axis.sign == 1 || p.axis.sign == -1);
      if (i == 0) continue;
      const auto& prev = r.placements[i - 1];
      if (cat.part(prev.part).type == ComponentType::SpurGear && cat.part(p.part).type == ComponentType::SpurGear) {
        // Meshed spur neighbours spin in opposite senses about parallel axes.
        ASSERT_EQ(p.axis, prev.axis.flipped());
      }
    }
  }
}

TEST_P(Conservation, MotionTypesFollowTheEndComponents) {
  const auto& cat = catalogue();
  for (const auto& s : draws(1000)) {
    const auto r = simulate(s, cat);
    const bool first_rack = cat.part(r.placements.front().part).type == ComponentType::Rack;
    const bool last_rack = cat.part(r.placements.back().part).type == ComponentType::Rack;
    ASSERT_EQ(r.input == MotionType::Translation, first_rack);
    ASSERT_EQ(r.output == MotionType::Translation, last_rack);
  }
}

TEST_P(Conservation, ShaftLengthShiftsEverythingDownstream) {
  const auto& cat = catalogue();
  Rng rng(5);
  int checked = 0;
  for (const auto& s : draws(1000)) {
    const auto base = simulate(s, cat);
    std::size_t component = 0;
    for (std::size_t i = 1; i + 1 < s.tokens.size(); ++i) {
      const Token t = s.tokens[i];
      if (!t.is_part()) continue;
      const auto& rec = cat.part(t.part);
      const auto this_component = component++;
      if (rec.type != ComponentType::Shaft || rec.length_m.value_or(0) == 0.0) continue;
      const auto other = static_cast<PartIndex>(1 + rng.index(5));  // SH-100 .. SH-500
      auto changed = s;
      changed.tokens[i] = Token::of_part(other);
      const auto r = simulate(changed, cat);
      const double sign = s.tokens[i - 1].sign;
      const Vec3 shift = base.placements[this_component].axis.vec() *
                         (sign * (*cat.part(other).length_m - *rec.length_m));
      for (std::size_t k = this_component + 1; k < r.placements.size(); ++k) {
        for (std::size_t d = 0; d < 3; ++d) {
          ASSERT_NEAR(r.placements[k].center[d] - base.placements[k].center[d], shift[d], 1e-12);
        }
      }
      for (std::size_t d = 0; d < 3; ++d) ASSERT_NEAR(r.position[d] - base.position[d], shift[d], 1e-12);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST_P(Conservation, Deterministic) {
  for (const auto& s : draws(200)) {
    const auto a = simulate(s, catalogue());
    const auto b = simulate(s, catalogue());
    ASSERT_EQ(a.speed_ratio, b.speed_ratio);
    ASSERT_EQ(a.position, b.position);
    ASSERT_EQ(a.motion, b.motion);
    ASSERT_EQ(a.weight_kg, b.weight_kg);
    ASSERT_EQ(a.mesh_factors, b.mesh_factors);
  }
}

INSTANTIATE_TEST_SUITE_P(Samplers, Conservation, ::testing::Values(0, 1),
                         [](const auto& info) { return info.param == 0 ? "TokenUniform" : "VariableSequence"; });

TEST(SpurChains, SenseAlternatesAlongTheChain) {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const int gears = 2 + static_cast<int>(rng.index(8));
    const auto s = random_spur_chain(rng, gears);
    ASSERT_FALSE(validate_grammar(s, catalogue())) << format_sequence(s, catalogue());
    const auto r = simulate(s, catalogue());
    const auto first = r.placements[1].axis;
    for (int g = 0; g < gears; ++g) {
      ASSERT_EQ(r.placements[1 + g].axis, g % 2 == 0 ? first : first.flipped());
    }
    // The chain ratio telescopes to N_first / N_last.
    const double expected = static_cast<double>(*catalogue().part(r.placements[1].part).teeth) /
                            *catalogue().part(r.placements.back().part).teeth;
    ASSERT_NEAR(r.speed_ratio, expected, 1e-12 * expected);
  }
}

TEST(SpurChains, ShaftOnlyPosition) {
  const auto& cat = catalogue();
  for (int len = 1; len <= 5; ++len) {
    const auto name = "SH-" + std::to_string(len * 100);
    const auto plus = simulate(seq("<start> tra+ " + name + " <end>"), cat);
    const auto minus = simulate(seq("<start> tra- " + name + " <end>"), cat);
    EXPECT_NEAR(plus.position[0], 0.1 * len, 1e-12);
    EXPECT_NEAR(minus.position[0], -0.1 * len, 1e-12);
  }
}

}  // namespace
}  // namespace gearsyn
