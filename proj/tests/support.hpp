#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/generate.hpp"
#include "gearsyn/grammar.hpp"
#include "gearsyn/token.hpp"

namespace gearsyn::test {

inline const Catalogue& catalogue() {
  static const Catalogue cat = load_catalogue(GEARSYN_TEST_CATALOGUE);
  return cat;
}

/// Rack, mesh, spur, translate, shaft, bevel pair: the worked example of a
/// five-part sentence.
inline constexpr std::string_view kExampleSentence =
    "<start> MRGF2-500 mesh_2n MSGA2-40 tra- SH-200 SBSG2-3020R mesh_1p SBSG2-2030L <end>";

inline GearSequence seq(std::string_view text) { return parse_sequence(text, catalogue()); }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::path(GEARSYN_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Cylinder mass rho * pi * r^2 * L for the 10 mm steel rod.
inline double rod_mass(double length_m) {
  constexpr double pi = 3.14159265358979323846;
  return 7850.0 * pi * 0.005 * 0.005 * length_m;
}

}  // namespace gearsyn::test
