#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gearsyn/error.hpp"

namespace gearsyn {

enum class ComponentType : std::uint8_t {
  Shaft,
  Rack,
  SpurGear,
  BevelGear,
  MiterGear,
  Worm,
  WormWheel,
  HypoidPinion,
  HypoidRing,
};

enum class Handedness : std::uint8_t { None, Right, Left };

std::string_view to_string(ComponentType type);
std::optional<ComponentType> parse_component_type(std::string_view text);

/// True for every rotating toothed part (everything except shafts and racks).
constexpr bool is_gear(ComponentType t) {
  return t != ComponentType::Shaft && t != ComponentType::Rack;
}

/// True for pairs whose axes cross at right angles (bevel, miter, worm, hypoid).
constexpr bool is_perpendicular_mesh(ComponentType t) {
  return t == ComponentType::BevelGear || t == ComponentType::MiterGear ||
         t == ComponentType::Worm || t == ComponentType::WormWheel ||
         t == ComponentType::HypoidPinion || t == ComponentType::HypoidRing;
}

using PartIndex = std::uint16_t;

struct PartRecord {
  std::string part_number;
  ComponentType type = ComponentType::Shaft;
  std::optional<double> module_mm;
  std::optional<int> teeth;
  std::optional<double> pitch_radius_m;
  std::optional<double> length_m;
  /// Local extent: along the motion axis, then the two transverse directions.
  std::array<double, 3> bbox_m{0.0, 0.0, 0.0};
  double weight_kg = 0.0;
  Handedness handedness = Handedness::None;
  std::vector<std::string> mesh_partners;
};

class CatalogueError : public Error {
 public:
  enum class Kind {
    ParseError,
    UnknownVersion,
    MissingPart,
    UnknownPart,
    InvalidRecord,
    ModuleMismatch,
    InvalidPartner,
    AsymmetricMesh,
  };

  CatalogueError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::string_view kCatalogueVersion = "gearsyn-catalogue/1";

/// The 44 part numbers every catalogue must provide, in vocabulary order.
std::span<const std::string_view> lexicon_part_numbers();

/// Immutable parts lexicon. Construct through load_catalogue/parse_catalogue
/// or Catalogue::from_records, all of which verify the invariants.
class Catalogue {
 public:
  static Catalogue from_records(std::vector<PartRecord> records, std::string version);

  const std::string& version() const { return version_; }
  std::size_t size() const { return parts_.size(); }
  std::span<const PartRecord> parts() const { return parts_; }
  const PartRecord& part(PartIndex i) const { return parts_.at(i); }

  std::optional<PartIndex> find(std::string_view part_number) const;
  /// Throws CatalogueError(UnknownPart).
  PartIndex index_of(std::string_view part_number) const;

  bool mesh_compatible(PartIndex a, PartIndex b) const { return mesh_[a * parts_.size() + b]; }
  /// Throws CatalogueError(UnknownPart) for tokens outside the catalogue.
  bool mesh_compatible(std::string_view a, std::string_view b) const;
  std::span<const PartIndex> partners(PartIndex i) const { return partner_index_.at(i); }

  double total_weight() const;

 private:
  Catalogue() = default;

  std::string version_;
  std::vector<PartRecord> parts_;
  std::unordered_map<std::string, PartIndex> by_name_;
  std::vector<bool> mesh_;
  std::vector<std::vector<PartIndex>> partner_index_;
};

Catalogue parse_catalogue(std::istream& in);
Catalogue load_catalogue(const std::filesystem::path& path);

/// Catalogue path from $GEARSYN_CATALOGUE, falling back to the data file
/// shipped with the sources (or the installed copy).
std::filesystem::path default_catalogue_path();

inline constexpr double kSteelDensity = 7850.0;   // kg/m^3
inline constexpr double kShaftDiameter = 0.01;    // m

/// Carbon-steel rod of diameter 10 mm. Throws std::invalid_argument on
/// negative length.
double shaft_weight(double length_m);

}  // namespace gearsyn
