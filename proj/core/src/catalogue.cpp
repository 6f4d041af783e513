#include "gearsyn/catalogue.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace gearsyn {
namespace {

constexpr std::array<std::string_view, 44> kLexicon = {
    "SH-*",        "SH-100",      "SH-200",      "SH-300",      "SH-400",      "SH-500",
    "MRGF1.5-500", "MRGF2-500",   "MRGF2.5-500", "MRGF3-500",   "MSGA1.5-20",  "MSGA1.5-40",
    "MSGA1.5-60",  "MSGA1.5-80",  "MSGA2-18",    "MSGA2-25",    "MSGA2-40",    "MSGA2-60",
    "MSGA2.5-15",  "MSGA2.5-40",  "MSGA2.5-55",  "MSGA2.5-70",  "MSGA3-15",    "MSGA3-30",
    "MSGA3-45",    "MSGA3-60",    "SBSG2-3020R", "SBSG2-2030L", "SBSG2-4020R", "SBSG2-2040L",
    "SBSG2-4515R", "SBSG2-1545L", "MMSG2-20R",   "MMSG2-20L",   "SWG1-R1",     "AG1-20R1",
    "AG1-40R1",    "AG1-60R1",    "MHP1-3045L",  "MHP1-2060L",  "MHP1-1045L",  "MHP1-0453R",
    "MHP1-0602R",  "MHP1-0451R",
};

constexpr std::array<std::pair<ComponentType, std::string_view>, 9> kTypeNames = {{
    {ComponentType::Shaft, "shaft"},
    {ComponentType::Rack, "rack"},
    {ComponentType::SpurGear, "spur"},
    {ComponentType::BevelGear, "bevel"},
    {ComponentType::MiterGear, "miter"},
    {ComponentType::Worm, "worm"},
    {ComponentType::WormWheel, "worm_wheel"},
    {ComponentType::HypoidPinion, "hypoid_pinion"},
    {ComponentType::HypoidRing, "hypoid_ring"},
}};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw CatalogueError(CatalogueError::Kind::ParseError, fmt::format("catalogue line {}: {}", line, msg));
}

std::optional<double> parse_optional_double(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  // std::from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    parse_fail(line, fmt::format("bad number '{}'", field));
  }
  return value;
}

std::optional<int> parse_optional_int(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    parse_fail(line, fmt::format("bad integer '{}'", field));
  }
  return value;
}

bool typed_pair_allowed(const PartRecord& a, const PartRecord& b) {
  using T = ComponentType;
  const auto pair = [&](T x, T y) {
    return (a.type == x && b.type == y) || (a.type == y && b.type == x);
  };
  if (pair(T::SpurGear, T::SpurGear) || pair(T::Rack, T::SpurGear)) return true;
  if (pair(T::Worm, T::WormWheel) || pair(T::HypoidPinion, T::HypoidRing)) return true;
  if (pair(T::BevelGear, T::BevelGear) || pair(T::MiterGear, T::MiterGear)) {
    return a.handedness != Handedness::None && b.handedness != Handedness::None &&
           a.handedness != b.handedness;
  }
  return false;
}

void check_record(const PartRecord& r) {
  const auto fail = [&](const std::string& msg) {
    throw CatalogueError(CatalogueError::Kind::InvalidRecord,
                         fmt::format("part {}: {}", r.part_number, msg));
  };
  if (!(r.weight_kg >= 0.0) || !std::isfinite(r.weight_kg)) fail("weight must be non-negative");
  for (double extent : r.bbox_m) {
    if (!(extent >= 0.0) || !std::isfinite(extent)) fail("bounding box extents must be non-negative");
  }
  if (r.type == ComponentType::Shaft) {
    if (r.module_mm || r.teeth || r.pitch_radius_m) fail("shafts carry no gear geometry");
    if (!r.length_m || *r.length_m < 0.0) fail("shaft needs a non-negative length");
    if (r.part_number == "SH-*" && (r.weight_kg != 0.0 || *r.length_m != 0.0)) {
      fail("SH-* must have zero length and weight");
    }
    if (std::abs(r.weight_kg - shaft_weight(*r.length_m)) > 1e-9) {
      fail("shaft weight disagrees with the steel rod model");
    }
    return;
  }
  if (!r.module_mm || *r.module_mm <= 0.0) fail("module must be positive");
  if (r.bbox_m[0] <= 0.0 || r.bbox_m[1] <= 0.0 || r.bbox_m[2] <= 0.0) {
    fail("bounding box extents must be positive");
  }
  if (r.type == ComponentType::Rack) {
    if (!r.length_m || *r.length_m <= 0.0) fail("rack needs a positive length");
    return;
  }
  if (!r.teeth || *r.teeth <= 0) fail("teeth must be a positive integer");
  if (!r.pitch_radius_m || *r.pitch_radius_m <= 0.0) fail("pitch radius must be positive");
  const double implied = 2000.0 * *r.pitch_radius_m / *r.module_mm;
  if (std::abs(implied - *r.teeth) > 1e-9) {
    fail(fmt::format("pitch radius implies {} teeth, record says {}", implied, *r.teeth));
  }
}

}  // namespace

std::string_view to_string(ComponentType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "unknown";
}

std::optional<ComponentType> parse_component_type(std::string_view text) {
  for (const auto& [t, name] : kTypeNames) {
    if (name == text) return t;
  }
  return std::nullopt;
}

std::span<const std::string_view> lexicon_part_numbers() { return kLexicon; }

double shaft_weight(double length_m) {
  if (length_m < 0.0) throw std::invalid_argument("negative shaft length");
  const double radius = kShaftDiameter / 2.0;
  return kSteelDensity * std::numbers::pi * radius * radius * length_m;
}

Catalogue Catalogue::from_records(std::vector<PartRecord> records, std::string version) {
  if (version != kCatalogueVersion) {
    throw CatalogueError(CatalogueError::Kind::UnknownVersion,
                         fmt::format("unsupported catalogue version '{}'", version));
  }

  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!by_name.emplace(records[i].part_number, i).second) {
      throw CatalogueError(CatalogueError::Kind::InvalidRecord,
                           fmt::format("duplicate part {}", records[i].part_number));
    }
  }
  for (auto name : kLexicon) {
    if (!by_name.contains(std::string(name))) {
      throw CatalogueError(CatalogueError::Kind::MissingPart, fmt::format("missing part {}", name));
    }
  }
  if (records.size() != kLexicon.size()) {
    for (const auto& r : records) {
      if (std::find(kLexicon.begin(), kLexicon.end(), r.part_number) == kLexicon.end()) {
        throw CatalogueError(CatalogueError::Kind::UnknownPart,
                             fmt::format("part {} is not in the lexicon", r.part_number));
      }
    }
  }

  // Vocabulary order is the lexicon order, independent of file order.
  Catalogue cat;
  cat.version_ = std::move(version);
  cat.parts_.reserve(kLexicon.size());
  for (auto name : kLexicon) cat.parts_.push_back(std::move(records[by_name.at(std::string(name))]));
  for (std::size_t i = 0; i < cat.parts_.size(); ++i) {
    cat.by_name_.emplace(cat.parts_[i].part_number, static_cast<PartIndex>(i));
  }

  for (const auto& r : cat.parts_) check_record(r);

  const std::size_t n = cat.parts_.size();
  cat.mesh_.assign(n * n, false);
  cat.partner_index_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = cat.parts_[i];
    for (const auto& partner : a.mesh_partners) {
      const auto it = cat.by_name_.find(partner);
      if (it == cat.by_name_.end()) {
        throw CatalogueError(CatalogueError::Kind::UnknownPart,
                             fmt::format("part {} lists unknown partner {}", a.part_number, partner));
      }
      const auto& b = cat.parts_[it->second];
      if (a.type == ComponentType::Shaft || b.type == ComponentType::Shaft) {
        throw CatalogueError(CatalogueError::Kind::InvalidPartner,
                             fmt::format("shaft in mesh pair {} / {}", a.part_number, b.part_number));
      }
      if (*a.module_mm != *b.module_mm) {
        throw CatalogueError(CatalogueError::Kind::ModuleMismatch,
                             fmt::format("{} (module {}) cannot mesh {} (module {})", a.part_number,
                                         *a.module_mm, b.part_number, *b.module_mm));
      }
      if (!typed_pair_allowed(a, b)) {
        throw CatalogueError(CatalogueError::Kind::InvalidPartner,
                             fmt::format("{} {} cannot mesh {} {}", to_string(a.type), a.part_number,
                                         to_string(b.type), b.part_number));
      }
      if (!cat.mesh_[i * n + it->second]) {
        cat.mesh_[i * n + it->second] = true;
        cat.partner_index_[i].push_back(it->second);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (cat.mesh_[i * n + j] != cat.mesh_[j * n + i]) {
        const auto& [from, to] = cat.mesh_[i * n + j] ? std::pair{i, j} : std::pair{j, i};
        throw CatalogueError(CatalogueError::Kind::AsymmetricMesh,
                             fmt::format("{} lists {} as partner but not vice versa",
                                         cat.parts_[from].part_number, cat.parts_[to].part_number));
      }
    }
  }
  return cat;
}

std::optional<PartIndex> Catalogue::find(std::string_view part_number) const {
  const auto it = by_name_.find(std::string(part_number));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

PartIndex Catalogue::index_of(std::string_view part_number) const {
  if (auto idx = find(part_number)) return *idx;
  throw CatalogueError(CatalogueError::Kind::UnknownPart, fmt::format("unknown part {}", part_number));
}

bool Catalogue::mesh_compatible(std::string_view a, std::string_view b) const {
  return mesh_compatible(index_of(a), index_of(b));
}

double Catalogue::total_weight() const {
  double total = 0.0;
  for (const auto& p : parts_) total += p.weight_kg;
  return total;
}

Catalogue parse_catalogue(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::string> version;
  bool header_seen = false;
  std::vector<PartRecord> records;

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (text.front() == '@') {
      const auto fields = split(text.substr(1), ' ');
      if (fields.size() != 2 || fields[0] != "version") parse_fail(line_no, "malformed directive");
      version = std::string(fields[1]);
      continue;
    }
    if (!version) parse_fail(line_no, "missing @version directive before data");
    if (!header_seen) {
      if (text.substr(0, 12) != "part_number,") parse_fail(line_no, "missing column header");
      if (split(text, ',').size() != 12) parse_fail(line_no, "expected 12 columns");
      header_seen = true;
      continue;
    }
    const auto f = split(text, ',');
    if (f.size() != 12) parse_fail(line_no, fmt::format("expected 12 fields, got {}", f.size()));

    PartRecord r;
    r.part_number = std::string(trim(f[0]));
    const auto type = parse_component_type(trim(f[1]));
    if (!type) parse_fail(line_no, fmt::format("unknown component type '{}'", f[1]));
    r.type = *type;
    r.module_mm = parse_optional_double(f[2], line_no);
    r.teeth = parse_optional_int(f[3], line_no);
    r.pitch_radius_m = parse_optional_double(f[4], line_no);
    r.length_m = parse_optional_double(f[5], line_no);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto extent = parse_optional_double(f[6 + k], line_no);
      if (!extent) parse_fail(line_no, "bounding box fields are required");
      r.bbox_m[k] = *extent;
    }
    const auto weight = parse_optional_double(f[9], line_no);
    if (!weight) parse_fail(line_no, "weight is required");
    r.weight_kg = *weight;
    const auto hand = trim(f[10]);
    if (hand == "R") {
      r.handedness = Handedness::Right;
    } else if (hand == "L") {
      r.handedness = Handedness::Left;
    } else if (hand == "none" || hand.empty()) {
      r.handedness = Handedness::None;
    } else {
      parse_fail(line_no, fmt::format("bad handedness '{}'", hand));
    }
    const auto partners = trim(f[11]);
    if (!partners.empty()) {
      for (auto p : split(partners, ';')) r.mesh_partners.emplace_back(trim(p));
    }
    records.push_back(std::move(r));
  }
  if (!version) parse_fail(line_no, "missing @version directive");
  return Catalogue::from_records(std::move(records), *version);
}

Catalogue load_catalogue(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CatalogueError(CatalogueError::Kind::ParseError,
                         fmt::format("cannot open catalogue {}", path.string()));
  }
  return parse_catalogue(in);
}

std::filesystem::path default_catalogue_path() {
  if (const char* env = std::getenv("GEARSYN_CATALOGUE"); env != nullptr && *env != '\0') {
    return env;
  }
  std::filesystem::path source = GEARSYN_DEFAULT_CATALOGUE;
  if (std::filesystem::exists(source)) return source;
  return GEARSYN_INSTALLED_CATALOGUE;
}

}  // namespace gearsyn
