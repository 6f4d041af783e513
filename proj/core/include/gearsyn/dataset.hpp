#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gearsyn/catalogue.hpp"
#include "gearsyn/error.hpp"
#include "gearsyn/geometry.hpp"
#include "gearsyn/grammar.hpp"
#include "gearsyn/rng.hpp"
#include "gearsyn/simulator.hpp"
#include "gearsyn/token.hpp"

namespace gearsyn {

/// Design targets. Flattened order: tau_in, tau_out, s, p.x, p.y, p.z,
/// m_index, m_sign. Motion types are 1 for translation, 0 for rotation.
struct Requirements {
  int tau_in = 0;
  int tau_out = 0;
  double s = 1.0;
  Vec3 p;
  int m_index = 0;
  int m_sign = 1;

  static constexpr std::size_t kSize = 8;

  std::array<double, kSize> flatten() const;
  /// Throws std::invalid_argument unless the values form a well-formed vector.
  static Requirements from_flat(std::span<const double> values);

  SignedAxis motion() const { return SignedAxis(m_index, m_sign); }
  MotionType input_motion() const { return tau_in ? MotionType::Translation : MotionType::Rotation; }
  MotionType output_motion() const { return tau_out ? MotionType::Translation : MotionType::Rotation; }

  friend bool operator==(const Requirements&, const Requirements&) = default;
};

Requirements encode_requirements(const SimResult& res);

struct DatasetRecord {
  Requirements requirements;
  GearSequence sequence;
  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

class DatasetError : public Error {
 public:
  enum class Kind { OutputUnwritable, InputUnreadable, Format, TooFewRecords, InvalidArgument, Exhausted };
  DatasetError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::string_view kRecordSeparator = " | ";

/// "r0 r1 ... r7 | tok tok ...". Scalars use the shortest text that parses
/// back to the identical double.
std::string format_record(const DatasetRecord& record, const Catalogue& cat);
std::string format_requirements(const Requirements& req);
/// Throws DatasetError(Format) on malformed lines.
DatasetRecord parse_record(std::string_view line, const Catalogue& cat);
/// Eight whitespace- or comma-separated scalars.
Requirements parse_requirements(std::string_view text);

/// Blank lines and lines starting with '#' are skipped.
std::vector<DatasetRecord> read_records(const std::filesystem::path& path, const Catalogue& cat);
void write_records(const std::filesystem::path& path, std::span<const DatasetRecord> records,
                   const Catalogue& cat);

enum class Sampler : std::uint8_t {
  /// Uniform variable sequence, then uniform tokens per variable.
  Variable,
  /// Uniform choice among accepted tokens at every position.
  Token,
};
std::string_view to_string(Sampler s);
Sampler parse_sampler(std::string_view text);

struct DatasetConfig {
  std::size_t n_target = 100000;
  int max_components = kMaxComponents;
  std::uint64_t seed = 0;
  Sampler sampler = Sampler::Variable;
  int workers = 1;
  /// Draw limit; 0 picks 100 * n_target + 10000.
  std::size_t max_draws = 0;
};

struct Manifest {
  std::size_t n_target = 0;
  std::size_t accepted = 0;
  std::size_t draws = 0;
  std::size_t rejected_invalid = 0;
  std::size_t rejected_infeasible = 0;
  std::size_t rejected_duplicate = 0;
  std::uint64_t seed = 0;
  int max_components = kMaxComponents;
  Sampler sampler = Sampler::Variable;
  std::string catalogue_version;
  std::string vocab_hash;

  nlohmann::ordered_json to_json() const;
};

struct GeneratedDataset {
  std::vector<DatasetRecord> records;
  Manifest manifest;
};

/// Rejection sampling: draw i comes from substream derive_seed(seed, i);
/// draws are simulated in parallel blocks and accepted in index order, so
/// the result does not depend on `workers`.
GeneratedDataset generate_records(const DatasetConfig& config, const Catalogue& cat);

/// Writes the records to `out`, the manifest to `<out>.manifest.json` and
/// the vocabulary to `vocab.txt` next to `out`.
Manifest generate_dataset(const DatasetConfig& config, const std::filesystem::path& out,
                          const Catalogue& cat);

std::filesystem::path manifest_path(const std::filesystem::path& records);
void write_vocabulary(const std::filesystem::path& path, const Catalogue& cat);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
  friend bool operator==(const SplitSizes&, const SplitSizes&) = default;
};

/// val = floor(n * val_frac), test = floor(n * test_frac), train = the rest.
/// Throws DatasetError(TooFewRecords) if any part would be empty.
SplitSizes split_sizes(std::size_t n, double val_frac, double test_frac);

template <typename T>
struct Splits {
  std::vector<T> train;
  std::vector<T> val;
  std::vector<T> test;
};

/// Seeded Fisher-Yates shuffle, then val, test and train slices in order.
template <typename T>
Splits<T> split_items(std::vector<T> items, double val_frac, double test_frac, std::uint64_t seed) {
  const auto sizes = split_sizes(items.size(), val_frac, test_frac);
  Rng rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.index(i)]);
  }
  Splits<T> out;
  auto it = std::make_move_iterator(items.begin());
  out.val.assign(it, it + static_cast<std::ptrdiff_t>(sizes.val));
  it += static_cast<std::ptrdiff_t>(sizes.val);
  out.test.assign(it, it + static_cast<std::ptrdiff_t>(sizes.test));
  it += static_cast<std::ptrdiff_t>(sizes.test);
  out.train.assign(it, std::make_move_iterator(items.end()));
  return out;
}

/// Splits a record file into train.txt, val.txt and test.txt in `out_dir`.
SplitSizes split_file(const std::filesystem::path& input, const std::filesystem::path& out_dir,
                      double val_frac, double test_frac, std::uint64_t seed, const Catalogue& cat);

}  // namespace gearsyn
