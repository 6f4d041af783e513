#include "gearsyn/dataset.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <unordered_set>

#include "gearsyn/feasibility.hpp"
#include "gearsyn/generate.hpp"
#include "gearsyn/parallel.hpp"

namespace gearsyn {
namespace {

bool is_separator(char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r' || c == '\n'; }

std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DatasetError(DatasetError::Kind::OutputUnwritable, fmt::format("cannot write {}", path.string()));
  }
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw DatasetError(DatasetError::Kind::OutputUnwritable, fmt::format("failed writing {}", path.string()));
  }
}

std::string sequence_key(const GearSequence& seq, const Catalogue& cat) {
  std::string key;
  key.reserve(seq.tokens.size());
  for (const auto& t : seq.tokens) key.push_back(static_cast<char>(token_id(t, cat)));
  return key;
}

struct Draw {
  GearSequence sequence;
  bool valid = false;
  bool feasible = false;
  Requirements requirements;
};

}  // namespace

std::array<double, Requirements::kSize> Requirements::flatten() const {
  return {static_cast<double>(tau_in), static_cast<double>(tau_out), s, p[0], p[1], p[2],
          static_cast<double>(m_index), static_cast<double>(m_sign)};
}

Requirements Requirements::from_flat(std::span<const double> values) {
  if (values.size() != kSize) {
    throw std::invalid_argument(fmt::format("expected {} requirement values, got {}", kSize, values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("requirement values must be finite");
  }
  const auto as_flag = [](double v, const char* name) {
    if (v != 0.0 && v != 1.0) throw std::invalid_argument(fmt::format("{} must be 0 or 1", name));
    return static_cast<int>(v);
  };
  Requirements r;
  r.tau_in = as_flag(values[0], "tau_in");
  r.tau_out = as_flag(values[1], "tau_out");
  if (!(values[2] > 0.0)) throw std::invalid_argument("speed ratio must be positive");
  r.s = values[2];
  r.p = Vec3(values[3], values[4], values[5]);
  if (values[6] != 0.0 && values[6] != 1.0 && values[6] != 2.0) {
    throw std::invalid_argument("m_index must be 0, 1 or 2");
  }
  r.m_index = static_cast<int>(values[6]);
  if (values[7] != 1.0 && values[7] != -1.0) throw std::invalid_argument("m_sign must be +1 or -1");
  r.m_sign = static_cast<int>(values[7]);
  return r;
}

Requirements encode_requirements(const SimResult& res) {
  Requirements r;
  r.tau_in = res.input == MotionType::Translation ? 1 : 0;
  r.tau_out = res.output == MotionType::Translation ? 1 : 0;
  r.s = res.speed_ratio;
  r.p = res.position;
  r.m_index = res.motion.index;
  r.m_sign = res.motion.sign;
  return r;
}

std::string format_requirements(const Requirements& req) {
  const auto flat = req.flatten();
  return fmt::format("{}", fmt::join(flat, " "));
}

std::string format_record(const DatasetRecord& record, const Catalogue& cat) {
  return fmt::format("{}{}{}", format_requirements(record.requirements), kRecordSeparator,
                     format_sequence(record.sequence, cat));
}

Requirements parse_requirements(std::string_view text) {
  std::vector<double> values;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_separator(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !is_separator(text[j])) ++j;
    const auto word = text.substr(i, j - i);
    const auto value = parse_double(word);
    if (!value) {
      throw DatasetError(DatasetError::Kind::Format, fmt::format("'{}' is not a number", word));
    }
    values.push_back(*value);
    i = j;
  }
  try {
    return Requirements::from_flat(values);
  } catch (const std::invalid_argument& e) {
    throw DatasetError(DatasetError::Kind::Format, e.what());
  }
}

DatasetRecord parse_record(std::string_view line, const Catalogue& cat) {
  const auto bar = line.find('|');
  if (bar == std::string_view::npos) {
    throw DatasetError(DatasetError::Kind::Format, "record has no '|' separator");
  }
  DatasetRecord record;
  record.requirements = parse_requirements(line.substr(0, bar));
  try {
    record.sequence = parse_sequence(line.substr(bar + 1), cat);
  } catch (const ParseError& e) {
    throw DatasetError(DatasetError::Kind::Format, e.what());
  }
  return record;
}

std::vector<DatasetRecord> read_records(const std::filesystem::path& path, const Catalogue& cat) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DatasetError(DatasetError::Kind::InputUnreadable, fmt::format("cannot read {}", path.string()));
  }
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(parse_record(line, cat));
    } catch (const DatasetError& e) {
      throw DatasetError(DatasetError::Kind::Format,
                         fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
  }
  return out;
}

void write_records(const std::filesystem::path& path, std::span<const DatasetRecord> records,
                   const Catalogue& cat) {
  auto out = open_output(path);
  for (const auto& r : records) out << format_record(r, cat) << '\n';
  check_written(out, path);
}

std::string_view to_string(Sampler s) { return s == Sampler::Variable ? "variable" : "token"; }

Sampler parse_sampler(std::string_view text) {
  if (text == "variable") return Sampler::Variable;
  if (text == "token") return Sampler::Token;
  throw DatasetError(DatasetError::Kind::InvalidArgument, fmt::format("unknown sampler '{}'", text));
}

nlohmann::ordered_json Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["n_target"] = n_target;
  j["accepted"] = accepted;
  j["draws"] = draws;
  j["rejected_invalid"] = rejected_invalid;
  j["rejected_infeasible"] = rejected_infeasible;
  j["rejected_duplicate"] = rejected_duplicate;
  j["seed"] = seed;
  j["max_components"] = max_components;
  j["sampler"] = std::string(to_string(sampler));
  j["catalogue_version"] = catalogue_version;
  j["vocab_hash"] = vocab_hash;
  return j;
}

GeneratedDataset generate_records(const DatasetConfig& config, const Catalogue& cat) {
  if (config.n_target < 1) {
    throw DatasetError(DatasetError::Kind::InvalidArgument, "n_target must be at least 1");
  }
  if (config.max_components < 1 || config.max_components > kMaxComponents) {
    throw DatasetError(DatasetError::Kind::InvalidArgument,
                       fmt::format("max_components must be in [1, {}]", kMaxComponents));
  }
  const std::size_t max_draws = config.max_draws ? config.max_draws : 100 * config.n_target + 10000;

  std::optional<VariableSequenceSampler> sampler;
  if (config.sampler == Sampler::Variable) sampler.emplace(cat, config.max_components);

  GeneratedDataset out;
  Manifest& m = out.manifest;
  m.n_target = config.n_target;
  m.seed = config.seed;
  m.max_components = config.max_components;
  m.sampler = config.sampler;
  m.catalogue_version = cat.version();
  m.vocab_hash = vocabulary_hash(cat);
  out.records.reserve(config.n_target);

  std::unordered_set<std::string> seen;
  constexpr std::size_t kBlock = 4096;
  std::vector<Draw> block;
  while (out.records.size() < config.n_target && m.draws < max_draws) {
    const std::size_t first = m.draws;
    const std::size_t count = std::min(kBlock, max_draws - first);
    block.assign(count, Draw{});
    parallel_for(count, config.workers, [&](std::size_t k) {
      const auto stream = derive_seed(config.seed, first + k);
      Draw& d = block[k];
      d.sequence = sampler ? sampler->sample(stream)
                           : random_valid_sequence(stream, config.max_components, cat);
      d.valid = !validate_grammar(d.sequence.tokens, cat, config.max_components);
      if (!d.valid) return;
      const auto res = simulate(d.sequence, cat);
      d.feasible = !check_interference(res.placements);
      d.requirements = encode_requirements(res);
    });
    for (auto& d : block) {
      if (out.records.size() >= config.n_target) break;
      ++m.draws;
      if (!d.valid) {
        ++m.rejected_invalid;
      } else if (!d.feasible) {
        ++m.rejected_infeasible;
      } else if (!seen.insert(sequence_key(d.sequence, cat)).second) {
        ++m.rejected_duplicate;
      } else {
        out.records.push_back(DatasetRecord{d.requirements, std::move(d.sequence)});
      }
    }
  }
  m.accepted = out.records.size();
  if (m.accepted < config.n_target) {
    throw DatasetError(DatasetError::Kind::Exhausted,
                       fmt::format("only {} unique feasible sequences after {} draws (target {})",
                                   m.accepted, m.draws, config.n_target));
  }
  return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& records) {
  auto p = records;
  p += ".manifest.json";
  return p;
}

void write_vocabulary(const std::filesystem::path& path, const Catalogue& cat) {
  auto out = open_output(path);
  out << vocabulary_text(cat);
  check_written(out, path);
}

Manifest generate_dataset(const DatasetConfig& config, const std::filesystem::path& out,
                          const Catalogue& cat) {
  auto data = generate_records(config, cat);
  const auto dir = out.has_parent_path() ? out.parent_path() : std::filesystem::path(".");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_records(out, data.records, cat);
  write_vocabulary(dir / "vocab.txt", cat);
  const auto mpath = manifest_path(out);
  auto mout = open_output(mpath);
  mout << data.manifest.to_json().dump(2) << '\n';
  check_written(mout, mpath);
  return data.manifest;
}

SplitSizes split_sizes(std::size_t n, double val_frac, double test_frac) {
  if (!(val_frac > 0.0 && val_frac < 1.0) || !(test_frac > 0.0 && test_frac < 1.0) ||
      !(val_frac + test_frac < 1.0)) {
    throw DatasetError(DatasetError::Kind::InvalidArgument,
                       "split fractions must lie in (0, 1) and sum to less than 1");
  }
  const auto part = [n](double frac) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * frac + 1e-9));
  };
  SplitSizes s;
  s.val = part(val_frac);
  s.test = part(test_frac);
  if (s.val == 0 || s.test == 0 || s.val + s.test >= n) {
    throw DatasetError(DatasetError::Kind::TooFewRecords,
                       fmt::format("{} records leave an empty split at {}/{}", n, val_frac, test_frac));
  }
  s.train = n - s.val - s.test;
  return s;
}

SplitSizes split_file(const std::filesystem::path& input, const std::filesystem::path& out_dir,
                      double val_frac, double test_frac, std::uint64_t seed, const Catalogue& cat) {
  auto parts = split_items(read_records(input, cat), val_frac, test_frac, seed);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  write_records(out_dir / "train.txt", parts.train, cat);
  write_records(out_dir / "val.txt", parts.val, cat);
  write_records(out_dir / "test.txt", parts.test, cat);
  return {parts.train.size(), parts.val.size(), parts.test.size()};
}

}  // namespace gearsyn
