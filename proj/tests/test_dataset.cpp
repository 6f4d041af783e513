#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "gearsyn/dataset.hpp"
#include "gearsyn/feasibility.hpp"
#include "support.hpp"

namespace gearsyn {
namespace {

using test::catalogue;
using test::seq;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DatasetConfig small_config(std::size_t n, std::uint64_t seed) {
  DatasetConfig c;
  c.n_target = n;
  c.seed = seed;
  return c;
}

TEST(Encode, FieldOrder) {
  SimResult r;
  r.input = MotionType::Rotation;
  r.output = MotionType::Translation;
  r.speed_ratio = 0.5;
  r.position = {0.2, 0.1, 0.0};
  r.motion = SignedAxis(1, +1);
  const auto flat = encode_requirements(r).flatten();
  EXPECT_EQ(flat, (std::array<double, 8>{0, 1, 0.5, 0.2, 0.1, 0, 1, 1}));

  r.motion = SignedAxis(2, -1);
  const auto neg = encode_requirements(r);
  EXPECT_EQ(neg.m_index, 2);
  EXPECT_EQ(neg.m_sign, -1);
}

TEST(Encode, SingleShaft) {
  const auto flat = encode_requirements(simulate(seq("<start> tra+ SH-100 <end>"), catalogue())).flatten();
  EXPECT_EQ(flat, (std::array<double, 8>{0, 0, 1, 0.1, 0, 0, 0, 1}));
}

TEST(Requirements, FromFlatRejectsMalformedVectors) {
  const std::vector<double> ok{0, 1, 2.5, 0, 0, 0, 2, -1};
  EXPECT_EQ(Requirements::from_flat(ok).flatten()[6], 2.0);
  auto bad = ok;
  bad[0] = 0.5;
  EXPECT_THROW(Requirements::from_flat(bad), std::invalid_argument);
  bad = ok;
  bad[2] = 0;
  EXPECT_THROW(Requirements::from_flat(bad), std::invalid_argument);
  bad = ok;
  bad[6] = 3;
  EXPECT_THROW(Requirements::from_flat(bad), std::invalid_argument);
  bad = ok;
  bad[7] = 0;
  EXPECT_THROW(Requirements::from_flat(bad), std::invalid_argument);
  EXPECT_THROW(Requirements::from_flat(std::vector<double>(7, 1.0)), std::invalid_argument);
}

TEST(Records, ParseAcceptsCommasAndPlusSigns) {
  const auto r = parse_requirements("0, 0, +1.5, 0.1, 0, 0, 0, +1");
  EXPECT_EQ(r.s, 1.5);
  EXPECT_EQ(r.m_sign, 1);
  EXPECT_THROW(parse_requirements("0 0 1 0 0 0 0"), DatasetError);
  EXPECT_THROW(parse_requirements("0 0 x 0 0 0 0 1"), DatasetError);
  EXPECT_THROW(parse_record("0 0 1 0 0 0 0 1 <start> tra+ SH-100 <end>", catalogue()), DatasetError);
  EXPECT_THROW(parse_record("0 0 1 0 0 0 0 1 | <start> tra+ SH-9 <end>", catalogue()), DatasetError);
}

TEST(Records, RoundTripIsExact) {
  const auto& cat = catalogue();
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    DatasetRecord rec;
    rec.sequence = random_valid_sequence(rng.next(), 10, cat);
    rec.requirements = encode_requirements(simulate(rec.sequence, cat));
    // Perturb the scalars so non-representable decimals are exercised.
    rec.requirements.s *= 1.0 + rng.uniform();
    rec.requirements.p[1] = (rng.uniform() - 0.5) * 1e-7;
    const auto line = format_record(rec, cat);
    EXPECT_EQ(parse_record(line, cat), rec) << line;
  }
}

TEST(Generate, RecordsAreValidFeasibleUniqueAndSelfConsistent) {
  const auto& cat = catalogue();
  const auto data = generate_records(small_config(1000, 7), cat);
  ASSERT_EQ(data.records.size(), 1000u);
  std::set<std::vector<Token>> seen;
  for (const auto& r : data.records) {
    ASSERT_FALSE(validate_grammar(r.sequence, cat));
    const auto sim = simulate(r.sequence, cat);
    ASSERT_FALSE(check_interference(sim.placements));
    ASSERT_EQ(encode_requirements(sim), r.requirements);
    ASSERT_TRUE(seen.insert(r.sequence.tokens).second);
  }
  const auto& m = data.manifest;
  EXPECT_EQ(m.accepted, 1000u);
  EXPECT_EQ(m.rejected_invalid, 0u);
  EXPECT_GT(m.rejected_infeasible, 0u);
  EXPECT_EQ(m.draws, m.accepted + m.rejected_invalid + m.rejected_infeasible + m.rejected_duplicate);
  EXPECT_EQ(m.vocab_hash, vocabulary_hash(cat));
  EXPECT_EQ(m.catalogue_version, cat.version());
}

TEST(Generate, TokenSamplerAlsoWorks) {
  auto config = small_config(300, 1);
  config.sampler = Sampler::Token;
  const auto data = generate_records(config, catalogue());
  EXPECT_EQ(data.records.size(), 300u);
  EXPECT_EQ(data.manifest.sampler, Sampler::Token);
}

TEST(Generate, IndependentOfWorkerCount) {
  auto config = small_config(500, 3);
  const auto one = generate_records(config, catalogue());
  config.workers = 3;
  const auto three = generate_records(config, catalogue());
  EXPECT_EQ(one.records, three.records);
  EXPECT_EQ(one.manifest.to_json(), three.manifest.to_json());
}

TEST(Generate, FilesAreByteIdenticalAcrossRuns) {
  const auto& cat = catalogue();
  const auto dir = test::scratch_dir("dataset_determinism");
  generate_dataset(small_config(1000, 7), dir / "a" / "data.txt", cat);
  generate_dataset(small_config(1000, 7), dir / "b" / "data.txt", cat);
  EXPECT_EQ(slurp(dir / "a" / "data.txt"), slurp(dir / "b" / "data.txt"));
  EXPECT_EQ(slurp(dir / "a" / "data.txt.manifest.json"), slurp(dir / "b" / "data.txt.manifest.json"));

  const auto vocab = slurp(dir / "a" / "vocab.txt");
  EXPECT_EQ(vocab, vocabulary_text(cat));
  const auto manifest = nlohmann::json::parse(slurp(manifest_path(dir / "a" / "data.txt")));
  EXPECT_EQ(manifest["accepted"], 1000);
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["vocab_hash"], vocabulary_hash(cat));

  const auto back = read_records(dir / "a" / "data.txt", cat);
  EXPECT_EQ(back, generate_records(small_config(1000, 7), cat).records);
}

TEST(Generate, Errors) {
  const auto& cat = catalogue();
  try {
    generate_dataset(small_config(10, 0), "/dev/null/nope/data.txt", cat);
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetError::Kind::OutputUnwritable);
  }
  auto config = small_config(10, 0);
  config.max_draws = 5;
  try {
    generate_records(config, cat);
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetError::Kind::Exhausted);
  }
  config = small_config(0, 0);
  EXPECT_THROW(generate_records(config, cat), DatasetError);
  config = small_config(10, 0);
  config.max_components = 11;
  EXPECT_THROW(generate_records(config, cat), DatasetError);
  EXPECT_THROW(read_records("/nonexistent/records.txt", cat), DatasetError);
  EXPECT_THROW(parse_sampler("gaussian"), DatasetError);
}

TEST(Split, Sizes) {
  EXPECT_EQ(split_sizes(7363640, 0.0005, 0.0005).val, 3681u);
  EXPECT_EQ(split_sizes(10000, 0.05, 0.05), (SplitSizes{9000, 500, 500}));
  EXPECT_EQ(split_sizes(100, 0.1, 0.2), (SplitSizes{70, 10, 20}));
  try {
    split_sizes(100, 0.0005, 0.0005);
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetError::Kind::TooFewRecords);
  }
  EXPECT_THROW(split_sizes(100, 0.0, 0.1), DatasetError);
  EXPECT_THROW(split_sizes(100, 0.6, 0.5), DatasetError);
}

TEST(Split, PartitionsTheInputMultiset) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 20 + rng.index(2000);
    std::vector<int> items(n);
    for (auto& x : items) x = static_cast<int>(rng.index(50));  // duplicates on purpose
    const double vf = 0.01 + 0.2 * rng.uniform(), tf = 0.01 + 0.2 * rng.uniform();
    Splits<int> parts;
    try {
      parts = split_items(items, vf, tf, rng.next());
    } catch (const DatasetError&) {
      continue;
    }
    const auto sizes = split_sizes(n, vf, tf);
    ASSERT_EQ(parts.val.size(), sizes.val);
    ASSERT_EQ(parts.test.size(), sizes.test);
    std::vector<int> joined = parts.train;
    joined.insert(joined.end(), parts.val.begin(), parts.val.end());
    joined.insert(joined.end(), parts.test.begin(), parts.test.end());
    std::sort(joined.begin(), joined.end());
    std::sort(items.begin(), items.end());
    ASSERT_EQ(joined, items);
  }
}

TEST(Split, SeededAndFileBased) {
  const auto& cat = catalogue();
  const auto dir = test::scratch_dir("split");
  const auto data = generate_records(small_config(400, 2), cat);
  write_records(dir / "all.txt", data.records, cat);
  const auto sizes = split_file(dir / "all.txt", dir / "out", 0.05, 0.05, 11, cat);
  EXPECT_EQ(sizes, (SplitSizes{360, 20, 20}));
  const auto train = read_records(dir / "out" / "train.txt", cat);
  const auto val = read_records(dir / "out" / "val.txt", cat);
  const auto test = read_records(dir / "out" / "test.txt", cat);
  EXPECT_EQ(train.size() + val.size() + test.size(), 400u);
  std::set<std::vector<Token>> all;
  for (const auto* part : {&train, &val, &test}) {
    for (const auto& r : *part) all.insert(r.sequence.tokens);
  }
  EXPECT_EQ(all.size(), 400u);

  const auto again = split_items(data.records, 0.05, 0.05, 11);
  EXPECT_EQ(again.val, val);
  const auto other = split_items(data.records, 0.05, 0.05, 12);
  EXPECT_NE(other.val, val);
}

TEST(Records, CommentsAndBlankLinesAreSkipped) {
  const auto dir = test::scratch_dir("comments");
  {
    std::ofstream out(dir / "r.txt");
    out << "# header\n\n0 0 1 0.1 0 0 0 1 | <start> tra+ SH-100 <end>\n   \n";
  }
  EXPECT_EQ(read_records(dir / "r.txt", catalogue()).size(), 1u);
  {
    std::ofstream out(dir / "bad.txt");
    out << "0 0 1 0.1 0 0 0 1 | <start> tra+ SH-100 <end>\nnot a record\n";
  }
  try {
    read_records(dir / "bad.txt", catalogue());
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace gearsyn
