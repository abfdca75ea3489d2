#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/digest.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/parallel.hpp"
#include "xenorisk/common/rng.hpp"
#include "xenorisk/common/text.hpp"
#include "xenorisk/common/time.hpp"

using namespace xenorisk;

TEST(Time, ParsesUtcAndOffsets) {
  const auto a = parse_rfc3339("2020-03-16T12:00:00Z");
  const auto b = parse_rfc3339("2020-03-16T14:00:00+02:00");
  const auto c = parse_rfc3339("2020-03-16T12:00:00.999Z");
  ASSERT_TRUE(a && b && c);
  EXPECT_EQ(*a, *b);
  EXPECT_EQ(*a, *c);
  EXPECT_EQ(format_rfc3339(*a), "2020-03-16T12:00:00Z");
}

TEST(Time, RejectsMalformed) {
  EXPECT_FALSE(parse_rfc3339("2020-13-01T00:00:00Z"));
  EXPECT_FALSE(parse_rfc3339("yesterday"));
  EXPECT_FALSE(parse_rfc3339(""));
}

TEST(Time, DefaultSplitInstant) { EXPECT_EQ(format_rfc3339(default_split_instant()), "2019-12-31T00:00:00Z"); }

TEST(Time, DaysBetweenFloors) {
  const auto a = *parse_rfc3339("2020-01-01T00:00:00Z");
  EXPECT_EQ(days_between(a, *parse_rfc3339("2020-01-11T23:59:59Z")), 10);
  EXPECT_EQ(days_between(a, a), 0);
}

TEST(Digest, KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Rng, DeriveSeedSeparatesPaths) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 20; ++a) {
    for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(7, {a, b}));
  }
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(8, {1, 2}));
  EXPECT_NE(hash_tag("split"), hash_tag("folds"));
}

TEST(Rng, SampleWithoutReplacementIsSortedAndDistinct) {
  Rng rng(3);
  for (std::size_t k : {0u, 1u, 5u, 10u, 15u}) {
    const auto s = sample_without_replacement(10, k, rng);
    EXPECT_EQ(s.size(), std::min<std::size_t>(k, 10));
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), s.size());
  }
}

TEST(Csv, QuotingRoundTrip) {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", ""};
  std::ostringstream out;
  csv::write_row(out, fields);
  std::string line = out.str();
  line.pop_back();
  EXPECT_EQ(csv::split_record(line), fields);
}

TEST(Csv, ReadRowsSkipsHeaderAndComments) {
  std::istringstream in("# note\na,b\n1,2\n\n3,4\n");
  const auto rows = csv::read_rows(in, {"a", "b"});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].fields[0], "3");
  EXPECT_EQ(rows[1].line_number, 5u);
}

TEST(Csv, MissingFileIsDataError) { EXPECT_THROW(csv::read_file("/nonexistent/file.csv"), DataError); }

TEST(Text, FormatDoubleRoundTrips) {
  for (const double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) {
    EXPECT_EQ(std::stod(text::format_double(v)), v);
  }
}

TEST(Text, Utf8Lowercase) { EXPECT_EQ(text::to_lower_utf8("ÄBC Ωmega"), "äbc ωmega"); }

TEST(Parallel, ResultIndependentOfThreads) {
  std::vector<std::uint64_t> one(100), four(100);
  parallel_for(100, 1, [&](std::size_t i) { one[i] = derive_seed(1, {i}); });
  parallel_for(100, 4, [&](std::size_t i) { four[i] = derive_seed(1, {i}); });
  EXPECT_EQ(one, four);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw DataError("x"); }), DataError);
}
