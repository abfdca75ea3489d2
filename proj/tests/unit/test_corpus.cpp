#include <gtest/gtest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "oracles.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/corpus/cohorts.hpp"
#include "xenorisk/corpus/corpus.hpp"
#include "xenorisk/corpus/gazetteer.hpp"
#include "xenorisk/lexicon/lexicon.hpp"

using namespace xenorisk;
using namespace xenorisk::corpus;
using nlohmann::json;

namespace {

const std::filesystem::path kData = XENORISK_TEST_DATA_DIR;

std::string tweet_line(const std::string& id, const std::string& user, const std::string& ts, const std::string& text,
                       int retweets = 0) {
  return json{{"tweet_id", id}, {"user_id", user}, {"timestamp", ts}, {"text", text}, {"retweet_count", retweets},
              {"like_count", 0}, {"urls", json::array()}}
      .dump();
}

Corpus corpus_of(const std::vector<std::string>& lines, IngestReport& report) {
  std::string joined;
  for (const auto& l : lines) joined += l + "\n";
  std::istringstream in(joined);
  return ingest_tweets(in, report);
}

}  // namespace

TEST(Ingest, ThreeWellFormedLines) {
  IngestReport r;
  const auto c = corpus_of({tweet_line("1", "u", "2020-01-02T00:00:00Z", "a"),
                            tweet_line("2", "u", "2020-01-03T00:00:00Z", "b"),
                            tweet_line("3", "v", "2020-01-04T00:00:00Z", "c")},
                           r);
  EXPECT_EQ(c.tweets().size(), 3u);
  EXPECT_EQ(c.tweets_of("u").size(), 2u);
  EXPECT_TRUE(r.rejects.empty());
}

TEST(Ingest, DuplicateTweetIdFirstWins) {
  IngestReport r;
  const auto c = corpus_of({tweet_line("1", "u", "2020-01-02T00:00:00Z", "first"),
                            tweet_line("1", "u", "2020-01-02T00:00:00Z", "second")},
                           r);
  ASSERT_EQ(c.tweets().size(), 1u);
  EXPECT_EQ(c.tweets()[0].text, "first");
  EXPECT_EQ(r.duplicates, 1u);
  EXPECT_EQ(r.notes.size(), 1u);
}

TEST(Ingest, MalformedLineIsRejectedWithLineNumber) {
  IngestReport r;
  std::ostringstream lines;
  for (int i = 0; i < 10; ++i) lines << tweet_line(std::to_string(i), "u", "2020-01-02T00:00:00Z", "t") << "\n";
  lines << "not json\n";
  std::istringstream in(lines.str());
  Corpus c;
  ingest_tweets(in, c, r);
  EXPECT_EQ(c.tweets().size(), 10u);
  ASSERT_EQ(r.rejects.size(), 1u);
  EXPECT_EQ(r.rejects[0].line, 11u);
}

TEST(Ingest, TwoValidOneInvalidExceedsRejectBudget) {
  IngestReport r;
  EXPECT_THROW(corpus_of({tweet_line("1", "u", "2020-01-02T00:00:00Z", "a"), "not json",
                          tweet_line("2", "u", "2020-01-03T00:00:00Z", "b")},
                         r),
               DataError);
  EXPECT_EQ(r.rejects.size(), 1u);
}

TEST(Ingest, RejectsNegativeCountsAndBadTimestamps) {
  EXPECT_THROW(parse_tweet_json(tweet_line("1", "u", "2020-01-02T00:00:00Z", "a", -1)), DataError);
  EXPECT_THROW(parse_tweet_json(tweet_line("1", "u", "not a time", "a")), DataError);
  EXPECT_THROW(parse_tweet_json(R"({"tweet_id":"1"})"), DataError);
}

TEST(Ingest, UserRecordFields) {
  const auto u = parse_user_json(
      R"({"user_id":"9","verified":true,"created_at":"2015-01-01T00:00:00Z","followers":3,"followings":4,)"
      R"("statuses":5,"favorites":6,"description":"d","location":"Austin, TX","follows":["a","b"]})");
  EXPECT_TRUE(u.verified);
  EXPECT_EQ(u.followers, 3u);
  EXPECT_EQ(u.location_raw, "Austin, TX");
  EXPECT_EQ(u.follows.size(), 2u);
}

TEST(Split, BoundaryStraddle) {
  IngestReport r;
  const auto c = corpus_of({tweet_line("1", "u", "2019-12-30T00:00:00Z", "a"),
                            tweet_line("2", "u", "2020-01-02T00:00:00Z", "b")},
                           r);
  const auto s = split_pre_post(c, default_split_instant());
  EXPECT_EQ(s.pre.size(), 1u);
  EXPECT_EQ(s.post.size(), 1u);
}

TEST(Split, TweetAtSplitInstantIsPost) {
  IngestReport r;
  const auto c = corpus_of({tweet_line("1", "u", "2019-12-31T00:00:00Z", "a")}, r);
  const auto s = split_pre_post(c, default_split_instant());
  EXPECT_TRUE(s.pre.empty());
  EXPECT_EQ(s.post.size(), 1u);
}

TEST(Split, AllAfterSplitMeansEmptyPre) {
  IngestReport r;
  const auto c = corpus_of({tweet_line("1", "u", "2020-02-01T00:00:00Z", "a"),
                            tweet_line("2", "u", "2020-03-01T00:00:00Z", "b")},
                           r);
  EXPECT_TRUE(split_pre_post(c, default_split_instant()).pre.empty());
  // moving the split past the last tweet empties post
  EXPECT_TRUE(split_pre_post(c, *parse_rfc3339("2021-01-01T00:00:00Z")).post.empty());
}

TEST(Split, PartitionIsExhaustiveAndDisjoint) {
  IngestReport r;
  std::vector<std::string> lines;
  for (int d = 1; d <= 28; ++d) {
    lines.push_back(tweet_line(std::to_string(d), "u", "2019-12-" + std::string(d < 10 ? "0" : "") +
                                                           std::to_string(d) + "T12:00:00Z", "x"));
  }
  const auto c = corpus_of(lines, r);
  const auto s = split_pre_post(c, *parse_rfc3339("2019-12-15T00:00:00Z"));
  EXPECT_EQ(s.pre.size() + s.post.size(), c.tweets().size());
  for (const auto i : s.pre) EXPECT_TRUE(s.is_pre(c.tweets()[i]));
  for (const auto i : s.post) EXPECT_FALSE(s.is_pre(c.tweets()[i]));
}

TEST(Gazetteer, SpecExamples) {
  const auto g = load_gazetteer(kData / "gazetteer.csv");
  EXPECT_EQ(infer_state("Austin, TX", g), "TX");
  EXPECT_EQ(infer_state("somewhere on earth", g), std::nullopt);
  EXPECT_EQ(infer_state("new york", g), "NY");
  EXPECT_EQ(infer_state("NEW YORK CITY", g), "NY");
  EXPECT_EQ(infer_state("Boston, MA", g), "MA");
}

TEST(Gazetteer, AbbreviationsOnlyAtEnd) {
  const auto g = load_gazetteer(kData / "gazetteer.csv");
  EXPECT_EQ(infer_state("in my head", g), std::nullopt);
  EXPECT_EQ(infer_state("me and my dog", g), std::nullopt);
  EXPECT_EQ(infer_state("Portland, OR", g), "OR");
}

TEST(Labels, SpecExamples) {
  EXPECT_EQ(label_from_counts({0, 2}).label, Cohort::HatefulLow);
  EXPECT_EQ(label_from_counts({1, 50}).label, Cohort::Excluded);
  EXPECT_EQ(label_from_counts({1, 50}).reason, ExclusionReason::PrePeriodSlur);
  EXPECT_EQ(label_from_counts({0, 126}).label, Cohort::HatefulHigh);
  EXPECT_EQ(label_from_counts({0, 1}).label, Cohort::Excluded);
  EXPECT_EQ(label_from_counts({0, 1}).reason, ExclusionReason::None);
  EXPECT_EQ(label_from_counts({0, 0}).label, Cohort::Reference);
}

TEST(Labels, LowHighBoundary) {
  for (std::size_t post = 0; post <= 10; ++post) {
    const auto l = label_from_counts({0, post});
    EXPECT_EQ(l.slur_tweet_count, post);
    if (post == 0) EXPECT_EQ(l.label, Cohort::Reference);
    else if (post == 1) EXPECT_EQ(l.label, Cohort::Excluded);
    else if (post <= 3) EXPECT_EQ(l.label, Cohort::HatefulLow);
    else EXPECT_EQ(l.label, Cohort::HatefulHigh);
  }
}

TEST(Bots, FilterExamples) {
  const BotScores scores{{"a", 0.9}, {"b", 0.49}, {"c", 0.5}};
  std::vector<std::string> missing;
  const auto kept = filter_bots({"a", "b", "c", "d"}, scores, 0.5, &missing);
  EXPECT_EQ(kept, (std::set<std::string>{"b", "d"}));
  EXPECT_EQ(missing, std::vector<std::string>{"d"});
}

TEST(Bots, OutOfRangeScoreIsDataError) {
  oracle::TempDir dir("bots");
  oracle::write_text(dir.path() / "b.csv", "user_id,score\na,1.5\n");
  EXPECT_THROW(load_bot_scores(dir.path() / "b.csv"), DataError);
  EXPECT_THROW(filter_bots({"a"}, {{"a", -0.1}}), DataError);
  EXPECT_THROW(load_bot_scores(dir.path() / "missing.csv"), DataError);
}

TEST(Reference, EligibilityRules) {
  std::map<std::string, UserFacts> facts;
  facts["ok"] = {{0, 0}, true, "MA"};
  facts["slur"] = {{0, 2}, true, "MA"};
  facts["no_covid"] = {{0, 0}, false, "MA"};
  facts["no_state"] = {{0, 0}, true, std::nullopt};
  EXPECT_EQ(select_reference_candidates(facts, 0, 1), std::vector<std::string>{"ok"});
}

TEST(Reference, SeededSampleIsDeterministic) {
  std::map<std::string, UserFacts> facts;
  for (int i = 0; i < 50; ++i) facts["u" + std::to_string(i)] = {{0, 0}, true, "TX"};
  const auto a = select_reference_candidates(facts, 10, 42);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(a, select_reference_candidates(facts, 10, 42));
  EXPECT_NE(a, select_reference_candidates(facts, 10, 43));
  EXPECT_EQ(select_reference_candidates(facts, 100, 42).size(), 50u);
}

TEST(Cohorts, TotalFunctionAndInvariants) {
  std::map<std::string, UserFacts> facts;
  BotScores bots;
  for (int i = 0; i < 200; ++i) {
    UserFacts f;
    f.slurs = {static_cast<std::size_t>(i % 7 == 0), static_cast<std::size_t>(i % 9)};
    f.covid_tweet = i % 3 != 0;
    if (i % 11 != 0) f.state = "CA";
    const std::string id = "u" + std::to_string(1000 + i);
    facts[id] = f;
    if (i % 5 != 0) bots[id] = (i % 13) / 13.0;
  }
  CohortConfig cfg;
  const auto r = assign_cohorts(facts, bots, cfg);
  ASSERT_EQ(r.users.size(), facts.size());
  std::size_t total = 0;
  for (const auto& [c, n] : r.counts()) total += n;
  EXPECT_EQ(total, facts.size());
  for (const auto& u : r.users) {
    if (u.label.label == Cohort::Reference) {
      EXPECT_EQ(u.slurs.pre + u.slurs.post, 0u);
      EXPECT_TRUE(u.covid_tweet);
      EXPECT_TRUE(u.state);
    }
    if (u.label.label != Cohort::Excluded && u.bot_score) {
      EXPECT_LT(*u.bot_score, 0.5);
    }
    if (u.label.label == Cohort::HatefulLow) {
      EXPECT_TRUE(u.slurs.post >= 2 && u.slurs.post <= 3);
    }
    if (u.label.label == Cohort::HatefulHigh) {
      EXPECT_GE(u.slurs.post, 4u);
    }
  }
  EXPECT_FALSE(r.warnings.empty());

  std::ostringstream a, b;
  write_labels(a, r);
  write_labels(b, assign_cohorts(facts, bots, cfg));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Cohorts, LabelsCsvRoundTrip) {
  std::map<std::string, UserFacts> facts;
  facts["a"] = {{0, 0}, true, "MA"};
  facts["b"] = {{0, 5}, false, "TX"};
  facts["c"] = {{2, 5}, false, std::nullopt};
  const auto r = assign_cohorts(facts, {{"a", 0.1}, {"b", 0.7}}, {});
  oracle::TempDir dir("labels");
  {
    std::ofstream out(dir.path() / "labels.csv");
    write_labels(out, r);
  }
  const auto back = read_labels(dir.path() / "labels.csv");
  ASSERT_EQ(back.users.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.users[i].user_id, r.users[i].user_id);
    EXPECT_EQ(back.users[i].label, r.users[i].label);
    EXPECT_EQ(back.users[i].state, r.users[i].state);
    EXPECT_EQ(back.users[i].bot_score, r.users[i].bot_score);
  }
  EXPECT_EQ(back.find("b")->label.reason, ExclusionReason::Bot);
}

TEST(Cohorts, SlurCountingUsesTweetsNotHits) {
  IngestReport r;
  const auto c = corpus_of({tweet_line("1", "u", "2020-02-01T00:00:00Z", "wuflu wuflu kung flu"),
                            tweet_line("2", "u", "2020-02-02T00:00:00Z", "#chinazi"),
                            tweet_line("3", "u", "2019-02-02T00:00:00Z", "nothing here")},
                           r);
  const auto slurs = lexicon::load_lexicon(kData / "slurs.lex");
  const auto counts = count_slur_tweets(c, split_pre_post(c, default_split_instant()), slurs);
  EXPECT_EQ(counts.at("u").post, 2u);
  EXPECT_EQ(counts.at("u").pre, 0u);
}
