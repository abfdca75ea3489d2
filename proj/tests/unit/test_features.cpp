#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/corpus/cohorts.hpp"
#include "xenorisk/corpus/corpus.hpp"
#include "xenorisk/corpus/gazetteer.hpp"
#include "xenorisk/features/blocks.hpp"
#include "xenorisk/features/embeddings.hpp"
#include "xenorisk/features/feature_matrix.hpp"
#include "xenorisk/features/featurize.hpp"
#include "xenorisk/features/media.hpp"
#include "xenorisk/features/nela.hpp"
#include "xenorisk/lexicon/lexicon.hpp"
#include "xenorisk/synth/synth.hpp"

using namespace xenorisk;
using namespace xenorisk::features;

namespace {

const std::filesystem::path kData = XENORISK_TEST_DATA_DIR;

corpus::TweetRecord tweet(const std::string& id, const std::string& text, std::vector<std::string> urls = {},
                          long long day = 0) {
  corpus::TweetRecord t;
  t.tweet_id = id;
  t.user_id = "u";
  t.text = text;
  t.urls = std::move(urls);
  t.timestamp = default_split_instant() - std::chrono::days(100 - day);
  return t;
}

std::vector<const corpus::TweetRecord*> ptrs(const std::vector<corpus::TweetRecord>& v) {
  std::vector<const corpus::TweetRecord*> out;
  for (const auto& t : v) out.push_back(&t);
  return out;
}

}  // namespace

TEST(Sample, ClampAndSize) {
  std::vector<corpus::TweetRecord> many, few;
  for (int i = 0; i < 500; ++i) many.push_back(tweet(std::to_string(i), "x", {}, i % 90));
  for (int i = 0; i < 50; ++i) few.push_back(tweet(std::to_string(i), "x"));
  EXPECT_EQ(sample_tweets(ptrs(many), 198, 1).size(), 198u);
  EXPECT_EQ(sample_tweets(ptrs(few), 198, 1).size(), 50u);
  EXPECT_TRUE(sample_tweets({}, 198, 1).empty());
  EXPECT_THROW(sample_tweets(ptrs(few), 0, 1), ValidationError);
}

TEST(Sample, DeterministicAndOrderInvariant) {
  std::vector<corpus::TweetRecord> v;
  for (int i = 0; i < 300; ++i) v.push_back(tweet(std::to_string(i), "x", {}, i % 50));
  auto p = ptrs(v);
  const auto a = sample_tweets(p, 40, 9);
  std::shuffle(p.begin(), p.end(), std::mt19937(1));
  EXPECT_EQ(a, sample_tweets(p, 40, 9));
  EXPECT_NE(a, sample_tweets(p, 40, 10));
  std::set<const corpus::TweetRecord*> distinct(a.begin(), a.end());
  EXPECT_EQ(distinct.size(), 40u);
}

TEST(Sample, MedianCount) {
  EXPECT_EQ(median_count({}), 0u);
  EXPECT_EQ(median_count({5, 1, 9}), 5u);
  EXPECT_EQ(median_count({4, 1, 9, 7}), 4u);
}

TEST(Nela, MoralFoundationRates) {
  NelaBundle b;
  b.words = lexicon::Lexicon("nela");
  b.words.add("harm", "war");
  b.words.add("harm", "kill");
  b.words.add("degradation", "disgust");
  const auto v = nela_tweet_features("war kill disgust", 0, b);
  ASSERT_EQ(v.size(), kNelaStructuralFeatures + 2);
  EXPECT_DOUBLE_EQ(v[kNelaStructuralFeatures + 0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(v[kNelaStructuralFeatures + 1], 1.0 / 3.0);
}

TEST(Nela, EmptyInputIsZeroVector) {
  const auto b = load_nela_bundle(kData / "nela.lex");
  const auto block = nela_features({}, b);
  EXPECT_EQ(block.dim(), b.dim());
  EXPECT_TRUE(std::all_of(block.values.begin(), block.values.end(), [](double x) { return x == 0.0; }));
  EXPECT_EQ(b.feature_names().size(), b.dim());
}

TEST(Nela, RangesHoldOnArbitraryText) {
  const auto b = load_nela_bundle(kData / "nela.lex");
  const auto names = b.feature_names();
  std::mt19937 rng(3);
  const std::vector<std::string> pieces{"The", "they", "WAR", "!!!", "?", "\"quoted\"", "antidisestablishment",
                                        "#tag", "@who", "42", "happy", "terrible", ".", "Cats", "😷", "rr"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (int i = 0, n = static_cast<int>(rng() % 30); i < n; ++i) text += pieces[rng() % pieces.size()] + " ";
    const auto v = nela_tweet_features(text, rng() % 3, b);
    ASSERT_EQ(v.size(), names.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      EXPECT_TRUE(std::isfinite(v[k])) << names[k];
      EXPECT_GE(v[k], 0.0) << names[k];
      if (names[k].find("rate") != std::string::npos || names[k] == "type_token_ratio") {
        EXPECT_LE(v[k], 1.0) << names[k] << " in: " << text;
      }
    }
  }
}

TEST(Nela, Syllables) {
  EXPECT_EQ(count_syllables("cat"), 1u);
  EXPECT_EQ(count_syllables("table"), 2u);
  EXPECT_EQ(count_syllables("make"), 1u);
  EXPECT_EQ(count_syllables("banana"), 3u);
}

TEST(Liwc, TokenFraction) {
  lexicon::Lexicon l("liwc");
  l.add("they", "they");
  l.add("work", "job*");
  const std::vector<corpus::TweetRecord> t{tweet("1", "they took our jobs")};
  const auto block = liwc_features(ptrs(t), l);
  ASSERT_EQ(block.dim(), 2u);
  EXPECT_DOUBLE_EQ(block.values[0], 0.25);
  EXPECT_DOUBLE_EQ(block.values[1], 0.25);
}

TEST(Liwc, EmptyTweetsAndEmptyLexicon) {
  lexicon::Lexicon l("liwc");
  l.add("a", "x");
  const std::vector<corpus::TweetRecord> t{tweet("1", ""), tweet("2", "!!")};
  EXPECT_EQ(liwc_features(ptrs(t), l).values, std::vector<double>{0.0});
  EXPECT_THROW(liwc_features(ptrs(t), lexicon::Lexicon("empty")), ValidationError);
}

TEST(Liwc, DimEqualsCategoryCount) {
  lexicon::Lexicon l("liwc");
  for (int c = 0; c < 73; ++c) l.add("cat" + std::to_string(c), "w" + std::to_string(c));
  EXPECT_EQ(liwc_features(std::span<const corpus::TweetRecord* const>{}, l).dim(), 73u);
}

TEST(Embeddings, MeanIdentityAndEmpty) {
  std::vector<float> a(768, 0.0f), b(768, 0.0f);
  a[0] = 1.0f;
  b[1] = 1.0f;
  const std::vector<std::span<const float>> two{a, b};
  const auto m = aggregate_embeddings(BlockKind::TweetEmbed, two, 768);
  EXPECT_EQ(m.values[0], 0.5);
  EXPECT_EQ(m.values[1], 0.5);
  EXPECT_EQ(m.values[2], 0.0);
  const std::vector<std::span<const float>> one{a};
  const auto single = aggregate_embeddings(BlockKind::TweetEmbed, one, 768);
  EXPECT_TRUE(std::equal(a.begin(), a.end(), single.values.begin()));
  const auto empty = aggregate_embeddings(BlockKind::ProfileEmbed, {}, 768);
  EXPECT_EQ(empty.dim(), 768u);
  std::vector<float> short_v(10, 0.0f);
  const std::vector<std::span<const float>> mixed{a, short_v};
  EXPECT_THROW(aggregate_embeddings(BlockKind::TweetEmbed, mixed, 768), DataError);
}

TEST(Embeddings, BinaryAndCsvRoundTripBitExact) {
  std::mt19937 rng(1);
  std::normal_distribution<float> nd;
  EmbeddingTable t(16, EmbeddingKey::TweetId, "stub-encoder");
  for (int k = 0; k < 20; ++k) {
    std::vector<float> v(16);
    for (auto& x : v) x = nd(rng);
    v[0] = k == 3 ? std::numeric_limits<float>::denorm_min() : v[0];
    t.add("id" + std::to_string(k), v);
  }
  oracle::TempDir dir("emb");
  for (const char* name : {"e.bin", "e.csv"}) {
    write_embeddings(dir.path() / name, t);
    const auto back = read_embeddings(dir.path() / name);
    EXPECT_EQ(back.dim(), 16u);
    EXPECT_EQ(back.key_kind(), EmbeddingKey::TweetId);
    EXPECT_EQ(back.model_id(), "stub-encoder");
    ASSERT_EQ(back.keys(), t.keys());
    for (const auto& key : t.keys()) {
      const auto x = t.get(key), y = back.get(key);
      EXPECT_EQ(std::memcmp(x.data(), y.data(), 16 * sizeof(float)), 0) << name << " " << key;
    }
  }
}

TEST(Embeddings, BinaryLayout) {
  EmbeddingTable t(2, EmbeddingKey::UserId, "m");
  t.add("ab", {1.0f, -2.0f});
  oracle::TempDir dir("emblayout");
  write_embeddings(dir.path() / "e.bin", t);
  const auto bytes = oracle::read_text(dir.path() / "e.bin");
  // magic, version, dim, key kind, count, model id, key, two floats
  ASSERT_EQ(bytes.size(), 4u + 4 + 4 + 4 + 8 + 4 + 1 + 4 + 2 + 8);
  EXPECT_EQ(bytes.substr(0, 4), "XEMB");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2);
  EXPECT_EQ(bytes.substr(28, 1), "m");
  EXPECT_EQ(bytes.substr(33, 2), "ab");
  float second = 0;
  std::memcpy(&second, bytes.data() + 39, 4);
  EXPECT_EQ(second, -2.0f);
}

TEST(Embeddings, Errors) {
  EmbeddingTable t(3, EmbeddingKey::UserId);
  t.add("a", {1, 2, 3});
  EXPECT_THROW(t.add("a", {1, 2, 3}), DataError);
  EXPECT_THROW(t.add("b", {1, 2}), DataError);
  oracle::TempDir dir("emberr");
  oracle::write_text(dir.path() / "bad.bin", "XEMBjunk");
  EXPECT_THROW(read_embeddings(dir.path() / "bad.bin"), DataError);
  oracle::write_text(dir.path() / "bad.csv", "user_id,v0,v1\na,1,2,3\n");
  EXPECT_THROW(read_embeddings(dir.path() / "bad.csv"), DataError);
  EXPECT_THROW(read_embeddings(dir.path() / "missing.bin"), DataError);
}

TEST(Media, CountsOneCellPerAxis) {
  MediaRatingMap m;
  m.add("right.example", {Bias::Right, Factuality::Mixed});
  m.add("left.example", {Bias::Left, Factuality::High});
  const std::vector<corpus::TweetRecord> t{
      tweet("1", "", {"https://www.right.example/a", "http://news.right.example/b?x=1"}),
      tweet("2", "", {"https://unrated.example/x", "https://left.example"})};
  const auto block = media_features(ptrs(t), m);
  ASSERT_EQ(block.dim(), kMediaDim);
  EXPECT_EQ(block.values[static_cast<int>(Bias::Right)], 2.0);
  EXPECT_EQ(block.values[7 + static_cast<int>(Factuality::Mixed)], 2.0);
  double bias = 0, fact = 0;
  for (int k = 0; k < 7; ++k) bias += block.values[k], fact += block.values[7 + k];
  EXPECT_EQ(bias, 3.0);
  EXPECT_EQ(fact, 3.0);
  EXPECT_EQ(media_features({}, m).values, std::vector<double>(14, 0.0));
  EXPECT_EQ(media_feature_names().size(), 14u);
}

TEST(Media, RedirectsAppliedBeforeLookup) {
  MediaRatingMap m;
  m.add("right.example", {Bias::Right, Factuality::Low});
  const RedirectMap r{{"sho.rt", "right.example"}};
  const std::vector<corpus::TweetRecord> t{tweet("1", "", {"https://sho.rt/abc"})};
  EXPECT_EQ(media_features(ptrs(t), m).values[static_cast<int>(Bias::Right)], 0.0);
  EXPECT_EQ(media_features(ptrs(t), m, r).values[static_cast<int>(Bias::Right)], 1.0);
}

TEST(Media, HostNormalisation) {
  EXPECT_EQ(url_host("HTTPS://user:pw@WWW.Example.com:8080/path?q"), "example.com");
  EXPECT_EQ(url_host("not a url"), "");
  EXPECT_EQ(parse_bias("extreme-right"), Bias::ExtremeRight);
  EXPECT_EQ(parse_factuality("Questionable-Source"), Factuality::QuestionableSource);
  EXPECT_FALSE(parse_bias("sideways"));
  const auto shipped = load_media_ratings(kData / "media_ratings.csv");
  EXPECT_GT(shipped.size(), 0u);
}

namespace {

std::vector<corpus::UserRecord> users_following(const std::vector<std::vector<std::string>>& follows) {
  std::vector<corpus::UserRecord> out;
  for (std::size_t i = 0; i < follows.size(); ++i) {
    corpus::UserRecord u;
    u.user_id = std::to_string(i);
    u.follows.insert(follows[i].begin(), follows[i].end());
    out.push_back(u);
  }
  return out;
}

FollowGroup group(const std::string& label, const std::vector<corpus::UserRecord>& users) {
  FollowGroup g{label, {}};
  for (const auto& u : users) g.users.push_back(&u);
  return g;
}

std::vector<std::string> handles(const std::string& prefix, int n) {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back(prefix + std::to_string(100 + i));
  return v;
}

}  // namespace

TEST(Following, DisjointOverlappingIdentical) {
  const auto a = users_following({handles("a", 60), handles("a", 55)});
  const auto b = users_following({handles("b", 60), handles("b", 52)});
  auto mixed = handles("b", 45);
  const auto a5 = handles("a", 5);
  mixed.insert(mixed.end(), a5.begin(), a5.end());
  const auto c = users_following({mixed, mixed});
  const std::vector<FollowGroup> disjoint{group("h", a), group("r", b)};
  EXPECT_EQ(top_followed_accounts(disjoint, 50).size(), 100u);
  const std::vector<FollowGroup> overlap{group("h", a), group("r", c)};
  EXPECT_EQ(top_followed_accounts(overlap, 50).size(), 95u);
  const std::vector<FollowGroup> same{group("h", a), group("r", a)};
  EXPECT_EQ(top_followed_accounts(same, 50).size(), 50u);
}

TEST(Following, RankingByCountThenHandle) {
  const auto u = users_following({{"z", "y", "x"}, {"z", "y"}, {"z"}});
  const std::vector<FollowGroup> g{group("g", u)};
  EXPECT_EQ(top_followed_accounts(g, 2), (std::vector<std::string>{"z", "y"}));
  const auto tie = users_following({{"b", "a", "c"}});
  const std::vector<FollowGroup> t{group("g", tie)};
  EXPECT_EQ(top_followed_accounts(t, 2), (std::vector<std::string>{"a", "b"}));
}

TEST(Following, IndicatorVector) {
  corpus::UserRecord u;
  u.follows = {"a", "c", "e", "zz"};
  const std::vector<std::string> accounts{"a", "b", "c", "d", "e"};
  EXPECT_EQ(following_features(u, accounts).values, (std::vector<double>{1, 0, 1, 0, 1}));
  corpus::UserRecord none;
  EXPECT_EQ(following_features(none, accounts).values, std::vector<double>(5, 0.0));
}

TEST(TwitterStats, DirectMapping) {
  corpus::UserRecord u;
  u.verified = true;
  const Instant as_of = default_split_instant();
  u.created_at = as_of - std::chrono::days(100);
  u.followers = 10;
  u.followings = 20;
  u.statuses = 30;
  u.favorites = 40;
  EXPECT_EQ(twitter_stats_features(u, as_of).values, (std::vector<double>{1, 100, 10, 20, 30, 40}));
  u.created_at = as_of;
  EXPECT_EQ(twitter_stats_features(u, as_of).values[1], 0.0);
  EXPECT_EQ(twitter_stats_features(u, as_of).dim(), kTwitterStatsDim);
  u.created_at = as_of + std::chrono::seconds(1);
  EXPECT_THROW(twitter_stats_features(u, as_of), ValidationError);
}

TEST(Blocks, ParseAndCanonicalOrder) {
  EXPECT_EQ(parse_block_list("all").size(), 7u);
  EXPECT_EQ(canonical_blocks({BlockKind::TweetEmbed, BlockKind::TwitterStats, BlockKind::TwitterStats}),
            (std::vector<BlockKind>{BlockKind::TwitterStats, BlockKind::TweetEmbed}));
  EXPECT_THROW(parse_block_list("twitter_stats,bogus"), ValidationError);
  for (const auto k : kAllBlocks) EXPECT_EQ(parse_block(to_string(k)), k);
}

TEST(Assemble, DimsAreAdditive) {
  const auto d = BlockDims::standard();
  const std::vector<BlockKind> r5{BlockKind::TwitterStats, BlockKind::ProfileEmbed};
  const std::vector<BlockKind> r6{BlockKind::TwitterStats, BlockKind::Following};
  const std::vector<BlockKind> r13{BlockKind::Media, BlockKind::Nela};
  EXPECT_EQ(d.total(r5), 774u);
  EXPECT_EQ(d.total(r6), 101u);
  EXPECT_EQ(d.total(r13), 99u);
}

TEST(Assemble, ConcatenatesInCanonicalOrderAndNamesUserOnMissingEmbedding) {
  corpus::UserRecord u;
  u.user_id = "42";
  u.created_at = default_split_instant() - std::chrono::days(3);
  u.follows = {"b"};
  EmbeddingTable profiles(4, EmbeddingKey::UserId);
  profiles.add("42", {1, 2, 3, 4});
  FeatureResources res;
  res.profile_embeddings = &profiles;
  UserContext ctx{&u, "42", {}, {}, default_split_instant()};
  const std::vector<std::string> accounts{"a", "b"};
  const std::vector<BlockKind> blocks{BlockKind::Following, BlockKind::TwitterStats, BlockKind::ProfileEmbed};
  const auto v = assemble_user_vector(ctx, blocks, res, accounts);
  EXPECT_EQ(v.dim(), 6u + 4 + 2);
  EXPECT_EQ(v.flatten(), (std::vector<double>{0, 3, 0, 0, 0, 0, 1, 2, 3, 4, 0, 1}));
  EXPECT_EQ(feature_names(blocks, res, accounts).size(), v.dim());

  UserContext other{&u, "43", {}, {}, default_split_instant()};
  try {
    assemble_user_vector(other, blocks, res, accounts);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("43"), std::string::npos);
  }
  FeatureResources none;
  const std::vector<BlockKind> tweet_only{BlockKind::TweetEmbed};
  EXPECT_THROW(assemble_user_vector(ctx, tweet_only, none, accounts), DataError);
}

namespace {

struct SynthFixture {
  oracle::TempDir dir{"featurize"};
  synth::SynthFiles files;
  corpus::Corpus corpus;
  corpus::CohortResult labels;
  NelaBundle nela = load_nela_bundle(kData / "nela.lex");
  lexicon::Lexicon liwc = lexicon::load_lexicon(kData / "liwc_open.lex");
  MediaRatingMap media;
  EmbeddingTable profile, tweets;

  SynthFixture() {
    synth::SynthSpec spec;
    spec.n_reference = 20;
    spec.n_hateful_low = 10;
    spec.n_hateful_high = 10;
    spec.embed_dim = 8;
    spec.seed = 5;
    files = synth::generate_corpus(spec, dir.path());
    media = load_media_ratings(files.media_ratings);
    profile = read_embeddings(files.profile_embeddings);
    tweets = read_embeddings(files.tweet_embeddings);
  }

  corpus::Corpus load(bool shuffle_lines) const {
    std::vector<std::string> lines;
    std::ifstream in(files.tweets);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    if (shuffle_lines) std::shuffle(lines.begin(), lines.end(), std::mt19937(77));
    std::string joined;
    for (const auto& l : lines) joined += l + "\n";
    std::istringstream s(joined);
    corpus::IngestReport r;
    corpus::Corpus c = corpus::ingest_tweets(s, r);
    std::ifstream users(files.users);
    corpus::ingest_users(users, c, r);
    corpus::load_follows(files.follows, c, r);
    return c;
  }

  FeatureMatrix run(const corpus::Corpus& c, std::size_t threads) const {
    const auto split = corpus::split_pre_post(c, default_split_instant());
    const auto facts = corpus::collect_user_facts(c, split, lexicon::load_lexicon(files.slurs),
                                                  lexicon::load_lexicon(kData / "covid.lex"),
                                                  corpus::load_gazetteer(kData / "gazetteer.csv"));
    const auto lab = corpus::assign_cohorts(facts, corpus::load_bot_scores(files.bot_scores), {});
    FeatureResources res{&nela, &liwc, &media, nullptr, &profile, &tweets};
    FeaturizeConfig cfg;
    cfg.seed = 3;
    cfg.threads = threads;
    return featurize(c, split, lab, res, cfg);
  }
};

}  // namespace

TEST(Featurize, EndToEndShapeAndInvariance) {
  SynthFixture fx;
  const auto a = fx.run(fx.load(false), 1);
  EXPECT_EQ(a.rows(), 40u);
  EXPECT_EQ(a.blocks.size(), 7u);
  EXPECT_EQ(a.values.size(), a.rows() * a.cols());
  EXPECT_TRUE(std::is_sorted(a.user_ids.begin(), a.user_ids.end()));
  std::size_t offset = 0;
  for (const auto& b : a.blocks) {
    EXPECT_EQ(b.offset, offset);
    offset += b.dim;
  }
  EXPECT_EQ(offset, a.cols());
  EXPECT_EQ(a.layout(BlockKind::ProfileEmbed)->dim, 8u);
  EXPECT_EQ(a.layout(BlockKind::Nela)->dim, fx.nela.dim());

  const auto b = fx.run(fx.load(true), 3);
  EXPECT_EQ(a.user_ids, b.user_ids);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.feature_names, b.feature_names);
}

TEST(Featurize, MatrixFileRoundTrip) {
  SynthFixture fx;
  const auto m = fx.run(fx.load(false), 1);
  oracle::TempDir dir("xrfm");
  save_feature_matrix(dir.path() / "f.xrfm", m);
  const auto back = load_feature_matrix(dir.path() / "f.xrfm");
  EXPECT_EQ(back.user_ids, m.user_ids);
  EXPECT_EQ(back.labels, m.labels);
  EXPECT_EQ(back.feature_names, m.feature_names);
  EXPECT_EQ(back.values, m.values);
  EXPECT_EQ(back.metadata, m.metadata);
  EXPECT_EQ(back.dims().total(std::vector<BlockKind>(kAllBlocks.begin(), kAllBlocks.end())), m.cols());
  save_feature_matrix(dir.path() / "g.xrfm", back);
  EXPECT_EQ(oracle::read_text(dir.path() / "f.xrfm"), oracle::read_text(dir.path() / "g.xrfm"));
  oracle::write_text(dir.path() / "bad.xrfm", "XRFM\x02");
  EXPECT_THROW(load_feature_matrix(dir.path() / "bad.xrfm"), DataError);
}

TEST(Featurize, ColumnsForMissingBlockIsError) {
  FeatureMatrix m;
  m.user_ids = {"a"};
  m.labels = {corpus::Cohort::Reference};
  m.blocks = {{BlockKind::TwitterStats, 0, 1}};
  m.feature_names = {"twitter_stats:x"};
  m.values = {1.0};
  const std::vector<BlockKind> want{BlockKind::Media};
  EXPECT_THROW(m.columns_for(want), ValidationError);
}
