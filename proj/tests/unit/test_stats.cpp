#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/lexicon/lexicon.hpp"
#include "xenorisk/stats/bootstrap.hpp"
#include "xenorisk/stats/engagement.hpp"
#include "xenorisk/stats/mann_whitney.hpp"

using namespace xenorisk;
using namespace xenorisk::stats;

TEST(Bootstrap, ConstantDataHasZeroWidth) {
  const std::vector<ActivityCounts> users(25, {10, 20});
  const auto r = bootstrap_percent_increase(users, {});
  EXPECT_EQ(r.mean, 100.0);
  EXPECT_EQ(r.ci_low, 100.0);
  EXPECT_EQ(r.ci_high, 100.0);
  EXPECT_EQ(r.n_resamples, 1000u);
}

TEST(Bootstrap, TwoUsersMatchExhaustiveResamples) {
  const std::vector<ActivityCounts> users{{10, 20}, {10, 5}};
  BootstrapOptions o;
  o.n_resamples = 20000;
  o.keep_distribution = true;
  const auto r = bootstrap_percent_increase(users, o);
  EXPECT_EQ(r.mean, 25.0);
  // the four equally likely resamples have means {100, 25, 25, -50}
  const auto exact = oracle::all_resample_means({100.0, -50.0});
  ASSERT_EQ(exact, (std::vector<double>{-50, 25, 25, 100}));
  std::map<double, double> freq;
  for (const double m : r.distribution) freq[m] += 1.0 / static_cast<double>(r.distribution.size());
  ASSERT_EQ(freq.size(), 3u);
  EXPECT_NEAR(freq[-50], 0.25, 0.015);
  EXPECT_NEAR(freq[25], 0.50, 0.015);
  EXPECT_NEAR(freq[100], 0.25, 0.015);
}

TEST(Bootstrap, SmallSampleDistributionMatchesEnumeration) {
  const std::vector<double> values{3, -1, 7, 2};
  BootstrapOptions o;
  o.n_resamples = 40000;
  o.keep_distribution = true;
  o.seed = 12;
  const auto r = bootstrap_mean(values, o);
  const auto exact = oracle::all_resample_means(values);
  std::vector<double> got = r.distribution;
  std::sort(got.begin(), got.end());
  for (const double q : {0.025, 0.1, 0.25, 0.5, 0.75, 0.9, 0.975}) {
    const auto at = [&](const std::vector<double>& v) { return v[static_cast<std::size_t>(q * (v.size() - 1))]; };
    EXPECT_NEAR(at(got), at(exact), 0.26) << q;
  }
}

TEST(Bootstrap, SeedDeterminismAndPrefixStability) {
  std::mt19937 rng(1);
  std::vector<double> v(60);
  for (auto& x : v) x = std::uniform_real_distribution<double>(-50, 150)(rng);
  BootstrapOptions o;
  o.seed = 99;
  o.keep_distribution = true;
  const auto a = bootstrap_mean(v, o);
  const auto b = bootstrap_mean(v, o);
  EXPECT_EQ(a.ci_low, b.ci_low);
  EXPECT_EQ(a.ci_high, b.ci_high);
  o.threads = 4;
  const auto c = bootstrap_mean(v, o);
  EXPECT_EQ(a.distribution, c.distribution);
  o.n_resamples = 3000;
  const auto d = bootstrap_mean(v, o);
  EXPECT_EQ(d.mean, a.mean);
  EXPECT_TRUE(std::equal(a.distribution.begin(), a.distribution.end(), d.distribution.begin()));
  EXPECT_LE(a.ci_low, a.mean);
  EXPECT_GE(a.ci_high, a.mean);
}

TEST(Bootstrap, TranslationEquivariance) {
  std::mt19937 rng(2);
  std::vector<double> v(40), shifted(40);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::uniform_int_distribution<int>(-100, 300)(rng);
    shifted[i] = v[i] + 17.0;
  }
  BootstrapOptions o;
  o.seed = 5;
  const auto a = bootstrap_mean(v, o);
  const auto b = bootstrap_mean(shifted, o);
  EXPECT_NEAR(b.mean, a.mean + 17.0, 1e-9);
  EXPECT_NEAR(b.ci_low, a.ci_low + 17.0, 1e-9);
  EXPECT_NEAR(b.ci_high, a.ci_high + 17.0, 1e-9);
}

TEST(Bootstrap, ExclusionsAndErrors) {
  const std::vector<ActivityCounts> users{{0, 5}, {4, 8}, {0, 0}};
  const auto r = bootstrap_percent_increase(users, {});
  EXPECT_EQ(r.n_excluded, 2u);
  EXPECT_EQ(r.n_users, 1u);
  EXPECT_EQ(r.mean, 100.0);
  const std::vector<ActivityCounts> none{{0, 5}};
  EXPECT_THROW(bootstrap_percent_increase(none, {}), DataError);
  EXPECT_THROW(bootstrap_mean({}, {}), ValidationError);
  BootstrapOptions zero;
  zero.n_resamples = 0;
  const std::vector<double> one{1.0};
  EXPECT_THROW(bootstrap_mean(one, zero), ValidationError);
}

TEST(Bootstrap, QuantileInterpolation) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_EQ(quantile_sorted(v, 0.0), 1.0);
  EXPECT_EQ(quantile_sorted(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
}

TEST(MannWhitney, CompleteSeparation) {
  const std::vector<double> a{1, 2}, b{3, 4};
  const auto r = mann_whitney_u(a, b);
  EXPECT_EQ(r.u_a, 0.0);
  EXPECT_EQ(r.u_b, 4.0);
  EXPECT_LT(r.z, 0.0);
}

TEST(MannWhitney, IdenticalSamples) {
  const std::vector<double> a{1, 5, 2, 8, 3}, b{1, 5, 2, 8, 3};
  EXPECT_NEAR(mann_whitney_u(a, b).p, 1.0, 1e-12);
  std::vector<double> big(40);
  std::iota(big.begin(), big.end(), 0.0);
  EXPECT_GT(mann_whitney_u(big, big).p, 0.99);
}

TEST(MannWhitney, AllTiedGivesUnitP) {
  const std::vector<double> a{2, 2, 2}, b{2, 2};
  const auto r = mann_whitney_u(a, b);
  EXPECT_EQ(r.z, 0.0);
  EXPECT_EQ(r.p, 1.0);
  EXPECT_EQ(r.u_a + r.u_b, 6.0);
}

TEST(MannWhitney, MatchesPairwiseUAndPermutationP) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t na = 1 + rng() % 6, nb = 1 + rng() % 6;
    std::vector<double> a(na), b(nb);
    for (auto& x : a) x = static_cast<double>(rng() % 8);
    for (auto& x : b) x = static_cast<double>(rng() % 8);
    const auto r = mann_whitney_u(a, b);
    EXPECT_EQ(r.u_a, oracle::pairwise_u(a, b));
    EXPECT_EQ(r.u_a + r.u_b, static_cast<double>(na * nb));
    EXPECT_EQ(r.method, PMethod::Exact);
    EXPECT_NEAR(r.p, oracle::permutation_p(a, b), 1e-12);
    EXPECT_GE(r.p_normal, 0.0);
    EXPECT_LE(r.p_normal, 1.0);
  }
}

TEST(MannWhitney, LargeSamplesUseNormalApproximation) {
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  std::vector<double> a(200), b(300);
  for (auto& x : a) x = nd(rng);
  for (auto& x : b) x = nd(rng) + 0.5;
  const auto r = mann_whitney_u(a, b);
  EXPECT_EQ(r.method, PMethod::Normal);
  EXPECT_EQ(r.p, r.p_normal);
  EXPECT_LT(r.p, 1e-4);
  EXPECT_LT(r.z, 0);
  // z from the tie-free variance with continuity correction
  const double mu = 200.0 * 300 / 2, sd = std::sqrt(200.0 * 300 * 501 / 12);
  EXPECT_NEAR(r.z, (r.u_a - mu + 0.5) / sd, 1e-9);
}

TEST(MannWhitney, Errors) {
  const std::vector<double> empty, one{1.0}, nan{std::nan("")};
  EXPECT_THROW(mann_whitney_u(empty, one), ValidationError);
  EXPECT_THROW(mann_whitney_u(one, nan), ValidationError);
  EXPECT_NEAR(normal_sf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(normal_sf(1.959963984540054), 0.025, 1e-12);
}

namespace {

std::vector<corpus::TweetRecord> tweets_with(const std::vector<std::pair<int, int>>& engagement,
                                             const std::string& text = "x") {
  std::vector<corpus::TweetRecord> out;
  for (const auto& [rt, likes] : engagement) {
    corpus::TweetRecord t;
    t.tweet_id = std::to_string(out.size());
    t.retweet_count = rt;
    t.like_count = likes;
    t.text = text;
    out.push_back(t);
  }
  return out;
}

EngagementGroup group(const std::string& label, const std::vector<corpus::TweetRecord>& t) {
  EngagementGroup g{label, {}};
  for (const auto& x : t) g.tweets.push_back(&x);
  return g;
}

}  // namespace

TEST(Engagement, MeansAndOmittedEmptyGroup) {
  const auto a = tweets_with({{1, 0}, {3, 4}});
  const std::vector<corpus::TweetRecord> none;
  const auto s = compare_engagement({group("a", a), group("empty", none)});
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].mean_retweets, 2.0);
  EXPECT_EQ(s.rows[0].mean_likes, 2.0);
  EXPECT_EQ(s.warnings.size(), 1u);
  EXPECT_TRUE(s.tests.empty());
}

TEST(Engagement, IdenticalGroupsHaveUnitP) {
  const auto a = tweets_with({{1, 2}, {5, 1}, {0, 0}, {7, 3}});
  const auto s = compare_engagement({group("a", a), group("b", a)});
  ASSERT_EQ(s.tests.size(), 2u);
  for (const auto& t : s.tests) EXPECT_NEAR(t.result.p, 1.0, 1e-12);
}

TEST(Engagement, ShiftDirectionAndSlurPartition) {
  std::mt19937 rng(8);
  std::vector<std::pair<int, int>> lo, hi;
  for (int i = 0; i < 300; ++i) {
    lo.emplace_back(std::poisson_distribution<int>(1.0)(rng), std::poisson_distribution<int>(4.0)(rng));
    hi.emplace_back(std::poisson_distribution<int>(3.0)(rng), std::poisson_distribution<int>(9.0)(rng));
  }
  auto hateful = tweets_with(hi, "plain");
  for (std::size_t i = 0; i < hateful.size(); i += 3) hateful[i].text = "xslura again";
  const auto reference = tweets_with(lo);
  lexicon::Lexicon slurs("slurs");
  slurs.add("slur", "xslura");
  EngagementOptions o;
  o.slurs = &slurs;
  const auto s = compare_engagement({group("hateful", hateful), group("reference", reference)}, o);
  ASSERT_EQ(s.rows.size(), 4u);
  EXPECT_GT(s.rows[0].mean_retweets, s.rows[1].mean_retweets);
  EXPECT_GT(s.rows[0].mean_likes, s.rows[1].mean_likes);
  EXPECT_EQ(s.rows[2].group, "hateful:slur");
  EXPECT_EQ(s.rows[2].n_tweets, 100u);
  EXPECT_EQ(s.rows[3].n_tweets, 200u);
  ASSERT_EQ(s.tests.size(), 4u);
  EXPECT_GT(s.tests[0].result.z, 0);
  EXPECT_LT(s.tests[0].result.p, 1e-6);
  std::ostringstream out;
  write_engagement_csv(out, s);
  EXPECT_NE(out.str().find("group_a,group_b,metric,u_a,u_b,z,p,p_method"), std::string::npos);
}
