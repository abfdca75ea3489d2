#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "xenorisk/corpus/corpus.hpp"
#include "xenorisk/lexicon/lexicon.hpp"
#include "xenorisk/stats/mann_whitney.hpp"

namespace xenorisk::stats {

struct EngagementGroup {
  std::string label;
  std::vector<const corpus::TweetRecord*> tweets;
};

struct EngagementRow {
  std::string group;
  std::size_t n_tweets = 0;
  double mean_retweets = 0.0;
  double mean_likes = 0.0;
};

struct EngagementTest {
  std::string group_a;
  std::string group_b;
  std::string metric;  // "retweets" or "likes"
  UTestResult result;
};

struct EngagementSummary {
  std::vector<EngagementRow> rows;
  std::vector<EngagementTest> tests;
  std::vector<std::string> warnings;
};

struct EngagementOptions {
  // When set, the tweets of `partition_group` are also split into
  // "<group>:slur" and "<group>:nonslur" rows, tested against each other.
  const lexicon::Lexicon* slurs = nullptr;
  std::string partition_group = "hateful";
};

// Per-group means and pairwise U tests (every pair of non-empty groups, in
// input order, for both metrics). Empty groups are omitted with a warning.
EngagementSummary compare_engagement(const std::vector<EngagementGroup>& groups, const EngagementOptions& options = {});

// Two CSV sections: `group,n_tweets,mean_retweets,mean_likes`, a blank line,
// then `group_a,group_b,metric,u_a,u_b,z,p,p_method`.
void write_engagement_csv(std::ostream& out, const EngagementSummary& summary);

}  // namespace xenorisk::stats
