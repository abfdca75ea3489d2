#include "xenorisk/stats/engagement.hpp"

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::stats {
namespace {

std::vector<double> metric_values(const EngagementGroup& g, bool likes) {
  std::vector<double> v;
  v.reserve(g.tweets.size());
  for (const auto* t : g.tweets) v.push_back(static_cast<double>(likes ? t->like_count : t->retweet_count));
  return v;
}

EngagementRow summarize(const EngagementGroup& g) {
  EngagementRow row;
  row.group = g.label;
  row.n_tweets = g.tweets.size();
  double rt = 0.0;
  double lk = 0.0;
  for (const auto* t : g.tweets) {
    rt += static_cast<double>(t->retweet_count);
    lk += static_cast<double>(t->like_count);
  }
  row.mean_retweets = rt / static_cast<double>(row.n_tweets);
  row.mean_likes = lk / static_cast<double>(row.n_tweets);
  return row;
}

void add_tests(EngagementSummary& s, const EngagementGroup& a, const EngagementGroup& b) {
  for (const bool likes : {false, true}) {
    const auto va = metric_values(a, likes);
    const auto vb = metric_values(b, likes);
    s.tests.push_back({a.label, b.label, likes ? "likes" : "retweets", mann_whitney_u(va, vb)});
  }
}

}  // namespace

EngagementSummary compare_engagement(const std::vector<EngagementGroup>& groups, const EngagementOptions& options) {
  EngagementSummary s;
  std::vector<const EngagementGroup*> present;
  for (const auto& g : groups) {
    if (g.tweets.empty()) {
      s.warnings.push_back("group '" + g.label + "' has no tweets; row omitted");
      continue;
    }
    present.push_back(&g);
    s.rows.push_back(summarize(g));
  }
  for (std::size_t i = 0; i < present.size(); ++i) {
    for (std::size_t j = i + 1; j < present.size(); ++j) add_tests(s, *present[i], *present[j]);
  }

  if (options.slurs) {
    for (const auto* g : present) {
      if (g->label != options.partition_group) continue;
      EngagementGroup with{g->label + ":slur", {}};
      EngagementGroup without{g->label + ":nonslur", {}};
      for (const auto* t : g->tweets) {
        (lexicon::find_slurs(t->text, *options.slurs).empty() ? without : with).tweets.push_back(t);
      }
      for (const auto* part : {&with, &without}) {
        if (part->tweets.empty()) {
          s.warnings.push_back("group '" + part->label + "' has no tweets; row omitted");
        } else {
          s.rows.push_back(summarize(*part));
        }
      }
      if (!with.tweets.empty() && !without.tweets.empty()) add_tests(s, with, without);
    }
  }
  return s;
}

void write_engagement_csv(std::ostream& out, const EngagementSummary& summary) {
  using text::format_double;
  csv::write_row(out, {"group", "n_tweets", "mean_retweets", "mean_likes"});
  for (const auto& r : summary.rows) {
    csv::write_row(out, {r.group, std::to_string(r.n_tweets), format_double(r.mean_retweets),
                         format_double(r.mean_likes)});
  }
  out << '\n';
  csv::write_row(out, {"group_a", "group_b", "metric", "u_a", "u_b", "z", "p", "p_method"});
  for (const auto& t : summary.tests) {
    csv::write_row(out, {t.group_a, t.group_b, t.metric, format_double(t.result.u_a), format_double(t.result.u_b),
                         format_double(t.result.z), format_double(t.result.p), std::string(to_string(t.result.method))});
  }
}

}  // namespace xenorisk::stats
