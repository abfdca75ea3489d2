#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xenorisk/common/time.hpp"
#include "xenorisk/corpus/corpus.hpp"
#include "xenorisk/corpus/gazetteer.hpp"
#include "xenorisk/lexicon/lexicon.hpp"

namespace xenorisk::corpus {

enum class Cohort { Reference, HatefulLow, HatefulHigh, Excluded };
enum class ExclusionReason { None, PrePeriodSlur, Bot, NoLocation };

std::string_view to_string(Cohort c);
std::string_view to_string(ExclusionReason r);
std::optional<Cohort> parse_cohort(std::string_view s);
std::optional<ExclusionReason> parse_reason(std::string_view s);

inline bool is_hateful(Cohort c) { return c == Cohort::HatefulLow || c == Cohort::HatefulHigh; }

struct CohortLabel {
  Cohort label = Cohort::Excluded;
  ExclusionReason reason = ExclusionReason::None;
  std::size_t slur_tweet_count = 0;  // post-period tweets with at least one slur
  bool operator==(const CohortLabel&) const = default;
};

// Tweets containing at least one slur, per period.
struct SlurCounts {
  std::size_t pre = 0;
  std::size_t post = 0;
};

inline constexpr std::size_t kHatefulMinSlurTweets = 2;
inline constexpr std::size_t kHighLevelMinSlurTweets = 4;

// Slur-count rules alone:
//   pre > 0           -> Excluded(PrePeriodSlur)
//   post in {2, 3}    -> HatefulLow
//   post >= 4         -> HatefulHigh
//   post == 1         -> Excluded(None)
//   pre == post == 0  -> Reference (eligible; refined later)
CohortLabel label_from_counts(const SlurCounts& counts);
std::map<std::string, CohortLabel> label_cohorts(const std::map<std::string, SlurCounts>& slur_hits);

std::map<std::string, SlurCounts> count_slur_tweets(const Corpus& corpus, const PeriodSplit& split,
                                                    const lexicon::Lexicon& slurs);

// Everything the labeling rules need to know about one user.
struct UserFacts {
  SlurCounts slurs;
  bool covid_tweet = false;
  std::optional<std::string> state;
};

std::map<std::string, UserFacts> collect_user_facts(const Corpus& corpus, const PeriodSplit& split,
                                                    const lexicon::Lexicon& slurs, const lexicon::Lexicon& covid,
                                                    const Gazetteer& gazetteer);

// Users with a COVID-keyword tweet, no slur tweet in either period and an
// inferred state; a seeded uniform sample of min(n, eligible) is returned
// sorted. n == 0 keeps every eligible user.
std::vector<std::string> select_reference_candidates(const std::map<std::string, UserFacts>& facts, std::size_t n,
                                                     std::uint64_t seed);

using BotScores = std::map<std::string, double>;

// bot_scores.csv: `user_id,score`. Scores outside [0, 1] throw DataError.
BotScores load_bot_scores(const std::filesystem::path& path);

// Drops users whose score is >= threshold. Users without a score are kept and
// reported through `missing`.
std::set<std::string> filter_bots(const std::set<std::string>& users, const BotScores& scores, double threshold = 0.5,
                                  std::vector<std::string>* missing = nullptr);

struct CohortConfig {
  Instant split_instant = default_split_instant();
  std::size_t reference_sample = 0;  // 0 = all eligible
  std::uint64_t seed = 0;
  double bot_threshold = 0.5;
};

struct LabeledUser {
  std::string user_id;
  CohortLabel label;
  SlurCounts slurs;
  bool covid_tweet = false;
  std::optional<std::string> state;
  std::optional<double> bot_score;
};

struct CohortResult {
  std::vector<LabeledUser> users;  // sorted by user_id
  std::vector<std::string> warnings;

  std::map<Cohort, std::size_t> counts() const;
  const LabeledUser* find(std::string_view user_id) const;
};

// Full rule chain: slur counts, location refinement, reference selection,
// then bot filtering last. Every user in `facts` receives exactly one label.
CohortResult assign_cohorts(const std::map<std::string, UserFacts>& facts, const BotScores& bot_scores,
                            const CohortConfig& config);

// labels.csv round trip.
void write_labels(std::ostream& out, const CohortResult& result);
CohortResult read_labels(const std::filesystem::path& path);

}  // namespace xenorisk::corpus
