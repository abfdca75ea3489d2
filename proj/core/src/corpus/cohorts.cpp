#include "xenorisk/corpus/cohorts.hpp"

#include <algorithm>
#include <charconv>

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/rng.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::corpus {

std::string_view to_string(Cohort c) {
  switch (c) {
    case Cohort::Reference: return "reference";
    case Cohort::HatefulLow: return "hateful_low";
    case Cohort::HatefulHigh: return "hateful_high";
    case Cohort::Excluded: return "excluded";
  }
  return "excluded";
}

std::string_view to_string(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::None: return "none";
    case ExclusionReason::PrePeriodSlur: return "pre_period_slur";
    case ExclusionReason::Bot: return "bot";
    case ExclusionReason::NoLocation: return "no_location";
  }
  return "none";
}

std::optional<Cohort> parse_cohort(std::string_view s) {
  for (const Cohort c : {Cohort::Reference, Cohort::HatefulLow, Cohort::HatefulHigh, Cohort::Excluded}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::optional<ExclusionReason> parse_reason(std::string_view s) {
  for (const auto r : {ExclusionReason::None, ExclusionReason::PrePeriodSlur, ExclusionReason::Bot,
                       ExclusionReason::NoLocation}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

CohortLabel label_from_counts(const SlurCounts& c) {
  CohortLabel l;
  l.slur_tweet_count = c.post;
  if (c.pre > 0) {
    l.label = Cohort::Excluded;
    l.reason = ExclusionReason::PrePeriodSlur;
  } else if (c.post >= kHighLevelMinSlurTweets) {
    l.label = Cohort::HatefulHigh;
  } else if (c.post >= kHatefulMinSlurTweets) {
    l.label = Cohort::HatefulLow;
  } else if (c.post == 1) {
    l.label = Cohort::Excluded;
  } else {
    l.label = Cohort::Reference;
  }
  return l;
}

std::map<std::string, CohortLabel> label_cohorts(const std::map<std::string, SlurCounts>& slur_hits) {
  std::map<std::string, CohortLabel> out;
  for (const auto& [user, counts] : slur_hits) out.emplace(user, label_from_counts(counts));
  return out;
}

std::map<std::string, SlurCounts> count_slur_tweets(const Corpus& corpus, const PeriodSplit& split,
                                                    const lexicon::Lexicon& slurs) {
  std::map<std::string, SlurCounts> out;
  for (const auto& id : corpus.user_ids()) out[id];
  for (const auto& t : corpus.tweets()) {
    if (lexicon::find_slurs(t.text, slurs).empty()) continue;
    auto& c = out[t.user_id];
    (split.is_pre(t) ? c.pre : c.post) += 1;
  }
  return out;
}

std::map<std::string, UserFacts> collect_user_facts(const Corpus& corpus, const PeriodSplit& split,
                                                    const lexicon::Lexicon& slurs, const lexicon::Lexicon& covid,
                                                    const Gazetteer& gazetteer) {
  std::map<std::string, UserFacts> facts;
  for (const auto& id : corpus.user_ids()) {
    UserFacts& f = facts[id];
    if (const UserRecord* u = corpus.find_user(id)) f.state = gazetteer.infer_state(u->location_raw);
  }
  for (const auto& t : corpus.tweets()) {
    UserFacts& f = facts[t.user_id];
    const auto tokens = lexicon::tokenize(t.text);
    if (!lexicon::find_slurs(tokens, slurs).empty()) (split.is_pre(t) ? f.slurs.pre : f.slurs.post) += 1;
    if (!f.covid_tweet && !covid.hits(tokens).empty()) f.covid_tweet = true;
  }
  return facts;
}

namespace {

bool reference_eligible(const UserFacts& f) {
  return f.covid_tweet && f.slurs.pre == 0 && f.slurs.post == 0 && f.state.has_value();
}

}  // namespace

std::vector<std::string> select_reference_candidates(const std::map<std::string, UserFacts>& facts, std::size_t n,
                                                     std::uint64_t seed) {
  std::vector<std::string> eligible;
  for (const auto& [id, f] : facts) {
    if (reference_eligible(f)) eligible.push_back(id);
  }
  if (n == 0 || n >= eligible.size()) return eligible;
  Rng rng(derive_seed(seed, {hash_tag("reference-sample")}));
  std::vector<std::string> chosen;
  for (const std::size_t i : sample_without_replacement(eligible.size(), n, rng)) chosen.push_back(eligible[i]);
  return chosen;
}

BotScores load_bot_scores(const std::filesystem::path& path) {
  BotScores scores;
  for (const auto& row : csv::read_file(path, {"user_id", "score"})) {
    const auto where = path.string() + " line " + std::to_string(row.line_number);
    if (row.fields.size() != 2) throw DataError(where + ": expected user_id,score");
    double v = 0;
    const std::string s(text::trim(row.fields[1]));
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw DataError(where + ": score is not a number");
    if (!(v >= 0.0 && v <= 1.0)) throw DataError(where + ": score " + s + " outside [0,1]");
    scores[row.fields[0]] = v;
  }
  return scores;
}

std::set<std::string> filter_bots(const std::set<std::string>& users, const BotScores& scores, double threshold,
                                  std::vector<std::string>* missing) {
  std::set<std::string> kept;
  for (const auto& u : users) {
    const auto it = scores.find(u);
    if (it == scores.end()) {
      if (missing) missing->push_back(u);
      kept.insert(u);
    } else {
      if (!(it->second >= 0.0 && it->second <= 1.0)) {
        throw DataError("bot score for " + u + " outside [0,1]");
      }
      if (it->second < threshold) kept.insert(u);
    }
  }
  return kept;
}

std::map<Cohort, std::size_t> CohortResult::counts() const {
  std::map<Cohort, std::size_t> c{{Cohort::Reference, 0}, {Cohort::HatefulLow, 0}, {Cohort::HatefulHigh, 0},
                                  {Cohort::Excluded, 0}};
  for (const auto& u : users) ++c[u.label.label];
  return c;
}

const LabeledUser* CohortResult::find(std::string_view user_id) const {
  const auto it = std::lower_bound(users.begin(), users.end(), user_id,
                                   [](const LabeledUser& u, std::string_view id) { return u.user_id < id; });
  return it != users.end() && it->user_id == user_id ? &*it : nullptr;
}

CohortResult assign_cohorts(const std::map<std::string, UserFacts>& facts, const BotScores& bot_scores,
                            const CohortConfig& config) {
  if (!(config.bot_threshold >= 0.0 && config.bot_threshold <= 1.0)) {
    throw ValidationError("bot threshold must lie in [0,1]");
  }
  const auto selected = select_reference_candidates(facts, config.reference_sample, config.seed);
  const std::set<std::string> selected_set(selected.begin(), selected.end());

  CohortResult result;
  std::size_t missing_scores = 0;
  for (const auto& [id, f] : facts) {
    LabeledUser u;
    u.user_id = id;
    u.slurs = f.slurs;
    u.covid_tweet = f.covid_tweet;
    u.state = f.state;
    u.label = label_from_counts(f.slurs);

    if (u.label.label != Cohort::Excluded && !f.state) {
      u.label.label = Cohort::Excluded;
      u.label.reason = ExclusionReason::NoLocation;
    } else if (u.label.label == Cohort::Reference && !selected_set.contains(id)) {
      u.label.label = Cohort::Excluded;  // no COVID tweet, or not drawn in the reference sample
    }

    if (const auto it = bot_scores.find(id); it != bot_scores.end()) {
      if (!(it->second >= 0.0 && it->second <= 1.0)) throw DataError("bot score for " + id + " outside [0,1]");
      u.bot_score = it->second;
    }
    if (u.label.label != Cohort::Excluded) {
      if (!u.bot_score) {
        ++missing_scores;
      } else if (*u.bot_score >= config.bot_threshold) {
        u.label.label = Cohort::Excluded;
        u.label.reason = ExclusionReason::Bot;
      }
    }
    result.users.push_back(std::move(u));
  }
  if (missing_scores > 0) {
    result.warnings.push_back(std::to_string(missing_scores) + " labeled user(s) have no bot score and were kept");
  }
  return result;
}

void write_labels(std::ostream& out, const CohortResult& result) {
  csv::write_row(out, {"user_id", "label", "reason", "pre_slur_tweets", "post_slur_tweets", "covid_tweet", "state",
                       "bot_score"});
  for (const auto& u : result.users) {
    csv::write_row(out, {u.user_id, std::string(to_string(u.label.label)), std::string(to_string(u.label.reason)),
                         std::to_string(u.slurs.pre), std::to_string(u.slurs.post), u.covid_tweet ? "1" : "0",
                         u.state.value_or(""), u.bot_score ? text::format_double(*u.bot_score) : ""});
  }
}

CohortResult read_labels(const std::filesystem::path& path) {
  CohortResult r;
  for (const auto& row : csv::read_file(path, {"user_id", "label", "reason", "pre_slur_tweets", "post_slur_tweets",
                                               "covid_tweet", "state", "bot_score"})) {
    const auto where = path.string() + " line " + std::to_string(row.line_number);
    if (row.fields.size() != 8) throw DataError(where + ": expected 8 columns");
    LabeledUser u;
    u.user_id = row.fields[0];
    const auto label = parse_cohort(row.fields[1]);
    const auto reason = parse_reason(row.fields[2]);
    if (!label || !reason) throw DataError(where + ": unknown label or reason");
    u.label.label = *label;
    u.label.reason = *reason;
    try {
      u.slurs.pre = std::stoul(row.fields[3]);
      u.slurs.post = std::stoul(row.fields[4]);
      if (!row.fields[7].empty()) u.bot_score = std::stod(row.fields[7]);
    } catch (const std::exception&) {
      throw DataError(where + ": bad numeric field");
    }
    u.label.slur_tweet_count = u.slurs.post;
    u.covid_tweet = row.fields[5] == "1";
    if (!row.fields[6].empty()) u.state = row.fields[6];
    r.users.push_back(std::move(u));
  }
  std::sort(r.users.begin(), r.users.end(),
            [](const LabeledUser& a, const LabeledUser& b) { return a.user_id < b.user_id; });
  return r;
}

}  // namespace xenorisk::corpus
