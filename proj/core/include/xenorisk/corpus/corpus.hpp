#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xenorisk/common/time.hpp"

namespace xenorisk::corpus {

struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  Instant timestamp;
  std::string text;
  std::uint64_t retweet_count = 0;
  std::uint64_t like_count = 0;
  std::vector<std::string> urls;
};

struct UserRecord {
  std::string user_id;
  bool verified = false;
  Instant created_at;
  std::uint64_t followers = 0;
  std::uint64_t followings = 0;
  std::uint64_t statuses = 0;
  std::uint64_t favorites = 0;
  std::string description;
  std::string location_raw;
  std::set<std::string> follows;
};

struct RejectRecord {
  std::string source;  // file or stream label
  std::size_t line = 0;
  std::string reason;
};

struct IngestReport {
  std::size_t lines = 0;
  std::size_t accepted = 0;
  std::size_t duplicates = 0;
  std::vector<RejectRecord> rejects;
  std::vector<std::string> notes;

  double reject_fraction() const { return lines ? static_cast<double>(rejects.size()) / lines : 0.0; }
};

inline constexpr double kMaxRejectFraction = 0.10;

// Tweets and user profiles with per-user tweet indices. Built by the ingest
// functions and treated as immutable afterwards.
class Corpus {
 public:
  // Returns false (and stores nothing) when the tweet_id is already present.
  bool add_tweet(TweetRecord tweet);
  // Returns false when the user_id is already present.
  bool add_user(UserRecord user);

  const std::vector<TweetRecord>& tweets() const { return tweets_; }
  const std::vector<UserRecord>& users() const { return users_; }

  const UserRecord* find_user(std::string_view user_id) const;
  UserRecord* find_user_mut(std::string_view user_id);
  // Indices into tweets() for one user, in ingestion order.
  std::span<const std::size_t> tweets_of(std::string_view user_id) const;

  // Every user id seen in either tweets or profiles, sorted.
  std::vector<std::string> user_ids() const;

  bool empty() const { return tweets_.empty(); }

 private:
  std::vector<TweetRecord> tweets_;
  std::vector<UserRecord> users_;
  std::unordered_map<std::string, std::size_t> tweet_index_;
  std::unordered_map<std::string, std::size_t> user_index_;
  std::unordered_map<std::string, std::vector<std::size_t>> tweets_by_user_;
};

// Parses one tweets.jsonl object. Throws DataError describing the problem.
TweetRecord parse_tweet_json(std::string_view line);
UserRecord parse_user_json(std::string_view line);

// Streams JSON-object lines into `corpus`. Malformed lines are recorded in
// `report`; duplicates are dropped (first wins) and noted. Throws DataError
// once the stream is consumed if more than `max_reject_fraction` of the
// non-empty lines were rejected.
void ingest_tweets(std::istream& lines, Corpus& corpus, IngestReport& report, std::string_view source = "tweets",
                   double max_reject_fraction = kMaxRejectFraction);
void ingest_users(std::istream& lines, Corpus& corpus, IngestReport& report, std::string_view source = "users",
                  double max_reject_fraction = kMaxRejectFraction);

// Convenience wrapper returning a fresh corpus.
Corpus ingest_tweets(std::istream& lines, IngestReport& report);

// follows.csv (`user_id,followed_handle`) merged into user follow sets.
// Rows for unknown users are counted and skipped. Returns edges applied.
std::size_t load_follows(const std::filesystem::path& path, Corpus& corpus, IngestReport& report);

// Files-on-disk loader used by the CLI. `users` and `follows` are optional.
struct CorpusFiles {
  std::filesystem::path tweets;
  std::optional<std::filesystem::path> users;
  std::optional<std::filesystem::path> follows;
};
Corpus load_corpus(const CorpusFiles& files, IngestReport& report);

// Pre/post partition of tweet indices: pre = [-inf, split), post = [split, inf).
struct PeriodSplit {
  Instant split_instant;
  std::vector<std::size_t> pre;
  std::vector<std::size_t> post;

  bool is_pre(const TweetRecord& t) const { return t.timestamp < split_instant; }
};

PeriodSplit split_pre_post(const Corpus& corpus, Instant split_instant);

}  // namespace xenorisk::corpus
