#include "xenorisk/corpus/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::corpus {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) throw DataError(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  // Ids are opaque; numeric ids are accepted and rendered as decimal strings.
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw DataError(std::string("field '") + key + "' must be a string");
}

std::uint64_t count_field(const json& obj, const char* key, bool required) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) throw DataError(std::string("missing field '") + key + "'");
    return 0;
  }
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer()) {
    const auto v = it->get<std::int64_t>();
    if (v < 0) throw DataError(std::string("field '") + key + "' is negative");
    return static_cast<std::uint64_t>(v);
  }
  throw DataError(std::string("field '") + key + "' must be a non-negative integer");
}

Instant time_field(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string()) throw DataError(std::string("field '") + key + "' must be an RFC 3339 string");
  const auto t = parse_rfc3339(v.get<std::string>());
  if (!t) throw DataError(std::string("field '") + key + "' is not a valid RFC 3339 timestamp");
  return *t;
}

json parse_object(std::string_view line) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded()) throw DataError("not valid JSON");
  if (!obj.is_object()) throw DataError("not a JSON object");
  return obj;
}

template <typename Parse, typename Add>
void ingest_lines(std::istream& in, IngestReport& report, std::string_view source, double max_fraction,
                  Parse parse, Add add) {
  std::string line;
  std::size_t n = 0;
  std::size_t local_lines = 0, local_rejects = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    ++local_lines;
    ++report.lines;
    try {
      if (add(parse(line))) {
        ++report.accepted;
      } else {
        ++report.duplicates;
      }
    } catch (const DataError& e) {
      ++local_rejects;
      report.rejects.push_back({std::string(source), n, e.what()});
    }
  }
  if (local_lines > 0 && static_cast<double>(local_rejects) > max_fraction * static_cast<double>(local_lines)) {
    throw DataError(std::string(source) + ": " + std::to_string(local_rejects) + " of " +
                    std::to_string(local_lines) + " lines rejected (limit " +
                    std::to_string(static_cast<int>(max_fraction * 100)) + "%)");
  }
}

}  // namespace

bool Corpus::add_tweet(TweetRecord tweet) {
  if (tweet_index_.contains(tweet.tweet_id)) return false;
  const std::size_t idx = tweets_.size();
  tweet_index_.emplace(tweet.tweet_id, idx);
  tweets_by_user_[tweet.user_id].push_back(idx);
  tweets_.push_back(std::move(tweet));
  return true;
}

bool Corpus::add_user(UserRecord user) {
  if (user_index_.contains(user.user_id)) return false;
  user_index_.emplace(user.user_id, users_.size());
  users_.push_back(std::move(user));
  return true;
}

const UserRecord* Corpus::find_user(std::string_view id) const {
  const auto it = user_index_.find(std::string(id));
  return it == user_index_.end() ? nullptr : &users_[it->second];
}

UserRecord* Corpus::find_user_mut(std::string_view id) {
  const auto it = user_index_.find(std::string(id));
  return it == user_index_.end() ? nullptr : &users_[it->second];
}

std::span<const std::size_t> Corpus::tweets_of(std::string_view id) const {
  const auto it = tweets_by_user_.find(std::string(id));
  if (it == tweets_by_user_.end()) return {};
  return it->second;
}

std::vector<std::string> Corpus::user_ids() const {
  std::vector<std::string> ids;
  ids.reserve(user_index_.size() + tweets_by_user_.size());
  for (const auto& u : users_) ids.push_back(u.user_id);
  for (const auto& [id, _] : tweets_by_user_) {
    if (!user_index_.contains(id)) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

TweetRecord parse_tweet_json(std::string_view line) {
  const json obj = parse_object(line);
  TweetRecord t;
  t.tweet_id = require_string(obj, "tweet_id");
  t.user_id = require_string(obj, "user_id");
  if (t.tweet_id.empty() || t.user_id.empty()) throw DataError("empty tweet_id or user_id");
  t.timestamp = time_field(obj, "timestamp");
  const json& text = require(obj, "text");
  if (!text.is_string()) throw DataError("field 'text' must be a string");
  t.text = text.get<std::string>();
  t.retweet_count = count_field(obj, "retweet_count", false);
  t.like_count = count_field(obj, "like_count", false);
  if (const auto it = obj.find("urls"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw DataError("field 'urls' must be an array");
    for (const auto& u : *it) {
      if (!u.is_string()) throw DataError("field 'urls' must contain strings");
      t.urls.push_back(u.get<std::string>());
    }
  }
  return t;
}

UserRecord parse_user_json(std::string_view line) {
  const json obj = parse_object(line);
  UserRecord u;
  u.user_id = require_string(obj, "user_id");
  if (u.user_id.empty()) throw DataError("empty user_id");
  if (const auto it = obj.find("verified"); it != obj.end() && !it->is_null()) {
    if (!it->is_boolean()) throw DataError("field 'verified' must be a boolean");
    u.verified = it->get<bool>();
  }
  u.created_at = time_field(obj, "created_at");
  u.followers = count_field(obj, "followers", false);
  u.followings = count_field(obj, "followings", false);
  u.statuses = count_field(obj, "statuses", false);
  u.favorites = count_field(obj, "favorites", false);
  if (const auto it = obj.find("description"); it != obj.end() && it->is_string()) u.description = it->get<std::string>();
  if (const auto it = obj.find("location"); it != obj.end() && it->is_string()) u.location_raw = it->get<std::string>();
  if (const auto it = obj.find("follows"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw DataError("field 'follows' must be an array");
    for (const auto& h : *it) {
      if (!h.is_string()) throw DataError("field 'follows' must contain strings");
      u.follows.insert(h.get<std::string>());
    }
  }
  return u;
}

void ingest_tweets(std::istream& lines, Corpus& corpus, IngestReport& report, std::string_view source,
                   double max_reject_fraction) {
  const std::size_t dup_before = report.duplicates;
  ingest_lines(lines, report, source, max_reject_fraction, parse_tweet_json,
               [&](TweetRecord t) { return corpus.add_tweet(std::move(t)); });
  if (const auto d = report.duplicates - dup_before; d > 0) {
    report.notes.push_back(std::string(source) + ": " + std::to_string(d) + " duplicate tweet_id(s) dropped (first wins)");
  }
}

void ingest_users(std::istream& lines, Corpus& corpus, IngestReport& report, std::string_view source,
                  double max_reject_fraction) {
  const std::size_t dup_before = report.duplicates;
  ingest_lines(lines, report, source, max_reject_fraction, parse_user_json,
               [&](UserRecord u) { return corpus.add_user(std::move(u)); });
  if (const auto d = report.duplicates - dup_before; d > 0) {
    report.notes.push_back(std::string(source) + ": " + std::to_string(d) + " duplicate user_id(s) dropped (first wins)");
  }
}

Corpus ingest_tweets(std::istream& lines, IngestReport& report) {
  Corpus c;
  ingest_tweets(lines, c, report);
  return c;
}

std::size_t load_follows(const std::filesystem::path& path, Corpus& corpus, IngestReport& report) {
  std::size_t applied = 0, unknown = 0;
  for (const auto& row : csv::read_file(path, {"user_id", "followed_handle"})) {
    if (row.fields.size() != 2 || row.fields[0].empty() || row.fields[1].empty()) {
      report.rejects.push_back({path.filename().string(), row.line_number, "expected user_id,followed_handle"});
      continue;
    }
    if (UserRecord* u = corpus.find_user_mut(row.fields[0])) {
      if (u->follows.insert(row.fields[1]).second) ++applied;
    } else {
      ++unknown;
    }
  }
  if (unknown > 0) {
    report.notes.push_back(path.filename().string() + ": " + std::to_string(unknown) +
                           " follow edge(s) for users without a profile skipped");
  }
  return applied;
}

Corpus load_corpus(const CorpusFiles& files, IngestReport& report) {
  Corpus corpus;
  if (files.users) {
    std::ifstream in(*files.users);
    if (!in) throw DataError("cannot open users file: " + files.users->string());
    ingest_users(in, corpus, report, files.users->filename().string());
  }
  {
    std::ifstream in(files.tweets);
    if (!in) throw DataError("cannot open tweets file: " + files.tweets.string());
    ingest_tweets(in, corpus, report, files.tweets.filename().string());
  }
  if (files.follows) load_follows(*files.follows, corpus, report);
  return corpus;
}

PeriodSplit split_pre_post(const Corpus& corpus, Instant split_instant) {
  PeriodSplit s;
  s.split_instant = split_instant;
  for (std::size_t i = 0; i < corpus.tweets().size(); ++i) {
    (s.is_pre(corpus.tweets()[i]) ? s.pre : s.post).push_back(i);
  }
  return s;
}

}  // namespace xenorisk::corpus
