#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "xenorisk/common/time.hpp"

namespace xenorisk::synth {

// Knobs for a synthetic corpus. Hateful users (both levels) draw their
// pre-period tokens, followings, shared domains and embeddings from
// distributions shifted by the signal knobs; with every knob at 0 the cohorts
// differ only in their post-period slur tweets, which no feature reads.
struct SynthSpec {
  std::size_t n_reference = 100;
  std::size_t n_hateful_low = 50;
  std::size_t n_hateful_high = 50;
  std::size_t n_preslur = 0;    // extra users with a pre-period slur tweet
  std::size_t n_bots = 0;       // extra reference-like users scored as bots
  std::size_t n_unlocated = 0;  // extra reference-like users without a usable location

  double lexical_signal = 0.3;  // share of hateful tokens replaced by signal words
  double follow_signal = 0.3;   // anchor follow probability is 0.1 + 0.9 * signal
  double media_signal = 0.3;    // low-factuality share of shared links is 0.15 + 0.85 * signal
  double embed_separation = 2.0;  // distance between cohort centroids, in noise standard deviations

  std::size_t tweets_min = 10;  // per user and period, uniform in [min, max]
  std::size_t tweets_max = 40;
  std::size_t embed_dim = 768;
  std::uint64_t seed = 0;
  Instant split_instant = default_split_instant();

  // Throws ValidationError when a knob is out of range.
  void validate() const;
};

// Reads a JSON object whose keys are the field names above (split_instant as
// RFC 3339); absent keys keep their defaults, unknown keys are rejected.
SynthSpec parse_synth_spec(std::string_view json);
SynthSpec load_synth_spec(const std::filesystem::path& path);
std::string synth_spec_json(const SynthSpec& spec);

struct SynthFiles {
  std::filesystem::path tweets;              // tweets.jsonl
  std::filesystem::path users;               // users.jsonl
  std::filesystem::path follows;             // follows.csv
  std::filesystem::path profile_embeddings;  // profile_embeddings.bin (keyed by user_id)
  std::filesystem::path tweet_embeddings;    // tweet_embeddings.bin (per-user aggregate, keyed by user_id)
  std::filesystem::path bot_scores;          // bot_scores.csv
  std::filesystem::path truth;               // truth.csv: user_id,label,reason
  std::filesystem::path slurs;               // slurs.lex with placeholder terms
  std::filesystem::path media_ratings;       // media_ratings.csv for the synthetic domains
  std::size_t n_users = 0;
  std::size_t n_tweets = 0;
};

// Writes every file into `dir` (created if needed). Output bytes depend only
// on the spec.
SynthFiles generate_corpus(const SynthSpec& spec, const std::filesystem::path& dir);

// Vocabulary exposed for tests.
const std::vector<std::string>& signal_words();
const std::vector<std::string>& placeholder_slurs();
const std::vector<std::string>& anchor_accounts();

}  // namespace xenorisk::synth
