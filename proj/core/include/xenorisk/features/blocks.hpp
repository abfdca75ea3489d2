#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xenorisk/common/time.hpp"
#include "xenorisk/corpus/cohorts.hpp"
#include "xenorisk/corpus/corpus.hpp"
#include "xenorisk/lexicon/lexicon.hpp"

namespace xenorisk::features {

// Feature blocks in canonical concatenation order: content-agnostic blocks
// first, then content blocks.
enum class BlockKind { TwitterStats, ProfileEmbed, Following, Media, Nela, Liwc, TweetEmbed };

inline constexpr std::array<BlockKind, 7> kAllBlocks = {BlockKind::TwitterStats, BlockKind::ProfileEmbed,
                                                        BlockKind::Following,    BlockKind::Media,
                                                        BlockKind::Nela,         BlockKind::Liwc,
                                                        BlockKind::TweetEmbed};

inline constexpr std::size_t kTwitterStatsDim = 6;
inline constexpr std::size_t kEmbeddingDim = 768;
inline constexpr std::size_t kMediaDim = 14;

std::string_view to_string(BlockKind kind);
std::optional<BlockKind> parse_block(std::string_view name);
// Comma-separated block names ("twitter_stats,following") or "all".
std::vector<BlockKind> parse_block_list(std::string_view list);
std::size_t canonical_index(BlockKind kind);
// Sorted into canonical order, duplicates removed.
std::vector<BlockKind> canonical_blocks(std::vector<BlockKind> blocks);

struct FeatureBlock {
  BlockKind kind = BlockKind::TwitterStats;
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
};

// Declared width of every block for one run.
class BlockDims {
 public:
  BlockDims() = default;
  BlockDims(std::size_t twitter_stats, std::size_t profile_embed, std::size_t following, std::size_t media,
            std::size_t nela, std::size_t liwc, std::size_t tweet_embed);

  std::size_t operator[](BlockKind kind) const { return dims_[canonical_index(kind)]; }
  std::size_t& operator[](BlockKind kind) { return dims_[canonical_index(kind)]; }
  std::size_t total(std::span<const BlockKind> blocks) const;

  // Widths used in the published ablation table: (6, 768, 95, 14, 85, 73, 768).
  static BlockDims standard();

 private:
  std::array<std::size_t, 7> dims_{};
};

// Uniform sample without replacement of min(n, available) tweets. Candidates
// are put in (timestamp, tweet_id) order first so the result does not depend on
// input order; the sample is returned in that same canonical order.
std::vector<const corpus::TweetRecord*> sample_tweets(std::vector<const corpus::TweetRecord*> user_pre_tweets,
                                                      std::size_t n, std::uint64_t seed);

// Median of per-user tweet counts (lower median for even sizes); 0 for empty.
std::size_t median_count(std::vector<std::size_t> counts);

// [verified, account age in days, followers, followings, statuses, favorites].
// Throws ValidationError when the account was created after `as_of`.
FeatureBlock twitter_stats_features(const corpus::UserRecord& user, Instant as_of);

// Mean of equally sized vectors; empty input yields zeros of `dim`.
// Throws DataError on mixed lengths.
FeatureBlock aggregate_embeddings(BlockKind kind, std::span<const std::span<const float>> vectors, std::size_t dim);

// Per-category token fraction of each tweet, averaged over tweets. Throws
// ValidationError for an empty lexicon.
FeatureBlock liwc_features(std::span<const corpus::TweetRecord* const> tweets, const lexicon::Lexicon& lexicon);
FeatureBlock liwc_features(std::span<const lexicon::TokenStream> tweet_tokens, const lexicon::Lexicon& lexicon);

struct FollowGroup {
  std::string label;
  std::vector<const corpus::UserRecord*> users;
};

// Per group, the k handles followed by the most group members (ties by handle
// ascending); the union keeps first-seen order across groups.
std::vector<std::string> top_followed_accounts(std::span<const FollowGroup> groups, std::size_t k = 50);

// Binary indicator over `accounts`.
FeatureBlock following_features(const corpus::UserRecord& user, std::span<const std::string> accounts);

// A user's blocks concatenated in canonical order.
struct UserFeatureVector {
  std::string user_id;
  corpus::CohortLabel label;
  std::vector<FeatureBlock> blocks;

  std::size_t dim() const;
  std::vector<double> flatten() const;
};

}  // namespace xenorisk::features
