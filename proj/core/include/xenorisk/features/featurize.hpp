#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xenorisk/common/time.hpp"
#include "xenorisk/corpus/cohorts.hpp"
#include "xenorisk/corpus/corpus.hpp"
#include "xenorisk/features/blocks.hpp"
#include "xenorisk/features/embeddings.hpp"
#include "xenorisk/features/feature_matrix.hpp"
#include "xenorisk/features/media.hpp"
#include "xenorisk/features/nela.hpp"
#include "xenorisk/lexicon/lexicon.hpp"

namespace xenorisk::features {

// Optional inputs; a block whose resource is absent cannot be requested.
struct FeatureResources {
  const NelaBundle* nela = nullptr;
  const lexicon::Lexicon* liwc = nullptr;
  const MediaRatingMap* media_ratings = nullptr;
  const RedirectMap* redirects = nullptr;
  const EmbeddingTable* profile_embeddings = nullptr;  // keyed by user_id
  const EmbeddingTable* tweet_embeddings = nullptr;    // keyed by tweet_id or user_id
};

struct FeaturizeConfig {
  std::vector<BlockKind> blocks{kAllBlocks.begin(), kAllBlocks.end()};
  std::size_t tweets_per_user = 0;  // 0 = median pre-period count over featurized users
  std::size_t follow_top_k = 50;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

// Per-user inputs for assembling one row.
struct UserContext {
  const corpus::UserRecord* user = nullptr;
  std::string user_id;
  corpus::CohortLabel label;
  std::vector<const corpus::TweetRecord*> sampled_tweets;  // pre-period sample
  Instant as_of;
};

// Builds the requested blocks in canonical order. Throws DataError naming the
// user when a profile or embedding it needs is missing.
UserFeatureVector assemble_user_vector(const UserContext& ctx, std::span<const BlockKind> blocks,
                                       const FeatureResources& resources, std::span<const std::string> accounts);

// Column names for the requested blocks, matching assemble_user_vector.
std::vector<std::string> feature_names(std::span<const BlockKind> blocks, const FeatureResources& resources,
                                       std::span<const std::string> accounts);

// One row per non-excluded labeled user, in user_id order. Rows are computed
// in parallel; the output does not depend on the thread count.
FeatureMatrix featurize(const corpus::Corpus& corpus, const corpus::PeriodSplit& split,
                        const corpus::CohortResult& labels, const FeatureResources& resources,
                        const FeaturizeConfig& config);

}  // namespace xenorisk::features
