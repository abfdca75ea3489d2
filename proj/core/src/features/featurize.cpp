#include "xenorisk/features/featurize.hpp"

#include <algorithm>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/parallel.hpp"
#include "xenorisk/common/rng.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::features {
namespace {

const corpus::UserRecord& require_profile(const UserContext& ctx, BlockKind kind) {
  if (!ctx.user) {
    throw DataError("user " + ctx.user_id + " has no profile record (needed for " + std::string(to_string(kind)) + ")");
  }
  return *ctx.user;
}

FeatureBlock profile_embedding(const UserContext& ctx, const FeatureResources& r) {
  if (!r.profile_embeddings) throw DataError("profile embeddings are required for the profile_embed block");
  const auto v = r.profile_embeddings->get(ctx.user_id);
  if (v.empty()) throw DataError("no profile embedding for user " + ctx.user_id);
  return {BlockKind::ProfileEmbed, std::vector<double>(v.begin(), v.end())};
}

FeatureBlock tweet_embedding(const UserContext& ctx, const FeatureResources& r) {
  const EmbeddingTable* table = r.tweet_embeddings;
  if (!table) throw DataError("tweet embeddings are required for the tweet_embed block");
  if (table->key_kind() == EmbeddingKey::UserId) {
    const auto v = table->get(ctx.user_id);
    if (v.empty()) throw DataError("no tweet embedding for user " + ctx.user_id);
    return {BlockKind::TweetEmbed, std::vector<double>(v.begin(), v.end())};
  }
  std::vector<std::span<const float>> vectors;
  vectors.reserve(ctx.sampled_tweets.size());
  for (const auto* t : ctx.sampled_tweets) {
    const auto v = table->get(t->tweet_id);
    if (v.empty()) throw DataError("no tweet embedding for tweet " + t->tweet_id + " of user " + ctx.user_id);
    vectors.push_back(v);
  }
  return aggregate_embeddings(BlockKind::TweetEmbed, vectors, table->dim());
}

std::size_t block_dim(BlockKind kind, const FeatureResources& r, std::size_t accounts) {
  switch (kind) {
    case BlockKind::TwitterStats: return kTwitterStatsDim;
    case BlockKind::ProfileEmbed: return r.profile_embeddings ? r.profile_embeddings->dim() : 0;
    case BlockKind::Following: return accounts;
    case BlockKind::Media: return kMediaDim;
    case BlockKind::Nela: return r.nela ? r.nela->dim() : 0;
    case BlockKind::Liwc: return r.liwc ? r.liwc->category_count() : 0;
    case BlockKind::TweetEmbed: return r.tweet_embeddings ? r.tweet_embeddings->dim() : 0;
  }
  return 0;
}

void check_resources(std::span<const BlockKind> blocks, const FeatureResources& r) {
  for (const BlockKind k : blocks) {
    const bool ok = (k != BlockKind::Nela || r.nela) && (k != BlockKind::Liwc || r.liwc) &&
                    (k != BlockKind::Media || r.media_ratings) &&
                    (k != BlockKind::ProfileEmbed || r.profile_embeddings) &&
                    (k != BlockKind::TweetEmbed || r.tweet_embeddings);
    if (!ok) throw DataError("missing input for the " + std::string(to_string(k)) + " block");
  }
}

}  // namespace

UserFeatureVector assemble_user_vector(const UserContext& ctx, std::span<const BlockKind> blocks,
                                       const FeatureResources& resources, std::span<const std::string> accounts) {
  UserFeatureVector out;
  out.user_id = ctx.user_id;
  out.label = ctx.label;
  static const RedirectMap kNoRedirects;
  for (const BlockKind kind : canonical_blocks({blocks.begin(), blocks.end()})) {
    switch (kind) {
      case BlockKind::TwitterStats:
        out.blocks.push_back(twitter_stats_features(require_profile(ctx, kind), ctx.as_of));
        break;
      case BlockKind::ProfileEmbed:
        out.blocks.push_back(profile_embedding(ctx, resources));
        break;
      case BlockKind::Following:
        out.blocks.push_back(following_features(require_profile(ctx, kind), accounts));
        break;
      case BlockKind::Media:
        if (!resources.media_ratings) throw DataError("media ratings are required for the media block");
        out.blocks.push_back(media_features(ctx.sampled_tweets, *resources.media_ratings,
                                            resources.redirects ? *resources.redirects : kNoRedirects));
        break;
      case BlockKind::Nela:
        if (!resources.nela) throw DataError("a word-list bundle is required for the nela block");
        out.blocks.push_back(nela_features(ctx.sampled_tweets, *resources.nela));
        break;
      case BlockKind::Liwc:
        if (!resources.liwc) throw DataError("a category lexicon is required for the liwc block");
        out.blocks.push_back(liwc_features(ctx.sampled_tweets, *resources.liwc));
        break;
      case BlockKind::TweetEmbed:
        out.blocks.push_back(tweet_embedding(ctx, resources));
        break;
    }
  }
  return out;
}

std::vector<std::string> feature_names(std::span<const BlockKind> blocks, const FeatureResources& resources,
                                       std::span<const std::string> accounts) {
  static const char* kStats[] = {"verified", "account_age_days", "followers", "followings", "statuses", "favorites"};
  std::vector<std::string> names;
  for (const BlockKind kind : canonical_blocks({blocks.begin(), blocks.end()})) {
    const std::string prefix = std::string(to_string(kind)) + ":";
    switch (kind) {
      case BlockKind::TwitterStats:
        for (const char* s : kStats) names.push_back(prefix + s);
        break;
      case BlockKind::Following:
        for (const auto& a : accounts) names.push_back(prefix + a);
        break;
      case BlockKind::Media:
        for (const auto& n : media_feature_names()) names.push_back(prefix + n);
        break;
      case BlockKind::Nela:
        for (const auto& n : resources.nela->feature_names()) names.push_back(prefix + n);
        break;
      case BlockKind::Liwc:
        for (const auto& c : resources.liwc->categories()) names.push_back(prefix + c.name);
        break;
      case BlockKind::ProfileEmbed:
      case BlockKind::TweetEmbed: {
        const std::size_t d = block_dim(kind, resources, 0);
        for (std::size_t i = 0; i < d; ++i) names.push_back(prefix + std::to_string(i));
        break;
      }
    }
  }
  return names;
}

FeatureMatrix featurize(const corpus::Corpus& corpus, const corpus::PeriodSplit& split,
                        const corpus::CohortResult& labels, const FeatureResources& resources,
                        const FeaturizeConfig& config) {
  const auto blocks = canonical_blocks(config.blocks);
  if (blocks.empty()) throw ValidationError("no feature blocks requested");
  check_resources(blocks, resources);

  std::vector<const corpus::LabeledUser*> users;
  for (const auto& u : labels.users) {
    if (u.label.label != corpus::Cohort::Excluded) users.push_back(&u);
  }
  if (users.empty()) throw DataError("no labeled users to featurize");

  std::vector<std::vector<const corpus::TweetRecord*>> pre(users.size());
  std::vector<std::size_t> counts(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (const std::size_t idx : corpus.tweets_of(users[i]->user_id)) {
      const auto& t = corpus.tweets()[idx];
      if (split.is_pre(t)) pre[i].push_back(&t);
    }
    counts[i] = pre[i].size();
  }
  const std::size_t n_tweets =
      config.tweets_per_user ? config.tweets_per_user : std::max<std::size_t>(1, median_count(counts));

  std::vector<std::string> accounts;
  if (std::find(blocks.begin(), blocks.end(), BlockKind::Following) != blocks.end()) {
    std::vector<FollowGroup> groups{{"hateful", {}}, {"reference", {}}};
    for (const auto* u : users) {
      const auto* rec = corpus.find_user(u->user_id);
      if (!rec) continue;
      groups[corpus::is_hateful(u->label.label) ? 0 : 1].users.push_back(rec);
    }
    accounts = top_followed_accounts(groups, config.follow_top_k);
  }

  FeatureMatrix m;
  m.feature_names = feature_names(blocks, resources, accounts);
  std::size_t offset = 0;
  for (const BlockKind k : blocks) {
    const std::size_t d = block_dim(k, resources, accounts.size());
    m.blocks.push_back({k, offset, d});
    offset += d;
  }
  const std::size_t cols = offset;
  m.user_ids.reserve(users.size());
  for (const auto* u : users) {
    m.user_ids.push_back(u->user_id);
    m.labels.push_back(u->label.label);
  }
  m.values.assign(users.size() * cols, 0.0);

  parallel_for(users.size(), config.threads, [&](std::size_t i) {
    UserContext ctx;
    ctx.user_id = users[i]->user_id;
    ctx.user = corpus.find_user(ctx.user_id);
    ctx.label = users[i]->label;
    ctx.as_of = split.split_instant;
    const std::uint64_t s = derive_seed(config.seed, {hash_tag("tweet-sample"), hash_tag(ctx.user_id)});
    ctx.sampled_tweets = sample_tweets(pre[i], n_tweets, s);
    const auto row = assemble_user_vector(ctx, blocks, resources, accounts).flatten();
    if (row.size() != cols) throw DataError("feature width mismatch for user " + ctx.user_id);
    std::copy(row.begin(), row.end(), m.values.begin() + static_cast<std::ptrdiff_t>(i * cols));
  });

  m.metadata["tweets_per_user"] = std::to_string(n_tweets);
  m.metadata["seed"] = std::to_string(config.seed);
  m.metadata["split_instant"] = format_rfc3339(split.split_instant);
  return m;
}

}  // namespace xenorisk::features
