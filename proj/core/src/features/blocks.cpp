#include "xenorisk/features/blocks.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/rng.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::features {

std::string_view to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::TwitterStats: return "twitter_stats";
    case BlockKind::ProfileEmbed: return "profile_embed";
    case BlockKind::Following: return "following";
    case BlockKind::Media: return "media";
    case BlockKind::Nela: return "nela";
    case BlockKind::Liwc: return "liwc";
    case BlockKind::TweetEmbed: return "tweet_embed";
  }
  return "";
}

std::optional<BlockKind> parse_block(std::string_view name) {
  for (const BlockKind k : kAllBlocks) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<BlockKind> parse_block_list(std::string_view list) {
  if (text::trim(list) == "all") return {kAllBlocks.begin(), kAllBlocks.end()};
  std::vector<BlockKind> out;
  for (const auto& part : text::split(list, ',')) {
    const auto name = text::trim(part);
    if (name.empty()) continue;
    const auto k = parse_block(name);
    if (!k) throw ValidationError("unknown feature block: " + std::string(name));
    out.push_back(*k);
  }
  if (out.empty()) throw ValidationError("empty feature block list");
  return canonical_blocks(std::move(out));
}

std::size_t canonical_index(BlockKind kind) { return static_cast<std::size_t>(kind); }

std::vector<BlockKind> canonical_blocks(std::vector<BlockKind> blocks) {
  std::sort(blocks.begin(), blocks.end(),
            [](BlockKind a, BlockKind b) { return canonical_index(a) < canonical_index(b); });
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  return blocks;
}

BlockDims::BlockDims(std::size_t twitter_stats, std::size_t profile_embed, std::size_t following, std::size_t media,
                     std::size_t nela, std::size_t liwc, std::size_t tweet_embed)
    : dims_{twitter_stats, profile_embed, following, media, nela, liwc, tweet_embed} {}

std::size_t BlockDims::total(std::span<const BlockKind> blocks) const {
  std::size_t n = 0;
  for (const BlockKind b : blocks) n += (*this)[b];
  return n;
}

BlockDims BlockDims::standard() { return BlockDims(6, 768, 95, 14, 85, 73, 768); }

std::vector<const corpus::TweetRecord*> sample_tweets(std::vector<const corpus::TweetRecord*> tweets, std::size_t n,
                                                      std::uint64_t seed) {
  if (n == 0) throw ValidationError("sample size must be at least 1");
  std::sort(tweets.begin(), tweets.end(), [](const corpus::TweetRecord* a, const corpus::TweetRecord* b) {
    return a->timestamp != b->timestamp ? a->timestamp < b->timestamp : a->tweet_id < b->tweet_id;
  });
  if (tweets.size() <= n) return tweets;
  Rng rng(seed);
  std::vector<const corpus::TweetRecord*> out;
  out.reserve(n);
  for (const std::size_t i : sample_without_replacement(tweets.size(), n, rng)) out.push_back(tweets[i]);
  return out;
}

std::size_t median_count(std::vector<std::size_t> counts) {
  if (counts.empty()) return 0;
  const std::size_t mid = (counts.size() - 1) / 2;
  std::nth_element(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(mid), counts.end());
  return counts[mid];
}

FeatureBlock twitter_stats_features(const corpus::UserRecord& user, Instant as_of) {
  if (user.created_at > as_of) {
    throw ValidationError("account " + user.user_id + " created after the reference date " + format_rfc3339(as_of));
  }
  return {BlockKind::TwitterStats,
          {user.verified ? 1.0 : 0.0, static_cast<double>(days_between(user.created_at, as_of)),
           static_cast<double>(user.followers), static_cast<double>(user.followings),
           static_cast<double>(user.statuses), static_cast<double>(user.favorites)}};
}

FeatureBlock aggregate_embeddings(BlockKind kind, std::span<const std::span<const float>> vectors, std::size_t dim) {
  FeatureBlock block{kind, std::vector<double>(dim, 0.0)};
  if (vectors.empty()) return block;
  for (const auto& v : vectors) {
    if (v.size() != dim) {
      throw DataError("embedding length " + std::to_string(v.size()) + " does not match dimension " +
                      std::to_string(dim));
    }
    for (std::size_t k = 0; k < dim; ++k) block.values[k] += v[k];
  }
  for (double& x : block.values) x /= static_cast<double>(vectors.size());
  return block;
}

FeatureBlock liwc_features(std::span<const lexicon::TokenStream> tweet_tokens, const lexicon::Lexicon& lexicon) {
  if (lexicon.empty()) throw ValidationError("LIWC-style lexicon has no categories");
  FeatureBlock block{BlockKind::Liwc, std::vector<double>(lexicon.category_count(), 0.0)};
  if (tweet_tokens.empty()) return block;
  for (const auto& ts : tweet_tokens) {
    if (ts.empty()) continue;
    const auto counts = lexicon.count(ts);
    const double n = static_cast<double>(ts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) block.values[c] += static_cast<double>(counts[c]) / n;
  }
  for (double& x : block.values) x /= static_cast<double>(tweet_tokens.size());
  return block;
}

FeatureBlock liwc_features(std::span<const corpus::TweetRecord* const> tweets, const lexicon::Lexicon& lexicon) {
  std::vector<lexicon::TokenStream> tokens;
  tokens.reserve(tweets.size());
  for (const auto* t : tweets) tokens.push_back(lexicon::tokenize(t->text));
  return liwc_features(tokens, lexicon);
}

std::vector<std::string> top_followed_accounts(std::span<const FollowGroup> groups, std::size_t k) {
  std::vector<std::string> out;
  std::unordered_map<std::string, bool> seen;
  for (const auto& g : groups) {
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto* u : g.users) {
      for (const auto& h : u->follows) ++counts[h];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    for (auto& [handle, _] : ranked) {
      if (seen.emplace(handle, true).second) out.push_back(handle);
    }
  }
  return out;
}

FeatureBlock following_features(const corpus::UserRecord& user, std::span<const std::string> accounts) {
  FeatureBlock block{BlockKind::Following, std::vector<double>(accounts.size(), 0.0)};
  for (std::size_t i = 0; i < accounts.size(); ++i) {
    if (user.follows.contains(accounts[i])) block.values[i] = 1.0;
  }
  return block;
}

std::size_t UserFeatureVector::dim() const {
  return std::accumulate(blocks.begin(), blocks.end(), std::size_t{0},
                         [](std::size_t n, const FeatureBlock& b) { return n + b.dim(); });
}

std::vector<double> UserFeatureVector::flatten() const {
  std::vector<double> out;
  out.reserve(dim());
  for (const auto& b : blocks) out.insert(out.end(), b.values.begin(), b.values.end());
  return out;
}

}  // namespace xenorisk::features
