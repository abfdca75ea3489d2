#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "xenorisk/corpus/corpus.hpp"
#include "xenorisk/features/blocks.hpp"

namespace xenorisk::features {

enum class Bias { ExtremeLeft, Left, CenterLeft, Center, CenterRight, Right, ExtremeRight };
enum class Factuality { QuestionableSource, VeryLow, Low, Mixed, MostlyFactual, High, VeryHigh };

inline constexpr std::array<std::string_view, 7> kBiasLabels = {
    "Extreme-Left", "Left", "Center-Left", "Center", "Center-Right", "Right", "Extreme-Right"};
inline constexpr std::array<std::string_view, 7> kFactualityLabels = {
    "Questionable-Source", "Very-Low", "Low", "Mixed", "Mostly-Factual", "High", "Very-High"};

// Case-insensitive; accepts the canonical labels above.
std::optional<Bias> parse_bias(std::string_view label);
std::optional<Factuality> parse_factuality(std::string_view label);

struct MediaRating {
  Bias bias;
  Factuality factuality;
};

// Lowercase host of an absolute URL with scheme, credentials, port, path and
// a leading "www." removed. Empty when the URL has no host.
std::string url_host(std::string_view url);

// Domain -> rating. Lookup walks from the full host towards shorter suffixes
// ("edition.cnn.com" -> "cnn.com"), so ratings keyed by registrable domain
// also cover subdomains.
class MediaRatingMap {
 public:
  void add(std::string_view domain, MediaRating rating);
  std::optional<MediaRating> lookup_host(std::string_view host) const;
  std::size_t size() const { return ratings_.size(); }

 private:
  std::map<std::string, MediaRating, std::less<>> ratings_;
};

// media_ratings.csv: `domain,bias,factuality`.
MediaRatingMap load_media_ratings(const std::filesystem::path& path);

// redirects.csv: `short_domain,final_domain`, applied before rating lookup.
using RedirectMap = std::map<std::string, std::string, std::less<>>;
RedirectMap load_redirects(const std::filesystem::path& path);

// 7 bias counts followed by 7 factuality counts. Each rated URL adds one to
// exactly one bias cell and one factuality cell; unrated URLs are ignored.
FeatureBlock media_features(std::span<const corpus::TweetRecord* const> tweets, const MediaRatingMap& ratings,
                            const RedirectMap& redirects = {});

std::vector<std::string> media_feature_names();

}  // namespace xenorisk::features
