#include "xenorisk/features/media.hpp"

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::features {
namespace {

std::string normalize_label(std::string_view s) {
  std::string out;
  for (const char c : text::trim(s)) {
    if (c == ' ' || c == '_') {
      out.push_back('-');
    } else {
      out.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c));
    }
  }
  return out;
}

template <typename E>
std::optional<E> parse_label(std::string_view label, const std::array<std::string_view, 7>& names) {
  const std::string want = normalize_label(label);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (normalize_label(names[i]) == want) return static_cast<E>(i);
  }
  return std::nullopt;
}

std::string normalize_domain(std::string_view d) {
  std::string s = text::to_lower_utf8(text::trim(d));
  if (s.starts_with("www.")) s.erase(0, 4);
  while (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::optional<Bias> parse_bias(std::string_view label) { return parse_label<Bias>(label, kBiasLabels); }

std::optional<Factuality> parse_factuality(std::string_view label) {
  return parse_label<Factuality>(label, kFactualityLabels);
}

std::string url_host(std::string_view url) {
  url = text::trim(url);
  const auto scheme = url.find("://");
  if (scheme == std::string_view::npos || scheme == 0) return {};
  url.remove_prefix(scheme + 3);
  const auto end = url.find_first_of("/?#");
  std::string_view authority = url.substr(0, end);
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  if (const auto colon = authority.find(':'); colon != std::string_view::npos) authority = authority.substr(0, colon);
  if (authority.find_first_of(" \t") != std::string_view::npos) return {};
  return normalize_domain(authority);
}

void MediaRatingMap::add(std::string_view domain, MediaRating rating) {
  const std::string d = normalize_domain(domain);
  if (d.empty() || d.find('/') != std::string::npos) throw ValidationError("invalid media domain: " + std::string(domain));
  ratings_[d] = rating;
}

std::optional<MediaRating> MediaRatingMap::lookup_host(std::string_view host) const {
  std::string_view h = host;
  while (!h.empty()) {
    if (const auto it = ratings_.find(h); it != ratings_.end()) return it->second;
    const auto dot = h.find('.');
    if (dot == std::string_view::npos) break;
    h.remove_prefix(dot + 1);
    if (h.find('.') == std::string_view::npos) break;  // never match a bare TLD
  }
  return std::nullopt;
}

MediaRatingMap load_media_ratings(const std::filesystem::path& path) {
  MediaRatingMap m;
  for (const auto& row : csv::read_file(path, {"domain", "bias", "factuality"})) {
    const auto where = path.string() + " line " + std::to_string(row.line_number);
    if (row.fields.size() != 3) throw DataError(where + ": expected domain,bias,factuality");
    const auto b = parse_bias(row.fields[1]);
    const auto f = parse_factuality(row.fields[2]);
    if (!b || !f) throw DataError(where + ": unknown bias or factuality label");
    try {
      m.add(row.fields[0], {*b, *f});
    } catch (const ValidationError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return m;
}

RedirectMap load_redirects(const std::filesystem::path& path) {
  RedirectMap r;
  for (const auto& row : csv::read_file(path, {"short_domain", "final_domain"})) {
    if (row.fields.size() != 2) {
      throw DataError(path.string() + " line " + std::to_string(row.line_number) + ": expected short_domain,final_domain");
    }
    r[normalize_domain(row.fields[0])] = normalize_domain(row.fields[1]);
  }
  return r;
}

FeatureBlock media_features(std::span<const corpus::TweetRecord* const> tweets, const MediaRatingMap& ratings,
                            const RedirectMap& redirects) {
  FeatureBlock block{BlockKind::Media, std::vector<double>(kMediaDim, 0.0)};
  for (const auto* t : tweets) {
    for (const auto& url : t->urls) {
      std::string host = url_host(url);
      if (const auto it = redirects.find(host); it != redirects.end()) host = it->second;
      const auto rating = ratings.lookup_host(host);
      if (!rating) continue;
      block.values[static_cast<std::size_t>(rating->bias)] += 1.0;
      block.values[7 + static_cast<std::size_t>(rating->factuality)] += 1.0;
    }
  }
  return block;
}

std::vector<std::string> media_feature_names() {
  std::vector<std::string> names;
  for (const auto l : kBiasLabels) names.push_back("bias:" + std::string(l));
  for (const auto l : kFactualityLabels) names.push_back("factuality:" + std::string(l));
  return names;
}

}  // namespace xenorisk::features
