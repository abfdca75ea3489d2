#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "xenorisk/corpus/corpus.hpp"
#include "xenorisk/features/blocks.hpp"
#include "xenorisk/lexicon/lexicon.hpp"

namespace xenorisk::features {

// Style, complexity and word-list features in the spirit of the News
// Landscape toolkit. The block is the fixed structural list below followed by
// one token-rate feature per category of the word-list bundle (sentiment,
// subjectivity, bias language, moral foundations, function-word classes), so
// its width is kNelaStructuralFeatures + bundle.category_count().
//
// Structural features, per tweet:
//   word_count, char_count, avg_word_length, type_token_ratio, long_word_rate,
//   punctuation_rate, exclamation_rate, question_rate, quote_rate,
//   allcaps_word_rate, capitalized_word_rate, digit_rate, hashtag_rate,
//   mention_rate, url_count, plural_word_rate, avg_syllables_per_word,
//   polysyllable_rate, flesch_kincaid_grade, smog_index, avg_sentence_length
//
// Counts and lengths are >= 0, every *_rate and every bundle rate lies in
// [0, 1], readability grades are clamped at 0.
inline constexpr std::size_t kNelaStructuralFeatures = 21;

struct NelaBundle {
  lexicon::Lexicon words;

  std::size_t dim() const { return kNelaStructuralFeatures + words.category_count(); }
  std::vector<std::string> feature_names() const;
};

NelaBundle load_nela_bundle(const std::filesystem::path& path);

// Feature vector of a single tweet.
std::vector<double> nela_tweet_features(const std::string& text, std::size_t url_field_count,
                                        const NelaBundle& bundle);

// Per-tweet vectors averaged over `tweets`; zeros for an empty list.
FeatureBlock nela_features(std::span<const corpus::TweetRecord* const> tweets, const NelaBundle& bundle);

// Syllable estimate for one lowercase word (vowel groups, silent final e).
std::size_t count_syllables(std::string_view word);

}  // namespace xenorisk::features
