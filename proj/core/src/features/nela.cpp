#include "xenorisk/features/nela.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::features {
namespace {

constexpr const char* kStructuralNames[kNelaStructuralFeatures] = {
    "word_count",       "char_count",        "avg_word_length",        "type_token_ratio",
    "long_word_rate",   "punctuation_rate",  "exclamation_rate",       "question_rate",
    "quote_rate",       "allcaps_word_rate", "capitalized_word_rate",  "digit_rate",
    "hashtag_rate",     "mention_rate",      "url_count",              "plural_word_rate",
    "avg_syllables_per_word", "polysyllable_rate", "flesch_kincaid_grade", "smog_index",
    "avg_sentence_length"};

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

bool has_ascii_letter(std::string_view w) {
  return std::any_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::size_t codepoints(std::string_view s) {
  std::size_t n = 0;
  for (const char c : s) n += (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  return n;
}

bool is_quote(char32_t cp) { return cp == '"' || cp == 0x201C || cp == 0x201D || cp == 0x2018 || cp == 0x2019; }

bool is_punct(char32_t cp) {
  if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0 && cp != '#' && cp != '@' && cp != '_';
  return (cp >= 0x2010 && cp <= 0x205E) || (cp >= 0x3000 && cp <= 0x303F);
}

}  // namespace

std::size_t count_syllables(std::string_view word) {
  std::size_t groups = 0;
  bool in_vowel = false;
  for (const char c : word) {
    const bool v = is_vowel(c);
    if (v && !in_vowel) ++groups;
    in_vowel = v;
  }
  if (groups > 1 && word.size() > 2 && word.back() == 'e' && word[word.size() - 2] != 'l' &&
      !is_vowel(word[word.size() - 2])) {
    --groups;
  }
  return std::max<std::size_t>(groups, 1);
}

std::vector<std::string> NelaBundle::feature_names() const {
  std::vector<std::string> names(std::begin(kStructuralNames), std::end(kStructuralNames));
  for (const auto& c : words.categories()) names.push_back(c.name + "_rate");
  return names;
}

NelaBundle load_nela_bundle(const std::filesystem::path& path) {
  NelaBundle b{lexicon::load_lexicon(path)};
  if (b.words.empty()) throw DataError("NELA word-list bundle has no categories: " + path.string());
  return b;
}

std::vector<double> nela_tweet_features(const std::string& raw, std::size_t url_field_count,
                                        const NelaBundle& bundle) {
  std::vector<double> f(bundle.dim(), 0.0);

  // Character-level statistics over the text without URLs or whitespace.
  const auto urls = lexicon::find_urls(raw);
  std::string body;
  std::size_t last = 0;
  for (const auto& u : urls) {
    body.append(raw, last, u.begin - last);
    body.push_back(' ');
    last = u.end;
  }
  body.append(raw, last, std::string::npos);

  std::size_t chars = 0, punct = 0, excl = 0, quest = 0, quotes = 0, digits = 0, terminals = 0;
  bool prev_terminal = false;
  for (std::size_t pos = 0; pos < body.size();) {
    const char32_t cp = text::decode_utf8(body, pos);
    if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r') {
      prev_terminal = false;
      continue;
    }
    ++chars;
    if (is_punct(cp)) ++punct;
    if (cp == '!') ++excl;
    if (cp == '?') ++quest;
    if (is_quote(cp)) ++quotes;
    if (cp >= '0' && cp <= '9') ++digits;
    const bool terminal = cp == '.' || cp == '!' || cp == '?';
    if (terminal && !prev_terminal) ++terminals;
    prev_terminal = terminal;
  }

  const lexicon::TokenStream ts = lexicon::tokenize(raw);
  const std::size_t n = ts.size();
  const auto rate = [](double num, double den) { return den > 0 ? num / den : 0.0; };

  std::size_t total_len = 0, long_words = 0, allcaps = 0, capitalized = 0, hashtags = 0, mentions = 0, plurals = 0;
  std::size_t syllables = 0, polysyllables = 0, syllable_words = 0;
  std::unordered_set<std::string_view> types;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& tok = ts.tokens[i];
    const std::string_view src(raw.data() + ts.offsets[i].begin, ts.offsets[i].end - ts.offsets[i].begin);
    types.insert(tok);
    const std::size_t len = codepoints(tok);
    total_len += len;
    if (len >= 7) ++long_words;
    if (tok.front() == '#') ++hashtags;
    if (tok.front() == '@') ++mentions;

    std::size_t upper = 0, letters = 0;
    for (const char c : src) {
      if (c >= 'A' && c <= 'Z') ++upper, ++letters;
      else if (c >= 'a' && c <= 'z') ++letters;
    }
    if (letters >= 2 && upper == letters) ++allcaps;
    if (!src.empty() && src.front() >= 'A' && src.front() <= 'Z') ++capitalized;

    std::string_view word = tok;
    if (word.front() == '#' || word.front() == '@') word.remove_prefix(1);
    if (has_ascii_letter(word)) {
      const std::size_t s = count_syllables(word);
      syllables += s;
      if (s >= 3) ++polysyllables;
      ++syllable_words;
      if (word.size() >= 4 && word.back() == 's' && !word.ends_with("ss") && !word.ends_with("us") &&
          !word.ends_with("is")) {
        ++plurals;
      }
    }
  }

  const double sentences = static_cast<double>(std::max<std::size_t>(terminals, n > 0 ? 1 : 0));
  const double words = static_cast<double>(n);
  const double sw = static_cast<double>(syllable_words);

  f[0] = words;
  f[1] = static_cast<double>(chars);
  f[2] = rate(static_cast<double>(total_len), words);
  f[3] = rate(static_cast<double>(types.size()), words);
  f[4] = rate(static_cast<double>(long_words), words);
  f[5] = rate(static_cast<double>(punct), static_cast<double>(chars));
  f[6] = rate(static_cast<double>(excl), static_cast<double>(chars));
  f[7] = rate(static_cast<double>(quest), static_cast<double>(chars));
  f[8] = rate(static_cast<double>(quotes), static_cast<double>(chars));
  f[9] = rate(static_cast<double>(allcaps), words);
  f[10] = rate(static_cast<double>(capitalized), words);
  f[11] = rate(static_cast<double>(digits), static_cast<double>(chars));
  f[12] = rate(static_cast<double>(hashtags), words);
  f[13] = rate(static_cast<double>(mentions), words);
  f[14] = static_cast<double>(std::max(urls.size(), url_field_count));
  f[15] = rate(static_cast<double>(plurals), words);
  f[16] = rate(static_cast<double>(syllables), sw);
  f[17] = rate(static_cast<double>(polysyllables), words);
  if (n > 0 && syllable_words > 0) {
    f[18] = std::max(0.0, 0.39 * (words / sentences) + 11.8 * (static_cast<double>(syllables) / sw) - 15.59);
    f[19] = 1.043 * std::sqrt(static_cast<double>(polysyllables) * 30.0 / sentences) + 3.1291;
  }
  f[20] = n > 0 ? words / sentences : 0.0;

  if (n > 0) {
    const auto counts = bundle.words.count(ts);
    for (std::size_t c = 0; c < counts.size(); ++c) {
      f[kNelaStructuralFeatures + c] = static_cast<double>(counts[c]) / words;
    }
  }
  return f;
}

FeatureBlock nela_features(std::span<const corpus::TweetRecord* const> tweets, const NelaBundle& bundle) {
  FeatureBlock block{BlockKind::Nela, std::vector<double>(bundle.dim(), 0.0)};
  if (tweets.empty()) return block;
  for (const auto* t : tweets) {
    const auto f = nela_tweet_features(t->text, t->urls.size(), bundle);
    for (std::size_t k = 0; k < f.size(); ++k) block.values[k] += f[k];
  }
  for (double& x : block.values) x /= static_cast<double>(tweets.size());
  return block;
}

}  // namespace xenorisk::features
