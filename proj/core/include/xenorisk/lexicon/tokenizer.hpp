#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace xenorisk::lexicon {

struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const ByteSpan&) const = default;
};

// Lowercased tokens with their byte spans in the source text. Spans are
// strictly increasing and lie within the source.
struct TokenStream {
  std::vector<std::string> tokens;
  std::vector<ByteSpan> offsets;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Segments tweet text into lowercase word tokens.
//
//  * URLs (http://, https://, www.) are removed before segmentation.
//  * `#tag` and `@handle` survive as single tokens, sigil included.
//  * Words are runs of letters, digits and `_`; an apostrophe or hyphen
//    between two word characters stays inside the word ("don't", "covid-19").
//  * Emoji, symbols and punctuation are dropped.
TokenStream tokenize(std::string_view text);

// True for code points treated as word characters (letters, digits, `_`,
// and non-ASCII letters outside the punctuation/symbol/emoji blocks).
bool is_word_codepoint(char32_t cp);

// Byte spans of URL substrings in `text`.
std::vector<ByteSpan> find_urls(std::string_view text);

}  // namespace xenorisk::lexicon
