#include "xenorisk/lexicon/tokenizer.hpp"

#include <cctype>

#include "xenorisk/common/text.hpp"

namespace xenorisk::lexicon {
namespace {

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    if (c != prefix[i]) return false;
  }
  return true;
}

bool is_space_byte(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_url_start(std::string_view s, std::size_t pos) {
  if (pos > 0) {
    const auto prev = static_cast<unsigned char>(s[pos - 1]);
    if (prev < 0x80 && (std::isalnum(prev) || prev == '_')) return false;
  }
  return starts_with_ci(s, pos, "http://") || starts_with_ci(s, pos, "https://") ||
         starts_with_ci(s, pos, "www.");
}

bool is_apostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019; }
bool is_hyphen(char32_t cp) { return cp == '-' || cp == 0x2010 || cp == 0x2011; }

char32_t peek(std::string_view s, std::size_t pos, std::size_t* next = nullptr) {
  std::size_t p = pos;
  const char32_t cp = text::decode_utf8(s, p);
  if (next) *next = p;
  return cp;
}

}  // namespace

bool is_word_codepoint(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') || cp == '_';
  }
  if (cp == 0xFFFD) return false;
  if (cp < 0xC0) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;   // punctuation, symbols, arrows, dingbats
  if (cp >= 0x3000 && cp <= 0x303F) return false;   // CJK punctuation
  if (cp >= 0xFE00 && cp <= 0xFE0F) return false;   // variation selectors
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;   // fullwidth punctuation
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false; // emoji and pictographs
  if (cp >= 0xE0000) return false;                  // tags
  return true;
}

std::vector<ByteSpan> find_urls(std::string_view s) {
  std::vector<ByteSpan> spans;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (is_url_start(s, pos)) {
      std::size_t end = pos;
      while (end < s.size() && !is_space_byte(s[end])) ++end;
      spans.push_back({pos, end});
      pos = end;
    } else {
      ++pos;
    }
  }
  return spans;
}

TokenStream tokenize(std::string_view s) {
  TokenStream out;
  std::size_t pos = 0;

  // Consumes a word starting at `pos`; returns the end byte.
  const auto scan_word = [&](std::size_t start) {
    std::size_t p = start;
    while (p < s.size()) {
      std::size_t next;
      const char32_t cp = peek(s, p, &next);
      if (is_word_codepoint(cp)) {
        p = next;
        continue;
      }
      if ((is_apostrophe(cp) || is_hyphen(cp)) && p > start && next < s.size() &&
          is_word_codepoint(peek(s, next))) {
        p = next;
        continue;
      }
      break;
    }
    return p;
  };

  while (pos < s.size()) {
    if (is_url_start(s, pos)) {
      while (pos < s.size() && !is_space_byte(s[pos])) ++pos;
      continue;
    }
    std::size_t next;
    const char32_t cp = peek(s, pos, &next);
    if (cp == '#' || cp == '@') {
      if (next < s.size() && is_word_codepoint(peek(s, next))) {
        std::size_t end = next;
        if (cp == '@') {
          while (end < s.size() && static_cast<unsigned char>(s[end]) < 0x80 &&
                 is_word_codepoint(static_cast<unsigned char>(s[end]))) {
            ++end;
          }
          if (end == next) {
            pos = next;
            continue;
          }
        } else {
          while (end < s.size()) {
            std::size_t n2;
            if (!is_word_codepoint(peek(s, end, &n2))) break;
            end = n2;
          }
        }
        out.tokens.push_back(text::to_lower_utf8(s.substr(pos, end - pos)));
        out.offsets.push_back({pos, end});
        pos = end;
        continue;
      }
      pos = next;
      continue;
    }
    if (is_word_codepoint(cp)) {
      const std::size_t end = scan_word(pos);
      out.tokens.push_back(text::to_lower_utf8(s.substr(pos, end - pos)));
      out.offsets.push_back({pos, end});
      pos = end;
      continue;
    }
    pos = next;
  }
  return out;
}

}  // namespace xenorisk::lexicon
