#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xenorisk/lexicon/tokenizer.hpp"

namespace xenorisk::lexicon {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

// One lexicon entry: a literal token, a phrase of up to four tokens, or a
// prefix pattern whose last token ends in `*` ("rr*").
struct Pattern {
  std::string source;               // as written in the lexicon file
  std::vector<std::string> tokens;  // tokenized form, `*` stripped
  bool prefix = false;              // last token matches by prefix
};

struct Category {
  std::string name;
  std::vector<Pattern> patterns;
};

inline constexpr std::size_t kMaxPhraseTokens = 4;

// Named categories of patterns, immutable after construction. Matching is
// pure and safe to share across threads.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::string name);

  // Adds `pattern` (already lowercase) to `category`, creating the category on
  // first use. Throws ValidationError for empty, uppercase, or over-long
  // patterns.
  void add(std::string_view category, std::string_view pattern);

  // Categories of `other` are appended; a shared category name merges pattern
  // lists.
  void merge(const Lexicon& other);

  const std::string& name() const { return name_; }
  const std::vector<Category>& categories() const { return categories_; }
  std::size_t category_count() const { return categories_.size(); }
  std::size_t pattern_count() const;
  bool empty() const { return categories_.empty(); }
  // Index of a category or npos.
  std::size_t category_index(std::string_view name) const;

  // Per-category hit counts, in category order. Within a category, hits are
  // found greedily left to right without overlap, preferring the longest
  // pattern at each position. A `#tag` token also matches patterns on its
  // body when `match_hashtag_bodies` is set.
  std::vector<std::size_t> count(const TokenStream& tokens) const;

  struct Hit {
    std::size_t category = 0;
    std::size_t pattern = 0;
    std::size_t position = 0;
    std::size_t length = 0;
  };
  std::vector<Hit> hits(const TokenStream& tokens) const;

  bool match_hashtag_bodies = true;

 private:
  struct PatternRef {
    std::size_t category;
    std::size_t pattern;
  };
  std::size_t match_length(const Pattern& p, const TokenStream& ts, std::size_t pos) const;
  void index_pattern(std::size_t category, std::size_t pattern);

  std::string name_;
  std::vector<Category> categories_;
  StringMap<std::size_t> category_lookup_;
  // Keyed by first token (exact) or by the prefix of single-token prefix patterns.
  StringMap<std::vector<PatternRef>> by_first_token_;
  StringMap<std::vector<PatternRef>> by_prefix_;
  std::size_t max_prefix_len_ = 0;
};

// Parses `category<TAB>pattern` lines; blank lines and `#` comments are
// skipped. Malformed lines throw DataError with the line number.
Lexicon parse_lexicon(std::istream& in, std::string name);
Lexicon load_lexicon(const std::filesystem::path& path);

// Category name -> count.
std::map<std::string, std::size_t> match_categories(const TokenStream& tokens, const Lexicon& lexicon);

// Distinct patterns (as written) found in `text`, ordered by first
// occurrence. Case-insensitive.
std::vector<std::string> find_slurs(std::string_view text, const Lexicon& slurs);
std::vector<std::string> find_slurs(const TokenStream& tokens, const Lexicon& slurs);

}  // namespace xenorisk::lexicon
