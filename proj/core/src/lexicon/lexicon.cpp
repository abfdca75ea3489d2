#include "xenorisk/lexicon/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::lexicon {
namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

std::string_view hashtag_body(std::string_view token) {
  if (token.size() > 1 && token.front() == '#') return token.substr(1);
  return {};
}

}  // namespace

Lexicon::Lexicon(std::string name) : name_(std::move(name)) {}

std::size_t Lexicon::pattern_count() const {
  std::size_t n = 0;
  for (const auto& c : categories_) n += c.patterns.size();
  return n;
}

std::size_t Lexicon::category_index(std::string_view name) const {
  const auto it = category_lookup_.find(name);
  return it == category_lookup_.end() ? npos : it->second;
}

void Lexicon::add(std::string_view category, std::string_view raw) {
  const std::string_view pattern_text = text::trim(raw);
  const std::string cat(text::trim(category));
  if (cat.empty()) throw ValidationError("lexicon '" + name_ + "': empty category name");
  if (pattern_text.empty()) throw ValidationError("lexicon '" + name_ + "': empty pattern in " + cat);
  if (text::to_lower_utf8(pattern_text) != pattern_text) {
    throw ValidationError("lexicon '" + name_ + "': pattern not lowercase: " + std::string(pattern_text));
  }

  Pattern p;
  p.source = std::string(pattern_text);
  std::string_view body = pattern_text;
  if (body.back() == '*') {
    p.prefix = true;
    body.remove_suffix(1);
  }
  p.tokens = tokenize(body).tokens;
  if (p.tokens.empty()) throw ValidationError("lexicon '" + name_ + "': pattern has no tokens: " + p.source);
  if (p.tokens.size() > kMaxPhraseTokens) {
    throw ValidationError("lexicon '" + name_ + "': phrase longer than 4 tokens: " + p.source);
  }

  std::size_t ci = category_index(cat);
  if (ci == npos) {
    ci = categories_.size();
    categories_.push_back({cat, {}});
    category_lookup_.emplace(cat, ci);
  }
  auto& patterns = categories_[ci].patterns;
  const bool duplicate = std::any_of(patterns.begin(), patterns.end(),
                                     [&](const Pattern& q) { return q.tokens == p.tokens && q.prefix == p.prefix; });
  if (duplicate) return;
  patterns.push_back(std::move(p));
  index_pattern(ci, patterns.size() - 1);
}

void Lexicon::index_pattern(std::size_t category, std::size_t pattern) {
  const Pattern& p = categories_[category].patterns[pattern];
  if (p.prefix && p.tokens.size() == 1) {
    by_prefix_[p.tokens.front()].push_back({category, pattern});
    max_prefix_len_ = std::max(max_prefix_len_, p.tokens.front().size());
  } else {
    by_first_token_[p.tokens.front()].push_back({category, pattern});
  }
}

void Lexicon::merge(const Lexicon& other) {
  for (const auto& c : other.categories_) {
    for (const auto& p : c.patterns) add(c.name, p.source);
  }
}

std::size_t Lexicon::match_length(const Pattern& p, const TokenStream& ts, std::size_t pos) const {
  if (pos + p.tokens.size() > ts.size()) return 0;
  for (std::size_t k = 0; k < p.tokens.size(); ++k) {
    const std::string_view tok = ts.tokens[pos + k];
    const std::string_view want = p.tokens[k];
    const bool last = k + 1 == p.tokens.size();
    const auto ok = [&](std::string_view t) {
      if (t.empty()) return false;
      if (last && p.prefix) return t.substr(0, want.size()) == want;
      return t == want;
    };
    if (ok(tok)) continue;
    if (match_hashtag_bodies && ok(hashtag_body(tok))) continue;
    return 0;
  }
  return p.tokens.size();
}

std::vector<Lexicon::Hit> Lexicon::hits(const TokenStream& ts) const {
  std::vector<Hit> out;
  std::vector<std::size_t> next_free(categories_.size(), 0);
  std::vector<PatternRef> candidates;

  const auto gather = [&](std::string_view tok) {
    if (tok.empty()) return;
    if (const auto it = by_first_token_.find(tok); it != by_first_token_.end()) {
      candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
    const std::size_t max_len = std::min(tok.size(), max_prefix_len_);
    for (std::size_t len = 1; len <= max_len; ++len) {
      if (const auto it = by_prefix_.find(tok.substr(0, len)); it != by_prefix_.end()) {
        candidates.insert(candidates.end(), it->second.begin(), it->second.end());
      }
    }
  };

  for (std::size_t i = 0; i < ts.size(); ++i) {
    candidates.clear();
    gather(ts.tokens[i]);
    if (match_hashtag_bodies) gather(hashtag_body(ts.tokens[i]));
    if (candidates.empty()) continue;

    // Best (longest, then earliest-declared) match per category at position i.
    std::sort(candidates.begin(), candidates.end(), [](const PatternRef& a, const PatternRef& b) {
      return a.category != b.category ? a.category < b.category : a.pattern < b.pattern;
    });
    std::size_t k = 0;
    while (k < candidates.size()) {
      const std::size_t cat = candidates[k].category;
      std::size_t best_len = 0, best_pattern = 0;
      for (; k < candidates.size() && candidates[k].category == cat; ++k) {
        const std::size_t len = match_length(categories_[cat].patterns[candidates[k].pattern], ts, i);
        if (len > best_len) {
          best_len = len;
          best_pattern = candidates[k].pattern;
        }
      }
      if (best_len > 0 && i >= next_free[cat]) {
        out.push_back({cat, best_pattern, i, best_len});
        next_free[cat] = i + best_len;
      }
    }
  }
  return out;
}

std::vector<std::size_t> Lexicon::count(const TokenStream& ts) const {
  std::vector<std::size_t> counts(categories_.size(), 0);
  for (const Hit& h : hits(ts)) ++counts[h.category];
  return counts;
}

Lexicon parse_lexicon(std::istream& in, std::string name) {
  Lexicon lex(std::move(name));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string_view t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto tab = t.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("lexicon '" + lex.name() + "' line " + std::to_string(n) + ": expected category<TAB>pattern");
    }
    try {
      lex.add(t.substr(0, tab), t.substr(tab + 1));
    } catch (const ValidationError& e) {
      throw DataError(std::string(e.what()) + " (line " + std::to_string(n) + ")");
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon: " + path.string());
  return parse_lexicon(in, path.stem().string());
}

std::map<std::string, std::size_t> match_categories(const TokenStream& tokens, const Lexicon& lexicon) {
  const auto counts = lexicon.count(tokens);
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < counts.size(); ++i) out[lexicon.categories()[i].name] = counts[i];
  return out;
}

std::vector<std::string> find_slurs(const TokenStream& tokens, const Lexicon& slurs) {
  std::vector<std::string> found;
  for (const auto& h : slurs.hits(tokens)) {
    const std::string& src = slurs.categories()[h.category].patterns[h.pattern].source;
    if (std::find(found.begin(), found.end(), src) == found.end()) found.push_back(src);
  }
  return found;
}

std::vector<std::string> find_slurs(std::string_view text, const Lexicon& slurs) {
  return find_slurs(tokenize(text), slurs);
}

}  // namespace xenorisk::lexicon
