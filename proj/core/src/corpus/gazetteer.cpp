#include "xenorisk/corpus/gazetteer.hpp"

#include <cctype>

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::corpus {
namespace {

std::vector<std::string> location_tokens(std::string_view s) {
  const std::string lower = text::to_lower_utf8(s);
  std::vector<std::string> out;
  std::string cur;
  for (const char c : lower) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_country_suffix(const std::vector<std::string>& toks, std::size_t from) {
  if (from == toks.size()) return true;
  if (from + 1 == toks.size()) return toks[from] == "usa" || toks[from] == "us";
  return from + 2 == toks.size() && toks[from] == "united" && toks[from + 1] == "states";
}

}  // namespace

void Gazetteer::add(std::string_view pattern, std::string_view state_code) {
  Entry e;
  e.tokens = location_tokens(pattern);
  if (e.tokens.empty()) throw ValidationError("gazetteer: empty pattern");
  for (const auto& t : e.tokens) e.length += t.size();
  e.length += e.tokens.size() - 1;
  e.code = std::string(text::trim(state_code));
  if (e.code.empty()) throw ValidationError("gazetteer: empty state code for " + std::string(pattern));
  entries_.push_back(std::move(e));
}

std::optional<std::string> Gazetteer::infer_state(std::string_view location_raw) const {
  const auto toks = location_tokens(location_raw);
  const Entry* best = nullptr;
  for (const Entry& e : entries_) {
    if (best && e.length <= best->length) continue;
    const bool abbreviation = e.tokens.size() == 1 && e.tokens[0].size() <= 2;
    for (std::size_t i = 0; i + e.tokens.size() <= toks.size(); ++i) {
      bool ok = true;
      for (std::size_t k = 0; k < e.tokens.size() && ok; ++k) ok = toks[i + k] == e.tokens[k];
      if (ok && abbreviation) ok = is_country_suffix(toks, i + 1);
      if (ok) {
        best = &e;
        break;
      }
    }
  }
  if (!best) return std::nullopt;
  return best->code;
}

Gazetteer load_gazetteer(const std::filesystem::path& path) {
  Gazetteer g;
  for (const auto& row : csv::read_file(path, {"pattern", "state_code"})) {
    if (row.fields.size() != 2) {
      throw DataError(path.string() + " line " + std::to_string(row.line_number) + ": expected pattern,state_code");
    }
    try {
      g.add(row.fields[0], row.fields[1]);
    } catch (const ValidationError& e) {
      throw DataError(path.string() + " line " + std::to_string(row.line_number) + ": " + e.what());
    }
  }
  return g;
}

}  // namespace xenorisk::corpus
