#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xenorisk::corpus {

// Pattern -> US state code table for self-declared profile locations.
//
// Patterns are matched as whole token sequences, case-insensitively; the
// longest matching pattern wins (ties: first in file). Two-letter patterns
// (state abbreviations such as "or", "in", "me") only match as the last
// token of the location, optionally followed by "usa"/"us", so ordinary
// words are not mistaken for states.
class Gazetteer {
 public:
  void add(std::string_view pattern, std::string_view state_code);
  std::optional<std::string> infer_state(std::string_view location_raw) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::vector<std::string> tokens;
    std::size_t length = 0;
    std::string code;
  };
  std::vector<Entry> entries_;
};

// gazetteer.csv: `pattern,state_code`.
Gazetteer load_gazetteer(const std::filesystem::path& path);

inline std::optional<std::string> infer_state(std::string_view location_raw, const Gazetteer& gazetteer) {
  return gazetteer.infer_state(location_raw);
}

}  // namespace xenorisk::corpus
