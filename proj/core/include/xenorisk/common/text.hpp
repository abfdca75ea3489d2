#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xenorisk::text {

std::string_view trim(std::string_view s);

// Lowercases ASCII plus the Latin-1, Greek and Cyrillic capital ranges.
std::string to_lower_utf8(std::string_view s);

// Decodes one UTF-8 code point at `pos`, advancing it. Invalid bytes decode
// as U+FFFD and advance by one.
char32_t decode_utf8(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

std::vector<std::string> split(std::string_view s, char sep);

// Renders a double with the shortest round-trip representation ("%.17g"
// fallback) so report files are byte-stable.
std::string format_double(double v);

}  // namespace xenorisk::text
