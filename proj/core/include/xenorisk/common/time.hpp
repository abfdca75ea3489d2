#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace xenorisk {

using Instant = std::chrono::sys_seconds;

// Parses an RFC 3339 timestamp ("2020-03-16T12:00:00Z", "...+02:00", optional
// fractional seconds). Fractional seconds are floored so half-open period
// boundaries stay exact.
std::optional<Instant> parse_rfc3339(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Instant t);

// 2019-12-31T00:00:00Z, the default pre/post split.
Instant default_split_instant();

// Whole days elapsed from `from` to `to` (floor).
long long days_between(Instant from, Instant to);

}  // namespace xenorisk
