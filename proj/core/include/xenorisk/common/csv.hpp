#pragma once

#include <filesystem>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace xenorisk::csv {

// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_record(std::string_view line);

// Quotes a field when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

struct Row {
  std::size_t line_number = 0;
  std::vector<std::string> fields;
};

// Reads every non-empty, non-`#` record. When `expected_header` is non-empty
// and the first record equals it, that record is skipped.
std::vector<Row> read_rows(std::istream& in, const std::vector<std::string>& expected_header = {});

// Opens `path` or throws DataError naming the missing file.
std::vector<Row> read_file(const std::filesystem::path& path,
                           const std::vector<std::string>& expected_header = {});

}  // namespace xenorisk::csv
