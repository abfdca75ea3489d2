#include "xenorisk/common/csv.hpp"

#include <fstream>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::csv {

std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

std::vector<Row> read_rows(std::istream& in, const std::vector<std::string>& expected_header) {
  std::vector<Row> rows;
  std::string line;
  std::size_t n = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++n;
    const std::string_view t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_record(t);
    if (first) {
      first = false;
      if (!expected_header.empty() && fields == expected_header) continue;
    }
    rows.push_back({n, std::move(fields)});
  }
  return rows;
}

std::vector<Row> read_file(const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  return read_rows(in, expected_header);
}

}  // namespace xenorisk::csv
