#pragma once

#include <string>
#include <vector>

namespace diab {

// Parsed delimited table. All cells kept as raw strings; typing is the
// caller's concern.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180-style reader: quoted fields, embedded delimiters/newlines,
// doubled quotes, CRLF line ends. Rows may be ragged; callers decide how
// to treat short or long rows.
CsvTable read_delimited(const std::string& path, char delimiter = ',');

CsvTable parse_delimited(const std::string& text, char delimiter = ',');

// Quotes a field only when it needs quoting under the given delimiter.
std::string csv_escape(const std::string& field, char delimiter = ',');

std::string format_row(const std::vector<std::string>& cells, char delimiter = ',');

void write_delimited(const std::string& path, const CsvTable& table, char delimiter = ',');

}  // namespace diab
