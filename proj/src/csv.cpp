#include "diab/csv.hpp"

#include <fstream>
#include <sstream>

#include "diab/errors.hpp"

namespace diab {

CsvTable parse_delimited(const std::string& text, char delimiter) {
  CsvTable table;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool row_has_content = false;
  bool header_done = false;

  auto end_cell = [&] {
    row.push_back(std::move(cell));
    cell.clear();
  };
  auto end_row = [&] {
    end_cell();
    if (!header_done) {
      table.header = std::move(row);
      header_done = true;
    } else {
      table.rows.push_back(std::move(row));
    }
    row.clear();
    row_has_content = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell.push_back(c);
      }
      row_has_content = true;
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      row_has_content = true;
    } else if (c == delimiter) {
      end_cell();
      row_has_content = true;
    } else if (c == '\r') {
      // swallowed; \n closes the row
    } else if (c == '\n') {
      if (row_has_content || !row.empty() || !cell.empty()) end_row();
      else if (!header_done) end_row();  // blank first line = empty header
    } else {
      cell.push_back(c);
      row_has_content = true;
    }
  }
  if (row_has_content || !row.empty() || !cell.empty()) end_row();
  return table;
}

CsvTable read_delimited(const std::string& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on: " + path);
  return parse_delimited(buf.str(), delimiter);
}

std::string csv_escape(const std::string& field, char delimiter) {
  const bool needs_quote =
      field.find(delimiter) != std::string::npos ||
      field.find('"') != std::string::npos ||
      field.find('\n') != std::string::npos ||
      field.find('\r') != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

std::string format_row(const std::vector<std::string>& cells, char delimiter) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line.push_back(delimiter);
    line += csv_escape(cells[i], delimiter);
  }
  line.push_back('\n');
  return line;
}

void write_delimited(const std::string& path, const CsvTable& table, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << format_row(table.header, delimiter);
  for (const auto& row : table.rows) out << format_row(row, delimiter);
  if (!out) throw IoError("write failure on: " + path);
}

}  // namespace diab
