#include "stressdetect/csv.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "stressdetect/error.hpp"

namespace stressdetect::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  return std::nullopt;
}

Table parse(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }

  std::vector<Row> records;
  std::vector<std::size_t> starts;
  Row row;
  std::string cell;
  bool in_quotes = false;
  bool row_open = false;
  std::size_t line = 1;
  std::size_t row_start = 1;

  auto end_row = [&] {
    row.push_back(std::move(cell));
    cell.clear();
    records.push_back(std::move(row));
    starts.push_back(row_start);
    row.clear();
    row_open = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (!row_open) {
      row_open = true;
      row_start = line;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        row.push_back(std::move(cell));
        cell.clear();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_row();
        ++line;
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        cell.push_back(c);
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kBadRow, "unterminated quoted field", row_start);
  }
  if (row_open) {
    end_row();
  }

  Table table;
  if (records.empty()) {
    return table;
  }
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    // Blank physical lines are not records.
    if (records[r].size() == 1 && records[r][0].empty()) continue;
    table.rows.push_back(std::move(records[r]));
    table.line_of.push_back(starts[r]);
  }
  return table;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Table read_file(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

std::string quote(std::string_view cell) {
  const bool needs = cell.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs) {
    return std::string(cell);
  }
  std::string out;
  out.reserve(cell.size() + 2);
  out.push_back('"');
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << quote(row[i]);
  }
  out << '\n';
}

void write_table(std::ostream& out, const Table& table) {
  write_row(out, table.header);
  for (const auto& row : table.rows) {
    write_row(out, row);
  }
}

}  // namespace stressdetect::csv
