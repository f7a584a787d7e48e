#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stressdetect::csv {

using Row = std::vector<std::string>;

// A parsed RFC-4180 file: mandatory header plus data rows. `line_of[i]` is the
// physical line on which data row i starts (header is line 1), so diagnostics
// stay meaningful when quoted cells span several lines.
struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> line_of;

  std::optional<std::size_t> column(std::string_view name) const;
};

Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

std::string quote(std::string_view cell);
void write_row(std::ostream& out, const Row& row);
void write_table(std::ostream& out, const Table& table);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace stressdetect::csv
