#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polsig::csv {

// A header-first CSV file held in memory. Quoted fields are accepted; embedded
// newlines are not.
struct Table {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row

  // Throws SchemaError naming the file when the column is absent.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;

  // "file:line" for error messages.
  std::string where(std::size_t row) const;
};

Table parse(std::istream& in, std::string source);
Table read(const std::filesystem::path& path);

std::int64_t parse_int(std::string_view field, std::string_view context);
double parse_double(std::string_view field, std::string_view context);

// Shortest representation that round-trips exactly.
std::string format(double value);

std::string join_row(std::initializer_list<std::string_view> fields);
std::string join_row(const std::vector<std::string>& fields);

// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace polsig::csv
