#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace landcover::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws DataError when absent.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;
};

/// RFC-4180 style line splitting (double-quote escaping, no embedded newlines).
std::vector<std::string> split_line(std::string_view line);
std::string quote(std::string_view field);

Table read(const std::filesystem::path& path);
void write(const std::filesystem::path& path, const Table& table);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

}  // namespace landcover::csv
