#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rivergraph::csv {

// Line-oriented reader for the simple comma-separated files this project
// reads and writes (no quoting). Errors carry "file:line".
class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);

  const std::vector<std::string>& header() const noexcept { return header_; }
  // Column index for `name`, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  // Column index for `name`; throws parse_error when the header lacks it.
  std::size_t require_column(std::string_view name) const;

  // Next non-blank row; false at end of file. Rows must have as many fields
  // as the header.
  bool next(std::vector<std::string>& fields);

  std::string where() const;  // "file:line" of the last row read

  [[noreturn]] void fail(const std::string& what) const;

  double parse_double(const std::string& field, std::string_view column) const;
  unsigned long long parse_uint(const std::string& field, std::string_view column) const;

 private:
  std::filesystem::path path_;
  std::vector<std::string> lines_;
  std::size_t cursor_ = 0;
  std::size_t line_no_ = 0;
  std::vector<std::string> header_;
};

std::vector<std::string> split(std::string_view line, char sep = ',');

// Shortest representation that round-trips through strtod.
std::string format_double(double v);

// Writes `contents` to `path`, throwing io_error on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rivergraph::csv
