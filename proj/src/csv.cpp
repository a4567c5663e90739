#include "rivergraph/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rivergraph/error.hpp"

namespace rivergraph::csv {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

Reader::Reader(const std::filesystem::path& path) : path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::string line;
  while (std::getline(in, line)) lines_.push_back(line);
  // Skip a UTF-8 byte order mark.
  if (!lines_.empty() && lines_[0].rfind("\xEF\xBB\xBF", 0) == 0) lines_[0].erase(0, 3);
  while (cursor_ < lines_.size() && trim(lines_[cursor_]).empty()) ++cursor_;
  if (cursor_ == lines_.size()) throw Error(Errc::parse_error, path.string() + ":1: missing header");
  header_ = split(lines_[cursor_]);
  line_no_ = ++cursor_;
}

std::optional<std::size_t> Reader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  return std::nullopt;
}

std::size_t Reader::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw Error(Errc::parse_error, path_.string() + ":1: header lacks column '" + std::string(name) + "'");
}

bool Reader::next(std::vector<std::string>& fields) {
  while (cursor_ < lines_.size()) {
    const std::string& raw = lines_[cursor_++];
    line_no_ = cursor_;
    if (trim(raw).empty()) continue;
    fields = split(raw);
    if (fields.size() != header_.size())
      fail("expected " + std::to_string(header_.size()) + " fields, found " + std::to_string(fields.size()));
    return true;
  }
  return false;
}

std::string Reader::where() const { return path_.string() + ":" + std::to_string(line_no_); }

void Reader::fail(const std::string& what) const { throw Error(Errc::parse_error, where() + ": " + what); }

double Reader::parse_double(const std::string& field, std::string_view column) const {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    fail("column '" + std::string(column) + "': not a number: '" + field + "'");
  return v;
}

unsigned long long Reader::parse_uint(const std::string& field, std::string_view column) const {
  unsigned long long v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    fail("column '" + std::string(column) + "': not a non-negative integer: '" + field + "'");
  return v;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

}  // namespace rivergraph::csv
