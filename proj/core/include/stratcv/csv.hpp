#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stratcv::csv {

/// Shortest-form-independent rendering: always 17 significant digits, so
/// parsing the text gives back the same double.
std::string format_double(double v);

double parse_double(std::string_view text);
unsigned long long parse_u64(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

/// Accumulates rows in memory; files are written in one shot so a failed
/// run never leaves a half-written CSV behind.
class Writer {
 public:
  explicit Writer(const std::vector<std::string>& header);

  Writer& field(std::string_view s);
  Writer& field(double v);
  Writer& field(long long v);
  Writer& field(unsigned long long v);
  Writer& field(std::size_t v) { return field(static_cast<unsigned long long>(v)); }
  Writer& field(int v) { return field(static_cast<long long>(v)); }
  void end_row();

  const std::string& str() const { return buf_; }
  void save(const std::filesystem::path& path) const;

 private:
  void sep();

  std::string buf_;
  bool row_open_ = false;
};

void write_file(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace stratcv::csv
