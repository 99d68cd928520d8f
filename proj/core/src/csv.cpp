#include "stratcv/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stratcv/error.hpp"

namespace stratcv::csv {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("not a real number: '" + std::string(text) + "'");
  }
  return v;
}

unsigned long long parse_u64(std::string_view text) {
  unsigned long long v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

Writer::Writer(const std::vector<std::string>& header) {
  for (const auto& h : header) field(h);
  end_row();
}

void Writer::sep() {
  if (row_open_) buf_.push_back(',');
  row_open_ = true;
}

Writer& Writer::field(std::string_view s) {
  sep();
  buf_.append(s);
  return *this;
}

Writer& Writer::field(double v) { return field(std::string_view(format_double(v))); }

Writer& Writer::field(long long v) {
  sep();
  buf_.append(std::to_string(v));
  return *this;
}

Writer& Writer::field(unsigned long long v) {
  sep();
  buf_.append(std::to_string(v));
  return *this;
}

void Writer::end_row() {
  buf_.push_back('\n');
  row_open_ = false;
}

void Writer::save(const std::filesystem::path& path) const { write_file(path, buf_); }

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stratcv::csv
