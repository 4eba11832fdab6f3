#ifndef CONTROVERSY_CSV_HPP
#define CONTROVERSY_CSV_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "controversy/errors.hpp"

namespace controversy {

// Shortest decimal representation that round-trips; locale independent.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

// RFC 4180 quoting: quote fields containing comma, quote, CR or LF.
inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    path_ = path;
  }

  void row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) line.push_back(',');
      line += csv_escape(fields[i]);
    }
    line.push_back('\n');
    out_ << line;
    if (!out_) fail(ErrorCode::io_error, "write failed on '" + path_ + "'");
  }

 private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace controversy

#endif  // CONTROVERSY_CSV_HPP
