#pragma once

// Locale-independent CSV emission: '.' decimal point, %.17g reals, header row
// first. Byte-identical output for identical data.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluctlab {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<std::string> header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    bool first = true;
    for (const auto& h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }

  static std::string field(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
  }
  static std::string field(int x) { return std::to_string(x); }
  static std::string field(std::int64_t x) { return std::to_string(x); }
  static std::string field(std::uint64_t x) { return std::to_string(x); }
  static std::string field(const std::string& x) { return x; }
  static std::string field(const char* x) { return x; }

  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    auto emit = [&](const std::string& s) {
      if (!first) out_ << ',';
      out_ << s;
      first = false;
    };
    (emit(field(cells)), ...);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

// Minimal CSV reading for the ou-compare input path.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace fluctlab
