#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace mfcnet {

// Shortest round-trip representation of a double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Comma-separated writer: optional '#' comment line, then a header row.
class Csv {
 public:
  Csv(const std::string& path, const std::string& comment, const std::string& header)
      : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    if (!comment.empty()) out_ << "# " << comment << '\n';
    out_ << header << '\n';
  }

  Csv& field(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
  }
  Csv& field(double v) { return field(format_double(v)); }
  Csv& field(int64_t v) { return field(std::to_string(v)); }
  Csv& field(int v) { return field(std::to_string(v)); }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace mfcnet
