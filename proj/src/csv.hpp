#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>

namespace ndlab::csv {

// RFC 4180: quote fields containing separators, quotes or line breaks.
inline std::string field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Writer {
 public:
  template <typename... Cols>
  void row(const Cols&... cols) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cols), first = false), ...);
    os_ << "\n";
  }
  std::string str() const { return os_.str(); }

 private:
  static std::string cell(const std::string& s) { return field(s); }
  static std::string cell(const char* s) { return field(s); }
  static std::string cell(double v) { return num(v); }
  template <typename T>
  static std::string cell(const T& v) {
    return std::to_string(v);
  }

  std::ostringstream os_;
};

}  // namespace ndlab::csv
