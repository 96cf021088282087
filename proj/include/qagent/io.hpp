// CSV helpers shared by the command-line tools.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qagent::io {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) {
    while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
    std::size_t b = 0;
    while (b < cur.size() && cur[b] == ' ') ++b;
    out.push_back(cur.substr(b));
  }
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

/// Parses the whole field as a finite double.
inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == s.size() && std::isfinite(out);
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  }

  void row(const std::vector<std::string>& fields) { out_ << join(fields, ',') << '\n'; }

  void flush() { out_.flush(); }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace qagent::io
