#include "slf/util.hpp"

#include <cstdio>
#include <fstream>

#include "slf/errors.hpp"

namespace slf::util {

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& content) {
  auto h = fnv1a64({reinterpret_cast<const unsigned char*>(content.data()), content.size()});
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

std::string file_digest(const std::string& path) { return fnv1a64_hex(read_file(path)); }

std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

JsonWriter& JsonWriter::field(const std::string& key, double v) {
  items_.emplace_back(key, fmt_g9(v));
  return *this;
}
JsonWriter& JsonWriter::field(const std::string& key, int v) {
  items_.emplace_back(key, std::to_string(v));
  return *this;
}
JsonWriter& JsonWriter::field(const std::string& key, bool v) {
  items_.emplace_back(key, v ? "true" : "false");
  return *this;
}
JsonWriter& JsonWriter::field(const std::string& key, const std::string& v) {
  items_.emplace_back(key, "\"" + json_escape(v) + "\"");
  return *this;
}
JsonWriter& JsonWriter::field_raw(const std::string& key, const std::string& raw_json) {
  items_.emplace_back(key, raw_json);
  return *this;
}
JsonWriter& JsonWriter::field(const std::string& key, std::span<const double> arr) {
  std::string s = "[";
  for (size_t i = 0; i < arr.size(); ++i) {
    if (i) s += ", ";
    s += fmt_g9(arr[i]);
  }
  s += "]";
  items_.emplace_back(key, s);
  return *this;
}

std::string JsonWriter::str(int indent) const {
  std::string pad(static_cast<size_t>(indent), ' ');
  std::string out = "{\n";
  for (size_t i = 0; i < items_.size(); ++i) {
    out += pad + "\"" + json_escape(items_[i].first) + "\": " + items_[i].second;
    if (i + 1 < items_.size()) out += ",";
    out += "\n";
  }
  out += "}";
  return out;
}

}  // namespace slf::util
