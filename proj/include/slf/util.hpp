#pragma once

#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace slf::util {

// FNV-1a 64-bit content hash (hex string); used for config/input digests.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::string fnv1a64_hex(const std::string& content);
std::string file_digest(const std::string& path);  // throws ConfigError if unreadable

// Deterministic float formatting: 9 significant digits, lowercase scientific.
std::string fmt_g9(double v);

std::vector<double> linspace(double a, double b, int n);

// Pairwise (tree) summation: deterministic order, low error growth.
double pairwise_sum(std::span<const double> v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Minimal ordered JSON emitter with fmt_g9 number formatting, so that CLI
// artifacts are byte-stable. Values are pre-rendered; keys keep insert order.
class JsonWriter {
 public:
  JsonWriter& field(const std::string& key, double v);
  JsonWriter& field(const std::string& key, int v);
  JsonWriter& field(const std::string& key, bool v);
  JsonWriter& field(const std::string& key, const std::string& v);
  JsonWriter& field_raw(const std::string& key, const std::string& raw_json);
  JsonWriter& field(const std::string& key, std::span<const double> arr);
  std::string str(int indent = 2) const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

std::string json_escape(const std::string& s);

}  // namespace slf::util
