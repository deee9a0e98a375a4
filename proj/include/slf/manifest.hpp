#pragma once

#include <string>
#include <vector>

namespace slf::cli {

// Run provenance carried by every CLI artifact. The timestamp honors
// SOURCE_DATE_EPOCH so runs can be made byte-reproducible.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::string config_hash;
  std::string timestamp;
  std::vector<std::pair<std::string, std::string>> inputs;  // (path, digest)
  std::vector<std::string> outputs;

  std::string to_json(int indent = 2) const;
  // one-line comment form for CSV artifacts
  std::string csv_comment() const;
};

RunManifest make_manifest(const std::string& command, const std::string& config_content,
                          const std::vector<std::string>& input_paths);

extern const char* kToolVersion;

}  // namespace slf::cli
