#include "slf/manifest.hpp"

#include <cstdlib>
#include <ctime>

#include "slf/util.hpp"

namespace slf::cli {

const char* kToolVersion = "slf 1.0.0";

namespace {

std::string iso_utc(std::time_t t) {
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunManifest make_manifest(const std::string& command, const std::string& config_content,
                          const std::vector<std::string>& input_paths) {
  RunManifest m;
  m.command = command;
  m.tool_version = kToolVersion;
  m.config_hash = util::fnv1a64_hex(config_content);
  const char* sde = std::getenv("SOURCE_DATE_EPOCH");
  m.timestamp = iso_utc(sde ? static_cast<std::time_t>(std::atoll(sde)) : std::time(nullptr));
  for (const auto& p : input_paths) m.inputs.emplace_back(p, util::file_digest(p));
  return m;
}

std::string RunManifest::to_json(int indent) const {
  std::string ins = "[";
  for (size_t i = 0; i < inputs.size(); ++i) {
    if (i) ins += ", ";
    ins += "{\"path\": \"" + util::json_escape(inputs[i].first) + "\", \"digest\": \"" +
           inputs[i].second + "\"}";
  }
  ins += "]";
  std::string outs = "[";
  for (size_t i = 0; i < outputs.size(); ++i) {
    if (i) outs += ", ";
    outs += "\"" + util::json_escape(outputs[i]) + "\"";
  }
  outs += "]";
  util::JsonWriter w;
  w.field("command", command)
      .field("tool_version", tool_version)
      .field("config_hash", config_hash)
      .field("timestamp", timestamp)
      .field_raw("inputs", ins)
      .field_raw("outputs", outs);
  return w.str(indent);
}

std::string RunManifest::csv_comment() const {
  return "# " + std::string(tool_version) + " command=" + command + " config_hash=" + config_hash +
         " timestamp=" + timestamp;
}

}  // namespace slf::cli
