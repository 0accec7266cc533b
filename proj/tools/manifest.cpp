#include "manifest.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>

#include "json.hpp"
#include "rfdeauth/error.hpp"

namespace rfdeauth::cli {

std::string manifest_timestamp() {
  std::time_t when = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (*end != '\0' || v < 0) throw InputError(std::string("SOURCE_DATE_EPOCH is not a timestamp: ") + env);
    when = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&when, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "rfdeauth";
  j["subcommand"] = m.subcommand;
  j["config"] = m.config;
  j["seed"] = m.seed;
  auto& inputs = j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [role, p] : m.inputs) inputs[role] = p;
  auto& params = j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.parameters) params[k] = v;
  j["outputs"] = m.outputs;
  j["timestamp"] = manifest_timestamp();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace rfdeauth::cli
