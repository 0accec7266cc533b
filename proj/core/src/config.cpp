#include "rfdeauth/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "rfdeauth/error.hpp"
#include "rfdeauth/structured_text.hpp"

namespace rfdeauth {

Tick Config::ticks(double secs) const { return static_cast<Tick>(std::llround(secs * sample_rate_hz)); }

void validate(const Config& c) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ValidationError("config key '" + key + "': " + why);
  };
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be > 0");
  };
  positive("sample_rate_hz", c.sample_rate_hz);
  positive("d", c.d);
  positive("t_delta", c.t_delta);
  positive("t_id", c.t_id);
  positive("t_ss", c.t_ss);
  positive("T", c.T);
  positive("delta", c.delta);
  positive("entropy_bin_width", c.entropy_bin_width);
  positive("profile_bootstrap", c.profile_bootstrap);
  if (!(c.alpha > 0.0 && c.alpha < 100.0)) fail("alpha", "must lie in (0, 100)");
  if (!(c.tau >= 0.0 && c.tau <= 1.0)) fail("tau", "must lie in [0, 1]");
  if (c.b < 1) fail("b", "must be >= 1");
  if (c.ac_lag < 1) fail("ac_lag", "must be >= 1");
  if (c.coalesce_gap < 0) fail("coalesce_gap", "must be >= 0");
  if (!(c.t_delta < c.T)) fail("t_delta", "must be smaller than T");
  if (c.kde_bandwidth_rule.kind == BandwidthRule::Kind::Fixed && !(c.kde_bandwidth_rule.h > 0.0)) {
    fail("kde_bandwidth_rule", "explicit bandwidth must be > 0");
  }
  if (c.ticks(c.t_delta) < 1) fail("t_delta", "shorter than one sampling tick");
  if (c.ticks(c.d) < 1) fail("d", "shorter than one sampling tick");
}

Config parse_config(const std::string& text, const std::string& source) {
  const auto doc = parse_structured_text(text, source);
  if (doc.sections.size() > 1) {
    throw InputError(source + ":" + std::to_string(doc.sections[1].line) + ": config files have no sections");
  }

  Config c;
  using Setter = std::function<void(const TextEntry&)>;
  const std::map<std::string, Setter> setters = {
      {"sample_rate_hz", [&](const TextEntry& e) { c.sample_rate_hz = parse_double(doc, e); }},
      {"d", [&](const TextEntry& e) { c.d = parse_double(doc, e); }},
      {"t_delta", [&](const TextEntry& e) { c.t_delta = parse_double(doc, e); }},
      {"alpha", [&](const TextEntry& e) { c.alpha = parse_double(doc, e); }},
      {"b", [&](const TextEntry& e) { c.b = static_cast<int>(parse_integer(doc, e)); }},
      {"tau", [&](const TextEntry& e) { c.tau = parse_double(doc, e); }},
      {"t_id", [&](const TextEntry& e) { c.t_id = parse_double(doc, e); }},
      {"t_ss", [&](const TextEntry& e) { c.t_ss = parse_double(doc, e); }},
      {"T", [&](const TextEntry& e) { c.T = parse_double(doc, e); }},
      {"delta", [&](const TextEntry& e) { c.delta = parse_double(doc, e); }},
      {"ac_lag", [&](const TextEntry& e) { c.ac_lag = static_cast<int>(parse_integer(doc, e)); }},
      {"entropy_bin_width", [&](const TextEntry& e) { c.entropy_bin_width = parse_double(doc, e); }},
      {"kde_bandwidth_rule",
       [&](const TextEntry& e) {
         if (e.value == "silverman" || e.value == "Silverman") {
           c.kde_bandwidth_rule = BandwidthRule::silverman();
         } else {
           c.kde_bandwidth_rule = BandwidthRule::fixed(parse_double(doc, e));
         }
       }},
      {"profile_bootstrap", [&](const TextEntry& e) { c.profile_bootstrap = parse_double(doc, e); }},
      {"coalesce_gap", [&](const TextEntry& e) { c.coalesce_gap = static_cast<int>(parse_integer(doc, e)); }},
  };

  std::map<std::string, std::size_t> seen;
  for (const auto& e : doc.root().entries) {
    const auto it = setters.find(e.key);
    if (it == setters.end()) {
      throw InputError(source + ":" + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    }
    if (const auto prev = seen.find(e.key); prev != seen.end()) {
      throw InputError(source + ":" + std::to_string(e.line) + ": key '" + e.key +
                       "' already set on line " + std::to_string(prev->second));
    }
    seen.emplace(e.key, e.line);
    it->second(e);
  }
  validate(c);
  return c;
}

Config load_config(const std::filesystem::path& path) { return parse_config(read_file(path), path.string()); }

std::string serialize_config(const Config& c) {
  std::ostringstream out;
  auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
  kv("sample_rate_hz", format_double(c.sample_rate_hz));
  kv("d", format_double(c.d));
  kv("t_delta", format_double(c.t_delta));
  kv("alpha", format_double(c.alpha));
  kv("b", std::to_string(c.b));
  kv("tau", format_double(c.tau));
  kv("t_id", format_double(c.t_id));
  kv("t_ss", format_double(c.t_ss));
  kv("T", format_double(c.T));
  kv("delta", format_double(c.delta));
  kv("ac_lag", std::to_string(c.ac_lag));
  kv("entropy_bin_width", format_double(c.entropy_bin_width));
  kv("kde_bandwidth_rule", c.kde_bandwidth_rule.kind == BandwidthRule::Kind::Silverman
                               ? std::string("silverman")
                               : format_double(c.kde_bandwidth_rule.h));
  kv("profile_bootstrap", format_double(c.profile_bootstrap));
  kv("coalesce_gap", std::to_string(c.coalesce_gap));
  return out.str();
}

}  // namespace rfdeauth
