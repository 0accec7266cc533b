#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rfdeauth {

// Flat `key = value` documents with `#` comments and optional `[section]`
// headers. Keys may repeat inside a section (list sections).
struct TextEntry {
  std::string key;
  std::string value;
  std::size_t line{0};
};

struct TextSection {
  std::string name;  // empty for the leading, unnamed section
  std::size_t line{0};
  std::vector<TextEntry> entries;

  const TextEntry* find(std::string_view key) const;
};

struct TextDocument {
  std::string source;  // file path or "<string>" for diagnostics
  std::vector<TextSection> sections;

  const TextSection& root() const { return sections.front(); }
  const TextSection* section(std::string_view name) const;
};

TextDocument parse_structured_text(std::string_view text, std::string source = "<string>");
TextDocument load_structured_text(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

// Value helpers; errors name the source, line and key.
double parse_double(const TextDocument& doc, const TextEntry& e);
long long parse_integer(const TextDocument& doc, const TextEntry& e);
std::vector<std::string> split_list(std::string_view value, char sep = ',');
std::string trim(std::string_view s);

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace rfdeauth
