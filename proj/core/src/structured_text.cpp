#include "rfdeauth/structured_text.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rfdeauth/error.hpp"

namespace rfdeauth {

const TextEntry* TextSection::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const TextSection* TextDocument::section(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return std::string(s.substr(first, last - first + 1));
}

TextDocument parse_structured_text(std::string_view text, std::string source) {
  TextDocument doc;
  doc.source = std::move(source);
  doc.sections.push_back(TextSection{});

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto content = trim(line);
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content.back() != ']' || content.size() < 3) {
        throw InputError(doc.source + ":" + std::to_string(line_no) + ": malformed section header '" +
                         content + "'");
      }
      TextSection s;
      s.name = trim(std::string_view(content).substr(1, content.size() - 2));
      s.line = line_no;
      doc.sections.push_back(std::move(s));
      continue;
    }

    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw InputError(doc.source + ":" + std::to_string(line_no) + ": expected 'key = value', got '" +
                       content + "'");
    }
    TextEntry e;
    e.key = trim(std::string_view(content).substr(0, eq));
    e.value = trim(std::string_view(content).substr(eq + 1));
    e.line = line_no;
    if (e.key.empty()) {
      throw InputError(doc.source + ":" + std::to_string(line_no) + ": empty key");
    }
    doc.sections.back().entries.push_back(std::move(e));
  }
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TextDocument load_structured_text(const std::filesystem::path& path) {
  return parse_structured_text(read_file(path), path.string());
}

namespace {

std::string where(const TextDocument& doc, const TextEntry& e) {
  return doc.source + ":" + std::to_string(e.line) + ": key '" + e.key + "'";
}

}  // namespace

double parse_double(const TextDocument& doc, const TextEntry& e) {
  double v = 0.0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  if (!e.value.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw InputError(where(doc, e) + ": expected a number, got '" + e.value + "'");
  }
  return v;
}

long long parse_integer(const TextDocument& doc, const TextEntry& e) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size()) {
    throw InputError(where(doc, e) + ": expected an integer, got '" + e.value + "'");
  }
  return v;
}

std::vector<std::string> split_list(std::string_view value, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = value.find(sep, pos);
    out.push_back(trim(value.substr(pos, next == std::string_view::npos ? value.size() - pos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace rfdeauth
