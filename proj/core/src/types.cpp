#include "rfdeauth/types.hpp"

#include <charconv>

#include "rfdeauth/error.hpp"

namespace rfdeauth {

namespace {

bool parse_index(std::string_view digits, int& out) {
  if (digits.empty()) return false;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  return ec == std::errc{} && ptr == digits.data() + digits.size();
}

}  // namespace

Label parse_label(const std::string& text) {
  int index = 0;
  if (text.size() < 2 || text.front() != 'w' || !parse_index(std::string_view(text).substr(1), index) ||
      index < 0) {
    throw InputError("invalid label '" + text + "' (expected w<k>)");
  }
  return Label{index};
}

int parse_device_id(const std::string& text) {
  std::string_view digits = text;
  if (!digits.empty() && digits.front() == 'd') digits.remove_prefix(1);
  int id = 0;
  if (!parse_index(digits, id) || id < 1) {
    throw InputError("invalid device id '" + text + "' (expected d<k> or k >= 1)");
  }
  return id;
}

}  // namespace rfdeauth
