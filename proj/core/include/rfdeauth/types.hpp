#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace rfdeauth {

// Index on the sampling grid. Time t in seconds is tick / sample_rate_hz.
using Tick = std::int64_t;

struct Point {
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Ordered (transmitter, receiver) device pair.
struct StreamId {
  int tx{0};
  int rx{0};

  friend auto operator<=>(const StreamId&, const StreamId&) = default;
};

// Event / class label. Index 0 is reserved for "user entered the office";
// index i >= 1 means "user left workstation w_i".
struct Label {
  int index{0};

  static constexpr Label entry() { return Label{0}; }
  bool is_entry() const { return index == 0; }
  std::string str() const { return "w" + std::to_string(index); }

  friend auto operator<=>(const Label&, const Label&) = default;
};

// Parses "w<k>", k >= 0. Throws InputError on anything else.
Label parse_label(const std::string& text);

// Parses "d<k>" or a bare integer, k >= 1.
int parse_device_id(const std::string& text);

}  // namespace rfdeauth
