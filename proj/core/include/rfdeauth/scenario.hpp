#pragma once

#include <cstdint>

#include "rfdeauth/config.hpp"
#include "rfdeauth/rfsim.hpp"

namespace rfdeauth {

// 8 x 6 m office, door on the bottom wall, three workstations and nine
// wall-mounted sensors.
FloorPlan reference_plan();

// Defaults with the MD window shortened to suit the synthetic channel.
Config reference_config();

// Per-reading shadowing noise used with the reference plan, dB.
inline constexpr double kReferenceNoiseSigma = 0.5;

struct ScenarioOptions {
  int departures{60};      // each followed by the same user's return
  double first_event{150.0};
  double min_gap{600.0};   // quiet time between consecutive movements, seconds
  double max_gap{1700.0};
  double fidget_every{90.0};  // mean spacing of seated fidgets, seconds (0 disables)
  double fidget_min{0.5};
  double fidget_max{2.5};
  double margin{15.0};     // fidget-free time around walks and between fidgets
  double door_time{1.0};   // opening the door between reaching it and Exit
  double tail{60.0};       // trace continues this long after the last movement
  std::uint64_t seed{7};
};

// Departure -> exit at the door -> later entry by the same user, repeated.
// Event times lie on the sampling grid.
MovementScript reference_script(const FloorPlan& plan, const ScenarioOptions& options, double sample_rate_hz);

}  // namespace rfdeauth
