#pragma once

#include <cmath>
#include <initializer_list>
#include <limits>

namespace fdsi {

inline constexpr double kPi = 3.14159265358979323846;

/// Power ratio in dB. Zero maps to -infinity.
inline double to_db(double ratio) {
  if (ratio <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ratio);
}

inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

inline double dbm_to_watts(double dbm) { return from_db(dbm - 30.0); }

inline double watts_to_dbm(double watts) { return to_db(watts) + 30.0; }

/// Exact linear-domain sum of dB-valued powers. -inf entries contribute nothing.
inline double power_sum_db(std::initializer_list<double> levels_db) {
  double total = 0.0;
  for (double level : levels_db) {
    if (std::isfinite(level)) total += from_db(level);
  }
  return to_db(total);
}

}  // namespace fdsi
