// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mmw {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Linear values below this are clamped before taking logarithms. Raw SNR
// estimates can be negative, so every dB conversion in the pipeline goes
// through linear_to_db.
inline constexpr double kLinearFloor = 1e-12;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear) {
    return 10.0 * std::log10(std::max(linear, kLinearFloor));
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace mmw
