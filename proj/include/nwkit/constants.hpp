#pragma once

#include <numbers>

namespace nwkit::constants {

// 2019 SI exact values; fixed at build time, not configurable.
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double planck = 6.62607015e-34;             // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);

// 2e^2/h, the conductance quantum (~77.48 uS).
inline constexpr double conductance_quantum =
    2.0 * elementary_charge * elementary_charge / planck;

struct PhysicalConstants {
    double e;
    double h;
    double hbar;
};

inline constexpr PhysicalConstants si{elementary_charge, planck, hbar};

} // namespace nwkit::constants
