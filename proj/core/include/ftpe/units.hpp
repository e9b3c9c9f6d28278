#pragma once

// Unit system: energies in meV, times in ps, angular frequencies in rad/ps.

namespace ftpe {

/// Reduced Planck constant in meV·ps.
inline constexpr double kHbar = 0.6582119569;

inline constexpr double kPi = 3.14159265358979323846;

/// meV -> rad/ps
constexpr double to_angular(double energy_meV) { return energy_meV / kHbar; }

/// rad/ps -> meV
constexpr double to_energy(double omega) { return omega * kHbar; }

}  // namespace ftpe
