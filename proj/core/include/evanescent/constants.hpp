#pragma once

namespace evanescent {

/// Fundamental constants used throughout the library (CODATA 2018, SI units).
/// Immutable: every computation in the library refers to this single instance.
struct PhysicalConstants {
  double hbar;           ///< reduced Planck constant [J s]
  double c;              ///< speed of light in vacuum [m/s]
  double electron_volt;  ///< one electron volt [J]
};

inline constexpr PhysicalConstants kCodata2018{
    1.054571817e-34,
    2.99792458e8,
    1.602176634e-19,
};

constexpr double ev_to_joule(double energy_ev) {
  return energy_ev * kCodata2018.electron_volt;
}

constexpr double joule_to_ev(double energy_j) {
  return energy_j / kCodata2018.electron_volt;
}

}  // namespace evanescent
