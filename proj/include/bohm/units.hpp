#pragma once

// Natural units: hbar = c = m0 = 1. Lengths are Compton wavelengths and
// times are Compton times. The constants below are kept so that formulas
// read like their dimensional versions.
namespace bohm::units {

inline constexpr double hbar = 1.0;
inline constexpr double c = 1.0;
inline constexpr double m0 = 1.0;
inline constexpr double lambda_c = hbar / (m0 * c);

inline constexpr const char* note =
    "natural units hbar=c=m0=1; lengths in Compton wavelengths, times in Compton times";

}  // namespace bohm::units
