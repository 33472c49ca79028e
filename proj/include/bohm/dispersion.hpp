#pragma once
#include <cmath>

#include "bohm/units.hpp"

namespace bohm {

inline double omega(double k) { return std::hypot(units::m0 * units::c, k); }

inline double group_velocity(double k) { return k / omega(k); }

}  // namespace bohm
