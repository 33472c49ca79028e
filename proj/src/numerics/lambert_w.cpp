#include "bohm/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

constexpr double inv_e = 1.0 / std::numbers::e;

// Series in p = sqrt(2(e y + 1)) about the branch point; sign +1 for W0.
double branch_series(double p, double sign) {
  const double q = sign * p;
  return -1.0 + q - q * q / 3.0 + 11.0 / 72.0 * q * q * q - 43.0 / 540.0 * q * q * q * q;
}

double halley(double w, double y) {
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - y;
    const double tol = 1e-15 * std::abs(y);
    if (std::abs(f) <= tol) break;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    const double next = w - step;
    if (!std::isfinite(next)) break;
    if (next == w) break;
    w = next;
  }
  return w;
}

}  // namespace

double lambert_w(int branch, double y) {
  if (std::isnan(y)) throw DomainError("lambert_w: NaN argument");
  if (branch != 0 && branch != -1) throw DomainError("lambert_w: branch must be 0 or -1");
  // Allow the last ulp below -1/e to land on the branch point.
  const double lo = -inv_e;
  if (y < lo) {
    if (lo - y <= 4 * std::numeric_limits<double>::epsilon()) return -1.0;
    throw DomainError("lambert_w: argument below -1/e: " + std::to_string(y));
  }
  if (branch == -1 && y >= 0.0) throw DomainError("lambert_w: branch -1 needs y < 0");
  if (!std::isfinite(y)) throw DomainError("lambert_w: infinite argument");

  const double p2 = 2.0 * (std::numbers::e * y + 1.0);
  const double p = std::sqrt(std::max(0.0, p2));
  if (p == 0.0) return -1.0;

  double w;
  if (branch == 0) {
    if (y == 0.0) return 0.0;
    if (p < 0.5)
      w = branch_series(p, 1.0);
    else if (y < 3.0)
      w = std::log1p(y) * (1.0 - std::log1p(std::log1p(y)) / (2.0 + std::log1p(y)));
    else {
      const double l1 = std::log(y), l2 = std::log(l1);
      w = l1 - l2 + l2 / l1;
    }
  } else {
    if (p < 0.5)
      w = branch_series(p, -1.0);
    else {
      const double l1 = std::log(-y), l2 = std::log(-l1);
      w = l1 - l2 + l2 / l1;
      if (w > -1.0) w = -1.0 - p;
    }
  }
  // Very close to the branch point the series is already exact to rounding
  // and Halley steps only amplify noise in f'(w) ~ 0.
  if (p < 1e-4) return w;
  return halley(w, y);
}

}  // namespace bohm
