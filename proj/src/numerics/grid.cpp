#include "bohm/grid.hpp"

#include <cmath>

#include "bohm/errors.hpp"

namespace bohm {

void Grid2D::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw ConfigError("grid: need finite x_min < x_max");
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_min < t_max))
    throw ConfigError("grid: need finite t_min < t_max");
  if (n_x < 2 || n_t < 2) throw ConfigError("grid: need n_x >= 2 and n_t >= 2");
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  const double h = (b - a) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + h * double(i);
  if (n > 1) out[n - 1] = b;
  return out;
}

}  // namespace bohm
