#pragma once
#include <cstddef>
#include <vector>

namespace bohm {

struct Grid2D {
  double x_min = 0, x_max = 1;
  std::size_t n_x = 2;
  double t_min = 0, t_max = 1;
  std::size_t n_t = 2;

  void validate() const;  // throws ConfigError
  double dx() const { return (x_max - x_min) / double(n_x - 1); }
  double dt() const { return (t_max - t_min) / double(n_t - 1); }
  double x(std::size_t i) const { return x_min + dx() * double(i); }
  double t(std::size_t j) const { return t_min + dt() * double(j); }
};

// Node values stored x-fastest: v[j * n_x + i] at (x_i, t_j).
struct GridField {
  Grid2D grid;
  std::vector<double> v;
  double at(std::size_t i, std::size_t j) const { return v[j * grid.n_x + i]; }
};

std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace bohm
