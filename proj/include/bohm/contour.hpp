#pragma once
#include <cstddef>
#include <span>
#include <vector>

#include "bohm/grid.hpp"

namespace bohm {

struct ContourPoint {
  double x, t;
};

struct ContourLine {
  std::size_t level_id = 0;
  double level = 0.0;
  bool closed = false;
  std::vector<ContourPoint> pts;  // closed lines do not repeat the first point
};

// Marching squares. Saddle cells are resolved with the mean of the four
// corners as the centre sample. Nodes with value >= level count as inside.
std::vector<ContourLine> extract_contours(const GridField& field, std::span<const double> levels);

}  // namespace bohm
