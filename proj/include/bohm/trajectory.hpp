#pragma once
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bohm/contour.hpp"
#include "bohm/grid.hpp"

namespace bohm {

enum class SegmentClass : int { particle = 1, antiparticle = -1 };

struct TrajVertex {
  double x = 0, t = 0;
  int rho_sign = 0;
  double v = 0;
  bool divergent = false;
};

struct TrajPolyline {
  std::size_t level_id = 0;
  double level = 0;
  bool closed = false;
  std::vector<TrajVertex> vertices;
  // segments[i] joins vertices[i] and vertices[i+1] (wrapping when closed)
  std::vector<SegmentClass> segments;
};

enum class PairKind { creation, annihilation };

struct PairEvent {
  PairKind kind;
  double x, t;
  std::size_t line, vertex;
};

struct TrajectorySet {
  std::vector<double> levels;
  std::vector<TrajPolyline> lines;
  std::vector<PairEvent> events;
  GridField F, rho;
  bool resolution_warning = false;
  std::string warning;
};

struct LocalFlow {
  double rho, j;
  bool divergent;
  double v;
};

// Samples the density and current at an event.
using FlowFn = std::function<LocalFlow(double x, double t)>;

// Orients each contour along the worldline tangent (J, rho), classifies
// segments by the sign of rho at their midpoints and records a pair event
// wherever the class flips (annihilation at a local max of t, creation at a
// local min).
TrajectorySet annotate_contours(std::vector<ContourLine> lines, const FlowFn& flow);

// Evenly spaced levels strictly inside [lo, hi].
std::vector<double> even_levels(double lo, double hi, std::size_t n);

// Flags grids where F changes by more than one level spacing across a cell.
void check_resolution(TrajectorySet& ts, double spacing);

}  // namespace bohm
