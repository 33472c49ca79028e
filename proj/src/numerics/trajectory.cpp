#include "bohm/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "bohm/errors.hpp"

namespace bohm {

std::vector<double> even_levels(double lo, double hi, std::size_t n) {
  if (n == 0) throw ConfigError("n_levels must be positive");
  std::vector<double> out(n);
  const double h = (hi - lo) / double(n + 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + h * double(i + 1);
  return out;
}

TrajectorySet annotate_contours(std::vector<ContourLine> lines, const FlowFn& flow) {
  TrajectorySet ts;
  for (auto& cl : lines) {
    const std::size_t nv = cl.pts.size();
    if (nv < 2) continue;
    const std::size_t nseg = cl.closed ? nv : nv - 1;
    std::vector<double> mid_rho(nseg), mid_j(nseg);
    double orient = 0.0;
    for (std::size_t s = 0; s < nseg; ++s) {
      const auto& p = cl.pts[s];
      const auto& q = cl.pts[(s + 1) % nv];
      const LocalFlow lf = flow(0.5 * (p.x + q.x), 0.5 * (p.t + q.t));
      mid_rho[s] = lf.rho;
      mid_j[s] = lf.j;
      const double w = (q.x - p.x) * lf.j + (q.t - p.t) * lf.rho;
      orient += w / (std::abs(lf.j) + std::abs(lf.rho) + 1e-300);
    }
    if (orient < 0) {
      // Reversed segment s joins original vertices nv-1-s and nv-2-s.
      std::reverse(cl.pts.begin(), cl.pts.end());
      std::vector<double> r2(nseg), j2(nseg);
      for (std::size_t s = 0; s < nseg; ++s) {
        const std::size_t src = (2 * nv - 2 - s) % nv;
        r2[s] = mid_rho[src];
        j2[s] = mid_j[src];
      }
      mid_rho.swap(r2);
      mid_j.swap(j2);
    }

    TrajPolyline pl;
    pl.level_id = cl.level_id;
    pl.level = cl.level;
    pl.closed = cl.closed;
    pl.vertices.reserve(nv);
    for (const auto& p : cl.pts) {
      const LocalFlow lf = flow(p.x, p.t);
      TrajVertex v;
      v.x = p.x;
      v.t = p.t;
      v.rho_sign = lf.rho > 0 ? 1 : (lf.rho < 0 ? -1 : 0);
      v.divergent = lf.divergent;
      v.v = lf.divergent ? 0.0 : lf.v;
      pl.vertices.push_back(v);
    }
    pl.segments.resize(nseg);
    for (std::size_t s = 0; s < nseg; ++s)
      pl.segments[s] = mid_rho[s] >= 0 ? SegmentClass::particle : SegmentClass::antiparticle;

    const std::size_t li = ts.lines.size();
    for (std::size_t s = 0; s + 1 < nseg + (cl.closed ? 1 : 0); ++s) {
      const std::size_t a = s, b = (s + 1) % nseg;
      if (pl.segments[a] == pl.segments[b]) continue;
      const std::size_t vtx = (s + 1) % nv;
      const PairKind k = pl.segments[a] == SegmentClass::particle ? PairKind::annihilation : PairKind::creation;
      ts.events.push_back({k, pl.vertices[vtx].x, pl.vertices[vtx].t, li, vtx});
    }
    ts.lines.push_back(std::move(pl));
  }
  return ts;
}

void check_resolution(TrajectorySet& ts, double spacing) {
  const auto& g = ts.F.grid;
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < g.n_t; ++j)
    for (std::size_t i = 0; i + 1 < g.n_x; ++i) {
      const double a = ts.F.at(i, j), b = ts.F.at(i + 1, j), c = ts.F.at(i, j + 1), d = ts.F.at(i + 1, j + 1);
      worst = std::max(worst, std::max({a, b, c, d}) - std::min({a, b, c, d}));
    }
  if (worst > spacing) {
    ts.resolution_warning = true;
    ts.warning = "F varies by " + std::to_string(worst) + " across one cell, more than the level spacing " +
                 std::to_string(spacing) + "; refine the grid";
  }
}

}  // namespace bohm
