#include "bohm/contour.hpp"

#include <array>
#include <cmath>
#include <unordered_map>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

// Edge key: horizontal edge (i,j)-(i+1,j) -> 2*(j*nx+i); vertical (i,j)-(i,j+1) -> 2*(j*nx+i)+1.
struct Seg {
  std::size_t e0, e1;
};

struct LevelContext {
  const GridField& f;
  double level;
  std::size_t nx, nt;

  double val(std::size_t i, std::size_t j) const { return f.v[j * nx + i]; }

  ContourPoint point_on(std::size_t key) const {
    const std::size_t node = key / 2;
    const std::size_t i = node % nx, j = node / nx;
    const double v0 = val(i, j);
    const bool vert = key % 2 == 1;
    const double v1 = vert ? val(i, j + 1) : val(i + 1, j);
    double s = (level - v0) / (v1 - v0);
    if (!std::isfinite(s)) s = 0.5;
    s = std::min(1.0, std::max(0.0, s));
    const double x0 = f.grid.x(i), t0 = f.grid.t(j);
    if (vert) return {x0, t0 + s * (f.grid.t(j + 1) - t0)};
    return {x0 + s * (f.grid.x(i + 1) - x0), t0};
  }
};

}  // namespace

std::vector<ContourLine> extract_contours(const GridField& field, std::span<const double> levels) {
  field.grid.validate();
  const std::size_t nx = field.grid.n_x, nt = field.grid.n_t;
  if (field.v.size() != nx * nt) throw DomainError("extract_contours: value count does not match grid");
  for (double v : field.v)
    if (!std::isfinite(v)) throw DomainError("extract_contours: non-finite node value");

  std::vector<ContourLine> out;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double lev = levels[li];
    LevelContext ctx{field, lev, nx, nt};
    std::vector<Seg> segs;
    for (std::size_t j = 0; j + 1 < nt; ++j) {
      for (std::size_t i = 0; i + 1 < nx; ++i) {
        const double v00 = ctx.val(i, j), v10 = ctx.val(i + 1, j);
        const double v11 = ctx.val(i + 1, j + 1), v01 = ctx.val(i, j + 1);
        const int code = (v00 >= lev ? 1 : 0) | (v10 >= lev ? 2 : 0) | (v11 >= lev ? 4 : 0) | (v01 >= lev ? 8 : 0);
        if (code == 0 || code == 15) continue;
        const std::size_t bottom = 2 * (j * nx + i), top = 2 * ((j + 1) * nx + i);
        const std::size_t left = 2 * (j * nx + i) + 1, right = 2 * (j * nx + i + 1) + 1;
        auto add = [&](std::size_t a, std::size_t b) { segs.push_back({a, b}); };
        switch (code) {
          case 1: case 14: add(left, bottom); break;
          case 2: case 13: add(bottom, right); break;
          case 3: case 12: add(left, right); break;
          case 4: case 11: add(right, top); break;
          case 6: case 9: add(bottom, top); break;
          case 7: case 8: add(left, top); break;
          case 5: case 10: {
            const bool centre_in = 0.25 * (v00 + v10 + v11 + v01) >= lev;
            // Cut off corners 10 and 01, or corners 00 and 11.
            if ((code == 5) == centre_in) {
              add(bottom, right);
              add(left, top);
            } else {
              add(left, bottom);
              add(right, top);
            }
            break;
          }
          default: break;
        }
      }
    }
    if (segs.empty()) continue;

    // Each crossed edge is shared by at most two segments.
    std::unordered_map<std::size_t, std::array<std::size_t, 2>> by_edge;
    by_edge.reserve(segs.size() * 2);
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    for (std::size_t s = 0; s < segs.size(); ++s) {
      for (std::size_t e : {segs[s].e0, segs[s].e1}) {
        auto [it, fresh] = by_edge.try_emplace(e, std::array<std::size_t, 2>{none, none});
        (it->second[0] == none ? it->second[0] : it->second[1]) = s;
      }
    }
    std::vector<bool> used(segs.size(), false);
    auto other_seg = [&](std::size_t e, std::size_t s) {
      const auto& pr = by_edge.at(e);
      return pr[0] == s ? pr[1] : pr[0];
    };
    auto walk = [&](std::size_t s, std::size_t from_edge, ContourLine& line) {
      std::size_t edge = from_edge;
      line.pts.push_back(ctx.point_on(edge));
      while (s != none && !used[s]) {
        used[s] = true;
        const std::size_t next_edge = segs[s].e0 == edge ? segs[s].e1 : segs[s].e0;
        edge = next_edge;
        const std::size_t ns = other_seg(edge, s);
        if (ns != none && used[ns]) {
          // returned to the start: closed loop, do not repeat the point
          line.closed = true;
          break;
        }
        line.pts.push_back(ctx.point_on(edge));
        s = ns;
      }
    };
    // Open lines start at edges touched by a single segment (grid boundary).
    // Iterate segments in creation order so output order is deterministic.
    for (std::size_t s = 0; s < segs.size(); ++s) {
      if (used[s]) continue;
      for (std::size_t e : {segs[s].e0, segs[s].e1}) {
        if (used[s]) break;
        if (other_seg(e, s) == none) {
          ContourLine line;
          line.level_id = li;
          line.level = lev;
          walk(s, e, line);
          line.closed = false;
          out.push_back(std::move(line));
        }
      }
    }
    for (std::size_t s = 0; s < segs.size(); ++s) {
      if (used[s]) continue;
      ContourLine line;
      line.level_id = li;
      line.level = lev;
      walk(s, segs[s].e0, line);
      line.closed = true;
      out.push_back(std::move(line));
    }
  }
  return out;
}

}  // namespace bohm
