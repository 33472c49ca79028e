#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "bohm/errors.hpp"
#include "bohm/nw.hpp"
#include "bohm/parallel.hpp"
#include "common.hpp"

namespace bohm::cli {

namespace {

std::vector<double> times(const json& j, const char* key) {
  std::vector<double> t = numbers(j, key, "");
  for (double v : t)
    if (v < 0) throw ConfigError(std::string("config: ") + key + " must not contain t < 0");
  return t;
}

struct FrontsSpec {
  std::size_t candidate = 0;
  Grid2D grid;
  std::size_t n_levels = 30, virtual_levels = 5;
  double fit_window = 0.05;
};

json fit_vertices(const nw::PacketField& f, const TrajectorySet& ts, const Grid2D& g, double band_lo, double band_hi,
                  double window) {
  const double cell = std::hypot(g.dx(), g.dt());
  json fits = json::array();
  double first_t = std::numeric_limits<double>::infinity();
  json first;
  for (const PairEvent& e : ts.events) {
    if (e.kind != PairKind::annihilation) continue;
    const TrajPolyline& line = ts.lines[e.line];
    const bool virt = line.level > band_lo && line.level < band_hi;
    json r = {{"x_event", e.x}, {"t_event", e.t}, {"level", line.level}, {"virtual_band", virt}};
    try {
      const nw::VertexFit vf = nw::fit_annihilation_vertex(f, line.level, e.x, e.t);
      const nw::VertexComparison cmp = nw::compare_vertex_fit(vf, line, window);
      r["x_star"] = vf.x_star;
      r["t_star"] = vf.t_star;
      r["rho_slope"] = vf.model.alpha;
      r["x_rho"] = vf.model.x_rho;
      r["j_slope"] = vf.model.beta;
      r["x_j"] = vf.model.x_j;
      r["C"] = vf.C;
      r["worst_distance"] = cmp.worst_distance;
      r["samples"] = cmp.samples;
      r["within_one_cell"] = cmp.samples > 0 && cmp.worst_distance <= cell;
      if (virt && cmp.samples > 0 && vf.t_star < first_t) {
        first_t = vf.t_star;
        first = r;
      }
    } catch (const std::exception& ex) {  // NonConvergence or DomainError from the local fit
      r["error"] = ex.what();
    }
    fits.push_back(r);
  }
  return {{"cell_diagonal", cell}, {"window", window}, {"vertices", fits}, {"first_vertex", first}};
}

}  // namespace

int cmd_explode(const Context& c) {
  const json& j = c.config;
  check_keys(j, "", {"candidates", "target", "profile_times", "profile_x", "probability_times", "fronts"});

  const json& cj = j.at("candidates");
  if (!cj.is_array() || cj.empty()) throw ConfigError("config: candidates must be a non-empty array of packets");
  std::vector<nw::PacketSpec> cands;
  for (std::size_t i = 0; i < cj.size(); ++i) {
    cands.push_back(parse_packet(cj[i], "candidates[" + std::to_string(i) + "]"));
    if (cands.back().shape != nw::Shape::cos2)
      throw ConfigError("config: candidates[" + std::to_string(i) + "] must be a cos2 packet");
  }
  const json& tj = object_at(j, "target", "");
  check_keys(tj, "target", {"x_th", "x0", "tolerance"});
  const double tx_th = number(tj, "x_th", "target"), tx0 = number(tj, "x0", "target");
  const double ttol = number(tj, "tolerance", "target");
  const std::vector<double> prof_t = times(j, "profile_times");
  const std::vector<double> xs = parse_axis(object_at(j, "profile_x", ""), "profile_x");
  const std::vector<double> prob_t = times(j, "probability_times");

  std::optional<FrontsSpec> fronts;
  if (j.contains("fronts")) {
    const json& fj = object_at(j, "fronts", "");
    check_keys(fj, "fronts", {"candidate", "grid", "n_levels", "virtual_levels", "fit_window"});
    FrontsSpec fs;
    fs.candidate = count_or(fj, "candidate", "fronts", 0, 0);
    if (fs.candidate >= cands.size()) throw ConfigError("config: fronts.candidate out of range");
    fs.grid = parse_grid(object_at(fj, "grid", "fronts"), "fronts.grid");
    if (fs.grid.t_min < 0) throw ConfigError("config: fronts.grid.t_min must be >= 0");
    fs.n_levels = count_or(fj, "n_levels", "fronts", 1, 30);
    fs.virtual_levels = count_or(fj, "virtual_levels", "fronts", 0, 5);
    fs.fit_window = number_or(fj, "fit_window", "fronts", 0.05);
    if (!(fs.fit_window > 0)) throw ConfigError("config: fronts.fit_window must be > 0");
    fronts = fs;
  }

  json out = {{"target", {{"x_th", tx_th}, {"x0", tx0}, {"tolerance", ttol}}}};
  json cand_out = json::array();
  json selected = nullptr;
  for (std::size_t ci = 0; ci < cands.size(); ++ci) {
    const nw::PacketSpec& p = cands[ci];
    const std::string tg = "a" + tag(p.a);
    const nw::Thresholds th = nw::zero_crossings(p, nw::default_quadrature(p));
    const nw::PacketField f(p);
    const bool match = std::abs(th.x_th - tx_th) <= ttol && std::abs(th.x0 - tx0) <= ttol;
    if (match && selected.is_null()) selected = p.a;

    CsvWriter pw(c, "profiles_" + tg + ".csv", "explode", {"t", "x", "rho", "rho_nw", "rho_nw0", "j"});
    json masses = json::array();
    for (double t : prof_t) {
      const nw::DensityProfile d = nw::densities(f, xs, t, c.opt.threads);
      for (const auto& r : d.rows) pw.row({t, r.x, r.rho, r.rho_nw, r.rho_nw0, r.j});
      masses.push_back({{"t", t}, {"abs_rho_mass", d.abs_rho_mass}});
    }
    pw.close();

    std::vector<double> P(prob_t.size());
    parallel_for(prob_t.size(), c.opt.threads, [&](std::size_t i) { P[i] = nw::acausal_probability(f, prob_t[i]); });
    CsvWriter aw(c, "acausal_" + tg + ".csv", "explode", {"t", "P"});
    for (std::size_t i = 0; i < P.size(); ++i) aw.row({prob_t[i], P[i]});
    aw.close();

    json co = {{"a", p.a},
               {"x_th", th.x_th},
               {"x0", th.x0},
               {"head_charge", th.head_charge},
               {"tail_charge", th.tail_charge},
               {"far_tail_charge", th.far_tail},
               {"nw_half_mass", th.nw_half},
               {"total_charge", f.charge()},
               {"matches_target", match},
               {"profile_masses", masses}};

    if (fronts && fronts->candidate == ci) {
      const double lo = f.F(th.x_th, 0.0), hi = f.F(th.x0, 0.0);
      std::vector<double> extra;
      for (std::size_t i = 1; i <= fronts->virtual_levels; ++i)
        extra.push_back(lo + (hi - lo) * double(i) / double(fronts->virtual_levels + 1));
      const TrajectorySet ts = nw::annihilation_fronts(f, fronts->grid, fronts->n_levels, extra, c.opt.threads);
      if (ts.resolution_warning) c.warn(ts.warning);
      write_trajectories(c, "fronts_" + tg + ".csv", "explode", ts);
      const Grid2D& g = fronts->grid;
      CsvWriter gw(c, "fronts_grid_" + tg + ".csv", "explode", {"x", "t", "F", "rho"});
      for (std::size_t jt = 0; jt < g.n_t; ++jt)
        for (std::size_t i = 0; i < g.n_x; ++i) gw.row({g.x(i), g.t(jt), ts.F.at(i, jt), ts.rho.at(i, jt)});
      gw.close();
      json fo = census(ts);
      fo["virtual_band"] = {lo, hi};
      fo["lambert"] = fit_vertices(f, ts, g, lo, hi, fronts->fit_window);
      co["fronts"] = fo;
    }
    cand_out.push_back(co);
  }
  out["candidates"] = cand_out;
  out["selected_a"] = selected;
  if (selected.is_null()) c.warn("no candidate reproduces the target thresholds");
  write_json(c, "thresholds.json", "explode", out);
  return exit_ok;
}

}  // namespace bohm::cli
