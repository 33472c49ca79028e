#include <cmath>

#include "bohm/errors.hpp"
#include "bohm/modes.hpp"
#include "common.hpp"

namespace bohm::cli {

namespace {

ModeSet parse_state(const json& j, const std::string& where) {
  if (j.contains("modes") == j.contains("rest_frame"))
    throw ConfigError("config: " + where + " needs exactly one of modes or rest_frame");
  if (j.contains("rest_frame")) {
    const std::string w = where + ".rest_frame";
    const json& r = object_at(j, "rest_frame", where);
    check_keys(r, w, {"k", "dominant", "dominant_weight"});
    return ModeSet::rest_frame(numbers(r, "k", w), count(r, "dominant", w, 0), number(r, "dominant_weight", w));
  }
  const json& m = j.at("modes");
  if (!m.is_array()) throw ConfigError("config: " + where + ".modes must be an array");
  std::vector<Mode> modes;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string w = where + ".modes[" + std::to_string(i) + "]";
    check_keys(m[i], w, {"k", "re", "im"});
    modes.push_back({number(m[i], "k", w), cplx(number_or(m[i], "re", w, 0.0), number_or(m[i], "im", w, 0.0))});
  }
  try {
    return ModeSet(std::move(modes));
  } catch (const ConfigError& e) {
    throw ConfigError("config: " + where + ": " + e.what());
  }
}

// Sign census of the boosted state's rho over the grid events seen from the
// moving frame.
json boost_scan(const ModeSet& s, const Grid2D& g, const std::vector<double>& etas) {
  json out = json::array();
  for (double eta : etas) {
    const ModeSet b = s.boosted(eta);
    std::size_t pos = 0, neg = 0;
    for (std::size_t j = 0; j < g.n_t; ++j)
      for (std::size_t i = 0; i < g.n_x; ++i) {
        const Event e = boost_event(eta, g.x(i), g.t(j));
        const double r = pair_densities(b, e.x, e.t).rho_n;
        pos += r > 0;
        neg += r < 0;
      }
    out.push_back({{"rapidity", eta}, {"positive_nodes", pos}, {"negative_nodes", neg}, {"both_signs", pos && neg}});
  }
  return out;
}

}  // namespace

int cmd_modes(const Context& c) {
  const json& j = c.config;
  check_keys(j, "", {"state", "grid", "n_levels", "boost_rapidities"});
  const ModeSet s = parse_state(object_at(j, "state", ""), "state");
  const Grid2D g = parse_grid(object_at(j, "grid", ""), "grid");
  const std::size_t n_levels = count(j, "n_levels", "", 1);

  const TrajectorySet ts = trajectories(s, g, n_levels, c.opt.threads);
  if (ts.resolution_warning) c.warn(ts.warning);

  write_trajectories(c, "trajectories.csv", "modes", ts);
  CsvWriter fg(c, "f_grid.csv", "modes", {"x", "t", "F", "rho_over_n"});
  for (std::size_t jt = 0; jt < g.n_t; ++jt)
    for (std::size_t i = 0; i < g.n_x; ++i) fg.row({g.x(i), g.t(jt), ts.F.at(i, jt), ts.rho.at(i, jt)});
  fg.close();

  json modes = json::array();
  for (const Mode& m : s.modes()) modes.push_back({{"k", m.k}, {"re", m.phi.real()}, {"im", m.phi.imag()}});
  json body = census(ts);
  body["mean_group_velocity"] = mean_rest_frame_check(s);
  body["modes"] = modes;
  if (j.contains("boost_rapidities")) body["boost_scan"] = boost_scan(s, g, numbers(j, "boost_rapidities", ""));
  write_json(c, "summary.json", "modes", body);
  return exit_ok;
}

}  // namespace bohm::cli
