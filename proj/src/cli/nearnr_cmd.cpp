#include <algorithm>
#include <cmath>

#include "bohm/errors.hpp"
#include "bohm/nearnr.hpp"
#include "bohm/parallel.hpp"
#include "common.hpp"

namespace bohm::cli {

int cmd_nearnr(const Context& c) {
  const json& j = c.config;
  check_keys(j, "", {"packet", "t", "x", "h_t", "significant_fraction", "tolerances"});
  const nw::PacketSpec p = parse_packet(object_at(j, "packet", ""), "packet");
  const double t = number_or(j, "t", "", 0.0);
  const std::vector<double> xs = parse_axis(object_at(j, "x", ""), "x");
  const double h = number_or(j, "h_t", "", nearnr::default_ht);
  if (!(h > 0)) throw ConfigError("config: h_t must be > 0");
  const double frac = number_or(j, "significant_fraction", "", 0.1);
  if (!(frac > 0 && frac < 1)) throw ConfigError("config: significant_fraction must lie in (0, 1)");
  json tol_j = j.contains("tolerances") ? object_at(j, "tolerances", "") : json::object();
  check_keys(tol_j, "tolerances", {"identity_factor", "moments", "timeform", "w_approx", "min_improvement", "regime"});
  const double tol_id = number_or(tol_j, "identity_factor", "tolerances", 2.0);
  const double tol_mom = number_or(tol_j, "moments", "tolerances", 1e-6);
  const double tol_tf = number_or(tol_j, "timeform", "tolerances", 0.1);
  const double tol_wa = number_or(tol_j, "w_approx", "tolerances", 0.05);
  const double min_imp = number_or(tol_j, "min_improvement", "tolerances", 5.0);
  // sigma_k^2 + k0^2 above this leaves the expansion regime
  const double regime = number_or(tol_j, "regime", "tolerances", 0.05);

  const double expansion = p.shape == nw::Shape::gaussian ? p.sigma_k * p.sigma_k + p.k0 * p.k0
                                                           : 1.0 / (p.a * p.a);
  const bool narrow = p.shape == nw::Shape::gaussian && expansion <= regime;
  if (!narrow)
    c.warn("packet is outside the narrow-k regime (expansion parameter " + format_number(expansion) +
           "); the w_approx, time-form and pushforward tolerances are not expected to hold, the exact "
           "density-difference identity is still checked");

  const nw::PacketField f(p);
  const nearnr::CorrectionField cf = nearnr::correction_field(f, xs, t, c.opt.threads, h);
  std::vector<nearnr::TimeForm> tf(xs.size());
  std::vector<double> wa(xs.size());
  parallel_for(xs.size(), c.opt.threads, [&](std::size_t i) {
    tf[i] = nearnr::density_difference_timeform(f, xs[i], t, h);
    wa[i] = nearnr::w_approx(f, xs[i], t);
  });

  CsvWriter w(c, "correction.csv", "nearnr",
              {"x", "rho", "rho_nw", "W", "d2W_dx2", "f", "x_nw", "flagged", "d2rho_dt2", "lhs", "rhs27a", "rhs27b",
               "W_approx"});
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& r = cf.rows[i];
    w.row({r.x, r.rho, r.rho_nw, r.W, r.d2W, r.f, r.x_nw, r.flagged ? 1.0 : 0.0, r.d2rho_dt2, tf[i].lhs,
           tf[i].rhs27a, tf[i].rhs27b, wa[i]});
  }
  w.close();

  double lmax = 0;
  for (const auto& r : tf) lmax = std::max(lmax, std::abs(r.lhs));
  double e27b = 0, e27a = 0;
  std::size_t n_sig = 0, conflicts = 0;
  for (const auto& r : tf) {
    if (!(std::abs(r.lhs) > frac * lmax)) continue;
    ++n_sig;
    e27b = std::max(e27b, std::abs(r.lhs - r.rhs27b) / std::abs(r.lhs));
    e27a = std::max(e27a, std::abs(r.rhs27a - r.rhs27b) / std::abs(r.lhs));
    conflicts += r.step_conflict;
  }
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (cf.rows[i].W - wa[i]) * (cf.rows[i].W - wa[i]);
    den += cf.rows[i].W * cf.rows[i].W;
  }
  const double wa_l2 = den > 0 ? std::sqrt(num / den) : 0.0;

  const nearnr::Pushforward pf = nearnr::pushforward_l1(cf);
  const nearnr::Moments m = nearnr::moments(f, t);
  const nearnr::IdentityCheck id = nearnr::check_density_identity(f, xs, t, c.opt.threads);
  const double d0 = std::abs(m.m0_rho - m.m0_nw), d1 = std::abs(m.m1_rho - m.m1_nw);

  json body = {
      {"packet",
       {{"shape", p.shape == nw::Shape::cos2 ? "cos2" : "gaussian"}, {"a", p.a}, {"k0", p.k0}, {"sigma_k", p.sigma_k}}},
      {"t", t},
      {"narrow_regime", narrow},
      {"expansion_parameter", expansion},
      {"identity",
       {{"max_residual", id.max_residual},
        {"max_ratio_to_tolerance", id.max_ratio},
        {"tolerance_at_max", id.tolerance_at_max},
        {"factor", tol_id},
        {"pass", id.max_ratio < tol_id}}},
      {"moments",
       {{"m0_rho", m.m0_rho},
        {"m0_nw", m.m0_nw},
        {"m1_rho", m.m1_rho},
        {"m1_nw", m.m1_nw},
        {"max_difference", std::max(d0, d1)},
        {"pass", std::max(d0, d1) < tol_mom}}},
      {"timeform",
       {{"max_abs_lhs", lmax},
        {"significant_points", n_sig},
        {"max_rel_error_27b", e27b},
        {"max_rel_gap_27a_27b", e27a},
        {"step_conflicts", conflicts},
        {"tolerance", tol_tf},
        {"pass", n_sig > 0 && e27b < tol_tf && e27a < tol_tf}}},
      {"w_approx", {{"rel_l2", wa_l2}, {"tolerance", tol_wa}, {"pass", wa_l2 < tol_wa}}},
      {"pushforward",
       {{"l1_unmapped", pf.l1_unmapped},
        {"l1_mapped", pf.l1_mapped},
        {"improvement", pf.improvement},
        {"monotone", pf.monotone},
        {"min_improvement", min_imp},
        {"pass", pf.monotone && pf.improvement >= min_imp}}},
  };
  write_json(c, "summary.json", "nearnr", body);
  return exit_ok;
}

}  // namespace bohm::cli
