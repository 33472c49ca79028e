#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "bohm/dirac.hpp"
#include "bohm/errors.hpp"
#include "common.hpp"

namespace bohm::cli {

namespace {

using namespace bohm::dirac;

template <std::size_t N>
std::array<double, N> fixed(const json& j, const char* key, const std::string& where) {
  const std::vector<double> v = numbers(j, key, where);
  if (v.size() != N)
    throw ConfigError("config: " + where + "." + key + " must have " + std::to_string(N) + " entries");
  std::array<double, N> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

DiracField parse_dirac(const json& j, const std::string& where) {
  check_keys(j, where, {"random", "modes", "scalar_embedding"});
  if (j.size() != 1) throw ConfigError("config: " + where + " needs exactly one of random, modes, scalar_embedding");
  try {
    if (j.contains("random")) {
      const std::string w = where + ".random";
      const json& r = object_at(j, "random", where);
      check_keys(r, w, {"n_modes", "k_max", "seed"});
      return DiracField::random(count(r, "n_modes", w, 1), number(r, "k_max", w), seed(r, "seed", w));
    }
    if (j.contains("modes")) {
      const json& m = j.at("modes");
      if (!m.is_array()) throw ConfigError("config: " + where + ".modes must be an array");
      std::vector<DiracField::LabeledMode> modes;
      for (std::size_t i = 0; i < m.size(); ++i) {
        const std::string w = where + ".modes[" + std::to_string(i) + "]";
        check_keys(m[i], w, {"k", "spin", "re", "im"});
        const std::string s = text(m[i], "spin", w);
        if (s != "up" && s != "down") throw ConfigError("config: " + w + ".spin must be \"up\" or \"down\"");
        modes.push_back({fixed<3>(m[i], "k", w), s == "up" ? Spin::up : Spin::down,
                         cplx(number_or(m[i], "re", w, 0.0), number_or(m[i], "im", w, 0.0))});
      }
      return DiracField::from_modes(modes);
    }
    const std::string w = where + ".scalar_embedding";
    const json& e = object_at(j, "scalar_embedding", where);
    check_keys(e, w, {"u0_re", "u0_im", "modes"});
    const auto re = fixed<4>(e, "u0_re", w);
    const auto im = e.contains("u0_im") ? fixed<4>(e, "u0_im", w) : std::array<double, 4>{};
    Spinor u0;
    for (int a = 0; a < 4; ++a) u0[a] = cplx(re[a], im[a]);
    const json& m = e.at("modes");
    if (!m.is_array()) throw ConfigError("config: " + w + ".modes must be an array");
    std::vector<Mode> modes;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string wi = w + ".modes[" + std::to_string(i) + "]";
      check_keys(m[i], wi, {"k", "re", "im"});
      modes.push_back({number(m[i], "k", wi), cplx(number_or(m[i], "re", wi, 0.0), number_or(m[i], "im", wi, 0.0))});
    }
    return DiracField::scalar_embedding(u0, ModeSet(std::move(modes)));
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind("config:", 0) == 0) throw;
    throw ConfigError("config: " + where + ": " + msg);
  }
}

FWField parse_fw(const json& j, const std::string& where) {
  check_keys(j, where, {"amplitude", "phase", "spin"});
  FWField f;
  if (j.contains("amplitude")) {
    const std::string w = where + ".amplitude";
    const json& a = object_at(j, "amplitude", where);
    check_keys(a, w, {"a", "b3", "b4", "centre_shift"});
    if (a.contains("a")) f.amp.a = fixed<3>(a, "a", w);
    for (double v : f.amp.a)
      if (!(v > 0)) throw ConfigError("config: " + w + ".a entries must be > 0");
    f.amp.b3 = number_or(a, "b3", w, 0.0);
    f.amp.b4 = number_or(a, "b4", w, 0.0);
    if (f.amp.b4 < 0) throw ConfigError("config: " + w + ".b4 must be >= 0");
    f.amp.centre_shift = number_or(a, "centre_shift", w, 0.0);
  }
  if (j.contains("phase")) {
    const std::string w = where + ".phase";
    const json& p = object_at(j, "phase", where);
    check_keys(p, w, {"p", "c"});
    if (p.contains("p")) f.phase.p = fixed<4>(p, "p", w);
    f.phase.c = number_or(p, "c", w, 0.0);
  }
  if (j.contains("spin")) {
    const std::string w = where + ".spin";
    const json& s = object_at(j, "spin", where);
    check_keys(s, w, {"kind", "theta0", "phi0", "g_theta", "g_phi", "c"});
    const std::string kind = text(s, "kind", w);
    if (kind == "constant") f.spin.kind = SpinKind::constant;
    else if (kind == "angles") f.spin.kind = SpinKind::angles;
    else if (kind == "hedgehog") f.spin.kind = SpinKind::hedgehog;
    else throw ConfigError("config: " + w + ".kind must be constant, angles or hedgehog");
    f.spin.theta0 = number_or(s, "theta0", w, 0.0);
    f.spin.phi0 = number_or(s, "phi0", w, 0.0);
    if (s.contains("g_theta")) f.spin.g_theta = fixed<4>(s, "g_theta", w);
    if (s.contains("g_phi")) f.spin.g_phi = fixed<4>(s, "g_phi", w);
    f.spin.c = number_or(s, "c", w, 1.0);
    if (f.spin.kind == SpinKind::hedgehog && !(f.spin.c > 0))
      throw ConfigError("config: " + w + ".c must be > 0 for a hedgehog");
  }
  return f;
}

struct Points {
  std::size_t n = 50;
  double box = 2.0;
  std::uint64_t seed = 1;
  double g_min = 0.2;
};

Points parse_points(const json& c, const std::string& where) {
  Points p;
  if (!c.contains("points")) return p;
  const std::string w = where + ".points";
  const json& j = object_at(c, "points", where);
  check_keys(j, w, {"n", "box", "seed", "g_min"});
  p.n = count_or(j, "n", w, 1, p.n);
  p.box = number_or(j, "box", w, p.box);
  if (j.contains("seed")) p.seed = seed(j, "seed", w);
  p.g_min = number_or(j, "g_min", w, p.g_min);
  if (!(p.box > 0) || !(p.g_min >= 0)) throw ConfigError("config: " + w + " needs box > 0 and g_min >= 0");
  return p;
}

std::vector<Vec4> uniform_points(const Points& p) {
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> u(-p.box, p.box);
  std::vector<Vec4> pts(p.n);
  for (auto& x : pts) x = {u(rng), u(rng), u(rng), u(rng)};
  return pts;
}

json report_json(const IdentityReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    json row = {{"h", r.rows[i].h}, {"max_residual", r.rows[i].max_residual}};
    if (i < r.component_max.size()) row["component_max"] = r.component_max[i];
    rows.push_back(row);
  }
  return {{"rows", rows}, {"ratios", r.ratios}, {"converging", r.converging}};
}

// Records the verdict; a converging identity with a residual above the bound
// and a nonconverging one are reported differently.
void verdict(json& out, const IdentityReport& r, const json& check, const std::string& where, const Context& c) {
  out["report"] = report_json(r);
  if (!r.converging) {
    out["flag"] = "nonconverging under step halving; the metric sign dictionary is the first suspect";
    c.warn(where + ": residual does not converge as O(h^2)");
  }
  bool pass = r.converging;
  if (check.contains("max_residual")) {
    const double bound = number(check, "max_residual", where);
    out["max_residual_bound"] = bound;
    pass = pass && !r.rows.empty() && r.rows.front().max_residual < bound;
  }
  out["pass"] = pass;
}

double max_abs_diff(const Mat4& a, const Mat4& b) {
  double m = 0;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(a[i][k] - b[i][k]));
  return m;
}

}  // namespace

int cmd_spin(const Context& c) {
  const json& j = c.config;
  check_keys(j, "", {"fields", "fw_fields", "checks"});
  std::map<std::string, DiracField> fields;
  std::map<std::string, FWField> fw;
  if (j.contains("fields"))
    for (auto it = object_at(j, "fields", "").begin(); it != j.at("fields").end(); ++it)
      fields.emplace(it.key(), parse_dirac(it.value(), "fields." + it.key()));
  if (j.contains("fw_fields"))
    for (auto it = object_at(j, "fw_fields", "").begin(); it != j.at("fw_fields").end(); ++it)
      fw.emplace(it.key(), parse_fw(it.value(), "fw_fields." + it.key()));

  const json& checks = j.at("checks");
  if (!checks.is_array() || checks.empty()) throw ConfigError("config: checks must be a non-empty array");

  // validate every check before computing any
  struct Item {
    std::string kind, where;
    const json* cfg;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string w = "checks[" + std::to_string(i) + "]";
    const json& ch = checks[i];
    const std::string kind = text(ch, "kind", w);
    auto need_field = [&](bool dirac) {
      const std::string name = text(ch, "field", w);
      if (dirac ? !fields.count(name) : !fw.count(name))
        throw ConfigError("config: " + w + ".field names no " + (dirac ? "field " : "fw_field ") + name);
    };
    if (kind == "mass_identity" || kind == "eom") {
      check_keys(ch, w, {"kind", "field", "points", "h", "halvings", "max_residual"});
      need_field(true);
    } else if (kind == "gauge" || kind == "boost") {
      check_keys(ch, w, {"kind", "field", "points", "rapidity", "tolerance"});
      need_field(true);
    } else if (kind == "bilinears") {
      check_keys(ch, w, {"kind", "samples", "seed", "min_s3", "tolerance"});
    } else if (kind == "fw_spin_tensor") {
      check_keys(ch, w, {"kind", "field", "points", "tolerance"});
      need_field(false);
    } else if (kind == "curl") {
      check_keys(ch, w, {"kind", "field", "points", "h", "halvings", "max_residual"});
      need_field(false);
    } else if (kind == "balance") {
      check_keys(ch, w, {"kind", "field", "L", "n", "t", "tolerance"});
      need_field(false);
    } else {
      throw ConfigError("config: " + w + ".kind " + kind + " is not a known check");
    }
    parse_points(ch, w);
    if (ch.contains("h") && !(number(ch, "h", w) > 0)) throw ConfigError("config: " + w + ".h must be > 0");
    items.push_back({kind, w, &ch});
  }

  json results = json::array();
  for (const Item& it : items) {
    const json& ch = *it.cfg;
    const std::string& w = it.where;
    json out = {{"kind", it.kind}};
    if (ch.contains("field")) out["field"] = ch.at("field");
    const Points pp = parse_points(ch, w);
    const double h = number_or(ch, "h", w, 1e-3);
    const std::size_t halvings = count_or(ch, "halvings", w, 1, 2);

    if (it.kind == "mass_identity" || it.kind == "eom") {
      const DiracField& f = fields.at(ch.at("field"));
      const std::vector<Vec4> pts = sample_points(f, pp.n, pp.box, pp.seed, pp.g_min);
      const IdentityReport r = it.kind == "eom" ? verify_eom(f, pts, h, halvings, c.opt.threads)
                                                : verify_mass_identity(f, pts, h, halvings, c.opt.threads);
      out["points"] = pts.size();
      verdict(out, r, ch, w, c);
    } else if (it.kind == "gauge") {
      const DiracField& f = fields.at(ch.at("field"));
      double worst = 0;
      for (const Vec4& x : sample_points(f, pp.n, pp.box, pp.seed, pp.g_min)) {
        const SpinorSample s = f.eval(x);
        // f(x) = (1 + 0.3 x) e^{0.2 i t}
        const cplx e = std::polar(1.0, 0.2 * x[0]);
        const cplx g = (1.0 + 0.3 * x[1]) * e;
        const std::array<cplx, 4> dg{cplx(0, 0.2) * g, 0.3 * e, 0.0, 0.0};
        worst = std::max(worst, max_abs_diff(spin_tensor(s).T, spin_tensor(gauge(s, g, dg)).T));
      }
      const double tol = number_or(ch, "tolerance", w, 1e-10);
      out["max_tensor_change"] = worst;
      out["tolerance"] = tol;
      out["pass"] = worst < tol;
    } else if (it.kind == "boost") {
      const DiracField& f = fields.at(ch.at("field"));
      const double eta = number_or(ch, "rapidity", w, 0.5);
      const DiracField b = f.boosted(eta);
      double worst = 0;
      for (const Vec4& x : sample_points(f, pp.n, pp.box, pp.seed, pp.g_min)) {
        const SpinorSample s = f.eval(x), sb = b.eval(boost_event(eta, x));
        const double d_mass = std::abs(effective_mass_sq(s) - effective_mass_sq(sb));
        const double d_phi = std::abs(quantum_potential_analytic(s) - quantum_potential_analytic(sb));
        const double d_tr = std::abs(trace(spin_tensor(s).T) - trace(spin_tensor(sb).T));
        worst = std::max({worst, d_mass, d_phi, d_tr});
      }
      const double tol = number_or(ch, "tolerance", w, 1e-10);
      out["rapidity"] = eta;
      out["max_scalar_change"] = worst;
      out["tolerance"] = tol;
      out["pass"] = worst < tol;
    } else if (it.kind == "bilinears") {
      std::mt19937_64 rng(ch.contains("seed") ? seed(ch, "seed", w) : 1);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      const double min_s3 = number_or(ch, "min_s3", w, -0.9);
      const std::size_t n = count_or(ch, "samples", w, 1, 200);
      double nr = 0, sr = 0;
      for (std::size_t i = 0; i < n;) {
        Vec3 s{u(rng), u(rng), u(rng)};
        const double r = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
        if (r > 1.0 || r < 1e-3) continue;
        for (auto& v : s) v /= r;
        if (s[2] <= min_s3) continue;
        const Bilinears bl = fw_bilinears(s);
        nr = std::max(nr, bl.norm_residual);
        sr = std::max(sr, bl.spin_residual);
        ++i;
      }
      const double tol = number_or(ch, "tolerance", w, 1e-12);
      out["norm_residual"] = nr;
      out["spin_residual"] = sr;
      out["tolerance"] = tol;
      out["pass"] = nr < tol && sr < tol;
    } else if (it.kind == "fw_spin_tensor") {
      const double r = verify_fw_spin_tensor(fw.at(ch.at("field")), uniform_points(pp));
      const double tol = number_or(ch, "tolerance", w, 1e-10);
      out["max_residual"] = r;
      out["tolerance"] = tol;
      out["pass"] = r < tol;
    } else if (it.kind == "curl") {
      const IdentityReport r = verify_curl_formula(fw.at(ch.at("field")), uniform_points(pp), h, halvings);
      verdict(out, r, ch, w, c);
    } else {  // balance
      const double L = number(ch, "L", w), t = number_or(ch, "t", w, 0.0);
      const BalanceReport r = verify_ensemble_balance(fw.at(ch.at("field")), L, count(ch, "n", w, 3), t, c.opt.threads);
      if (r.boundary_warning)
        c.warn(w + ": amplitude on the box faces is " + format_number(r.boundary_amplitude) +
               " of its peak; boundary terms leak into the balance");
      const double tol = number_or(ch, "tolerance", w, 1e-4);
      out["integral"] = r.integral;
      out["abs_integral"] = r.abs_integral;
      out["relative"] = r.relative;
      out["boundary_amplitude"] = r.boundary_amplitude;
      out["boundary_warning"] = r.boundary_warning;
      out["tolerance"] = tol;
      out["pass"] = !r.boundary_warning && r.relative < tol;
    }
    results.push_back(out);
  }
  bool all = true;
  for (const auto& r : results) all = all && r.value("pass", false);
  write_json(c, "spin_report.json", "spin", {{"checks", results}, {"all_pass", all}});
  return exit_ok;
}

}  // namespace bohm::cli
