#include "bohm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

// Kronrod 15-point abscissae (non-negative half) and weights; every other
// node carries the embedded Gauss 7-point rule.
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  std::vector<std::complex<double>> val;
  double err;
};

void gk15(const IntegrandN& f, std::size_t dim, double a, double b, Panel& p,
          std::vector<std::complex<double>>& buf) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<std::complex<double>> k(dim, 0.0), g(dim, 0.0);
  buf.resize(dim);
  f(c, buf.data());
  for (std::size_t m = 0; m < dim; ++m) {
    k[m] = wgk[7] * buf[m];
    g[m] = wg[3] * buf[m];
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    f(c - dx, buf.data());
    std::vector<std::complex<double>> lo(buf);
    f(c + dx, buf.data());
    for (std::size_t m = 0; m < dim; ++m) {
      const auto s = lo[m] + buf[m];
      k[m] += wgk[j] * s;
      if (j % 2 == 1) g[m] += wg[j / 2] * s;
    }
  }
  p.a = a;
  p.b = b;
  p.val.resize(dim);
  p.err = 0.0;
  for (std::size_t m = 0; m < dim; ++m) {
    p.val[m] = h * k[m];
    p.err = std::max(p.err, std::abs(h * (k[m] - g[m])));
  }
}

}  // namespace

void KahanSum::add(double v) {
  const double t = sum + v;
  if (std::abs(sum) >= std::abs(v))
    comp += (sum - t) + v;
  else
    comp += (v - t) + sum;
  sum = t;
}

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0)) throw ConfigError("quadrature tolerances must be > 0");
  if (k_cut < 0) throw ConfigError("quadrature k_cut must be > 0");
  if (max_subdivisions == 0) throw ConfigError("quadrature max_subdivisions must be > 0");
  if (!(max_panel > 0)) throw ConfigError("quadrature max_panel must be > 0");
}

QuadResultN integrate_1d(const IntegrandN& f, std::size_t dim, double a, double b,
                         const QuadratureSpec& spec) {
  if (!(a < b)) throw DomainError("integrate_1d: need a < b");
  if (dim == 0) throw DomainError("integrate_1d: zero-dimensional integrand");

  std::size_t n0 = 1;
  if (std::isfinite(spec.max_panel)) n0 = std::max<std::size_t>(1, std::size_t(std::ceil((b - a) / spec.max_panel)));
  n0 = std::min(n0, spec.max_subdivisions);

  std::vector<Panel> panels;
  panels.reserve(n0 * 2);
  std::vector<std::complex<double>> buf;
  const double w = (b - a) / double(n0);
  for (std::size_t i = 0; i < n0; ++i) {
    Panel p;
    const double lo = a + w * double(i);
    const double hi = (i + 1 == n0) ? b : a + w * double(i + 1);
    gk15(f, dim, lo, hi, p, buf);
    panels.push_back(std::move(p));
  }

  auto totals = [&](std::vector<std::complex<double>>& val, double& err) {
    // interval order; panels are kept sorted lazily below
    std::vector<std::size_t> order(panels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return panels[x].a < panels[y].a; });
    std::vector<KahanSum> re(dim), im(dim);
    KahanSum e;
    for (std::size_t i : order) {
      for (std::size_t m = 0; m < dim; ++m) {
        re[m].add(panels[i].val[m].real());
        im[m].add(panels[i].val[m].imag());
      }
      e.add(panels[i].err);
    }
    val.resize(dim);
    for (std::size_t m = 0; m < dim; ++m) val[m] = {re[m].value(), im[m].value()};
    err = e.value();
  };

  auto cmp = [&](std::size_t x, std::size_t y) {
    if (panels[x].err != panels[y].err) return panels[x].err < panels[y].err;
    return panels[x].a > panels[y].a;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);

  // Running totals for the stopping test; the final answer is re-summed in order.
  double err_total = 0.0;
  std::vector<std::complex<double>> run(dim, 0.0);
  for (const auto& p : panels) {
    err_total += p.err;
    for (std::size_t m = 0; m < dim; ++m) run[m] += p.val[m];
  }
  auto tol_of = [&](const std::vector<std::complex<double>>& v) {
    double mag = 0.0;
    for (const auto& z : v) mag = std::max(mag, std::abs(z));
    return std::max(spec.abs_tol, spec.rel_tol * mag);
  };

  bool ok = err_total <= tol_of(run);
  std::size_t refreshes = 0;
  while (!ok && panels.size() < spec.max_subdivisions) {
    const std::size_t i = heap.top();
    heap.pop();
    const Panel old = panels[i];
    const double mid = 0.5 * (old.a + old.b);
    if (!(mid > old.a && mid < old.b)) break;  // cannot split further
    Panel l, r;
    gk15(f, dim, old.a, mid, l, buf);
    gk15(f, dim, mid, old.b, r, buf);
    err_total += l.err + r.err - old.err;
    for (std::size_t m = 0; m < dim; ++m) run[m] += l.val[m] + r.val[m] - old.val[m];
    panels[i] = std::move(l);
    panels.push_back(std::move(r));
    heap.push(i);
    heap.push(panels.size() - 1);
    ok = err_total <= tol_of(run);
    if (ok || ++refreshes % 256 == 0) {
      // guard against drift in the running sums
      totals(run, err_total);
      ok = err_total <= tol_of(run);
    }
  }

  QuadResultN res;
  totals(res.value, res.error);
  res.converged = res.error <= tol_of(res.value);
  res.panels = panels.size();
  return res;
}

QuadResult integrate_1d(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  auto g = [&](double x, std::complex<double>* out) { out[0] = f(x); };
  const QuadResultN r = integrate_1d(IntegrandN(g), 1, a, b, spec);
  return {r.value[0], r.error, r.converged, r.panels};
}

}  // namespace bohm
