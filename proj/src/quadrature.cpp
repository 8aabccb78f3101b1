#include "kms/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kms {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b;
  std::vector<double> val, err;
  double priority = 0.0;
};

// one G7/K15 panel, QUADPACK error heuristic per component
void gk15(const VecIntegrand& f, int dim, double a, double b, Interval& iv, std::vector<double>& buf) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  buf.assign(static_cast<size_t>(15) * dim, 0.0);
  f(c, &buf[0]);
  for (int j = 0; j < 7; ++j) {
    f(c - h * xgk[j], &buf[static_cast<size_t>(1 + 2 * j) * dim]);
    f(c + h * xgk[j], &buf[static_cast<size_t>(2 + 2 * j) * dim]);
  }
  iv.a = a;
  iv.b = b;
  iv.val.assign(dim, 0.0);
  iv.err.assign(dim, 0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int d = 0; d < dim; ++d) {
    const double fc = buf[d];
    double rk = wgk[7] * fc, rg = wg[3] * fc, rabs = std::abs(rk);
    for (int j = 0; j < 7; ++j) {
      const double f1 = buf[(1 + 2 * j) * dim + d], f2 = buf[(2 + 2 * j) * dim + d];
      rk += wgk[j] * (f1 + f2);
      rabs += wgk[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) rg += wg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * rk;
    double rasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
      rasc += wgk[j] * (std::abs(buf[(1 + 2 * j) * dim + d] - mean) + std::abs(buf[(2 + 2 * j) * dim + d] - mean));
    double e = std::abs((rk - rg) * h);
    rasc *= std::abs(h);
    rabs *= std::abs(h);
    if (rasc != 0.0 && e != 0.0) e = rasc * std::min(1.0, std::pow(200.0 * e / rasc, 1.5));
    if (rabs > std::numeric_limits<double>::min() / (50.0 * eps)) e = std::max(50.0 * eps * rabs, e);
    if (!std::isfinite(rk)) e = std::numeric_limits<double>::infinity();
    iv.val[d] = rk * h;
    iv.err[d] = e;
  }
}

double priority_of(const Interval& iv, const std::vector<double>& scale) {
  double p = 0.0;
  for (size_t d = 0; d < iv.err.size(); ++d) p = std::max(p, iv.err[d] / scale[d]);
  return p;
}

}  // namespace

QuadOptions quad_options(const NumericSettings& ns) {
  QuadOptions o;
  o.rel_tol = ns.quad_rel_tol;
  o.abs_tol = ns.quad_abs_tol;
  o.max_intervals = ns.quad_max_intervals;
  return o;
}

IntegrationResult integrate_gk(const VecIntegrand& f, int dim, double a, double b, const QuadOptions& opt) {
  IntegrationResult res;
  res.value.assign(dim, 0.0);
  res.error.assign(dim, 0.0);
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::vector<double> buf;
  std::vector<Interval> ivs;
  const int n0 = std::max(1, opt.initial_intervals);
  for (int i = 0; i < n0; ++i) {
    Interval iv;
    gk15(f, dim, a + (b - a) * i / n0, a + (b - a) * (i + 1) / n0, iv, buf);
    ivs.push_back(std::move(iv));
  }
  std::vector<double> tot(dim, 0.0), terr(dim, 0.0), scale(dim, 1.0);
  auto refresh = [&]() {
    std::fill(tot.begin(), tot.end(), 0.0);
    std::fill(terr.begin(), terr.end(), 0.0);
    for (auto& iv : ivs)
      for (int d = 0; d < dim; ++d) {
        tot[d] += iv.val[d];
        terr[d] += iv.err[d];
      }
    for (int d = 0; d < dim; ++d) scale[d] = std::max(opt.abs_tol, opt.rel_tol * std::abs(tot[d]));
    for (auto& iv : ivs) iv.priority = priority_of(iv, scale);
  };
  refresh();
  int next_refresh = 2 * static_cast<int>(ivs.size());
  for (;;) {
    bool ok = true;
    for (int d = 0; d < dim; ++d)
      if (!(terr[d] <= std::max(opt.abs_tol, opt.rel_tol * std::abs(tot[d])))) {
        ok = false;
        break;
      }
    if (ok) {
      res.converged = true;
      break;
    }
    if (static_cast<int>(ivs.size()) >= opt.max_intervals) break;
    size_t worst = 0;
    for (size_t i = 1; i < ivs.size(); ++i)
      if (ivs[i].priority > ivs[worst].priority) worst = i;
    const double lo = ivs[worst].a, hi = ivs[worst].b, mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    Interval left, right;
    gk15(f, dim, lo, mid, left, buf);
    gk15(f, dim, mid, hi, right, buf);
    for (int d = 0; d < dim; ++d) {
      tot[d] += left.val[d] + right.val[d] - ivs[worst].val[d];
      terr[d] += left.err[d] + right.err[d] - ivs[worst].err[d];
    }
    left.priority = priority_of(left, scale);
    right.priority = priority_of(right, scale);
    ivs[worst] = std::move(left);
    ivs.push_back(std::move(right));
    if (static_cast<int>(ivs.size()) >= next_refresh) {
      refresh();
      next_refresh *= 2;
    }
  }
  refresh();
  res.value = tot;
  res.error = terr;
  res.intervals = static_cast<int>(ivs.size());
  res.evaluations = 15 * res.intervals + 15 * (res.intervals - n0);
  return res;
}

IntegrationResult integrate_gk_inf(const VecIntegrand& f, int dim, double a, const QuadOptions& opt) {
  std::vector<double> tmp(dim);
  VecIntegrand g = [&](double t, double* out) {
    const double om = 1.0 - t;
    const double x = a + t / om;
    const double jac = 1.0 / (om * om);
    f(x, out);
    for (int d = 0; d < dim; ++d) out[d] *= jac;
  };
  return integrate_gk(g, dim, 0.0, 1.0, opt);
}

IntegrationResult integrate_tanh_sinh(const EndpointIntegrand& f, int dim, double a, double b, double rel_tol,
                                      int max_levels) {
  constexpr double hpi = 1.57079632679489661923;
  const double half = 0.5 * (b - a);
  std::vector<double> sum(dim, 0.0), prev(dim, 0.0), buf(dim);
  IntegrationResult res;
  const double tmax = 6.0;
  auto add_node = [&](double t) {
    const double v = hpi * std::sinh(t);
    if (std::abs(v) > 350.0) return;
    const double cv = std::cosh(v);
    const double w = hpi * std::cosh(t) / (cv * cv) * half;
    const double e2 = std::exp(-2.0 * std::abs(v));
    // distances from the near endpoint computed without cancellation
    const double near = 2.0 * e2 / (1.0 + e2), far = 2.0 / (1.0 + e2);
    const double da = half * (v < 0 ? near : far), db = half * (v < 0 ? far : near);
    const double x = da < db ? a + da : b - db;
    f(x, da, db, buf.data());
    ++res.evaluations;
    for (int d = 0; d < dim; ++d)
      if (std::isfinite(buf[d])) sum[d] += w * buf[d];
  };
  add_node(0.0);
  for (int k = 1; k <= static_cast<int>(tmax); ++k) {
    add_node(k);
    add_node(-static_cast<double>(k));
  }
  double h = 1.0;
  std::vector<double> est(dim);
  for (int d = 0; d < dim; ++d) prev[d] = sum[d] * h;
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    for (double t = h; t <= tmax; t += 2.0 * h) {
      add_node(t);
      add_node(-t);
    }
    bool ok = true;
    double ref = 0.0;
    for (int d = 0; d < dim; ++d) {
      est[d] = sum[d] * h;
      ref = std::max(ref, std::abs(est[d]));
    }
    res.error.assign(dim, 0.0);
    for (int d = 0; d < dim; ++d) {
      res.error[d] = std::abs(est[d] - prev[d]);
      if (res.error[d] > rel_tol * std::max(std::abs(est[d]), 1e-3 * ref) && res.error[d] > 1e-300) ok = false;
    }
    prev = est;
    if (ok && level >= 3) {
      res.converged = true;
      break;
    }
  }
  res.value = prev;
  return res;
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt, double* err) {
  auto r = integrate_gk([&](double x, double* o) { o[0] = f(x); }, 1, a, b, opt);
  if (err) *err = r.error[0];
  return r.value[0];
}

double integrate_inf(const std::function<double(double)>& f, double a, const QuadOptions& opt, double* err) {
  auto r = integrate_gk_inf([&](double x, double* o) { o[0] = f(x); }, 1, a, opt);
  if (err) *err = r.error[0];
  return r.value[0];
}

}  // namespace kms
