#include "kms/performance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kms/quadrature.hpp"
#include "kms/specfun.hpp"

namespace kms {

namespace {

bool is_int(double v) { return std::abs(v - std::round(v)) < 1e-12 && v >= 0.5; }

// int_0^inf F(z) dz through z = e^y, both half lines mapped to [0, 1)
IntegrationResult integrate_positive(const VecIntegrand& f, int dim, const QuadOptions& opt) {
  std::vector<double> buf(dim);
  auto up = integrate_gk_inf(
      [&](double y, double* out) {
        const double z = std::exp(y);
        if (!std::isfinite(z)) {
          std::fill(out, out + dim, 0.0);
          return;
        }
        f(z, out);
        for (int d = 0; d < dim; ++d) out[d] *= z;
      },
      dim, 0.0, opt);
  auto down = integrate_gk_inf(
      [&](double y, double* out) {
        const double z = std::exp(-y);
        if (z == 0.0) {
          std::fill(out, out + dim, 0.0);
          return;
        }
        f(z, out);
        for (int d = 0; d < dim; ++d) out[d] *= z;
      },
      dim, 0.0, opt);
  IntegrationResult r;
  r.value.resize(dim);
  r.error.resize(dim);
  for (int d = 0; d < dim; ++d) {
    r.value[d] = up.value[d] + down.value[d];
    r.error[d] = up.error[d] + down.error[d];
  }
  r.evaluations = up.evaluations + down.evaluations;
  r.intervals = up.intervals + down.intervals;
  r.converged = up.converged && down.converged;
  return r;
}

QuadOptions perf_options(const NumericSettings& ns) {
  QuadOptions o = quad_options(ns);
  o.max_intervals = std::max(o.max_intervals, 4000);
  return o;
}

// (1 - (1+z)^{-nu}) / z
double rate_g(double nu, double z) {
  if (z == 0.0) return nu;
  return -std::expm1(-nu * std::log1p(z)) / z;
}

// sum_i (-1)^i C(n,i) g_{mu+i}(z) for the rate family
double rate_g_diff(int n, double mu, double z) {
  if (n == 0) return rate_g(mu, z);
  if (z == 0.0) return n == 1 ? -1.0 : 0.0;
  return -std::exp((n - 1.0) * std::log(z) - (mu + n) * std::log1p(z));
}

// jet of g(z (1 + s)) in s
Jet relative_jet(const GFunction& g, int order, double z) { return g.g(Jet::variable(order, 0.0) * z + z); }

// g_nu(z) = nu [t^nu] (z+t)^{nu-1} g(z+t) for integer nu, from a relative jet of g
double custom_g_from_jet(const Jet& gj, int nu, double z) {
  double s = 0.0;
  for (int j = 0; j <= nu - 1; ++j) s += real_binomial(nu - 1.0, j) * gj.c[nu - j];
  return nu * s / z;
}

// same, with a bound on the rounding error of the alternating sum
double custom_g_from_jet(const Jet& gj, int nu, double z, double& rounding) {
  double s = 0.0, sabs = 0.0;
  for (int j = 0; j <= nu - 1; ++j) {
    const double t = real_binomial(nu - 1.0, j) * gj.c[nu - j];
    s += t;
    sabs += std::abs(t);
  }
  rounding = 4.0 * nu * std::numeric_limits<double>::epsilon() * nu * sabs / std::abs(z);
  return nu * s / z;
}

// rounding lost in the jet sums; the result is flagged when it exceeds the series tolerance
void apply_rounding(MetricResult& res, double rounding, double tol) {
  res.diagnostics["custom_rounding_bound"] = rounding;
  res.abs_error_estimate += rounding;
  if (rounding > std::max(tol, 1e-8) * std::abs(res.value)) {
    res.converged = false;
    res.note = "custom g: derivative jets lose too many digits at this order; use integer m";
  }
}

// (-r)_n / (mu)_n
std::vector<double> moment_ratios(double r, double mu, int n) {
  std::vector<double> v(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) v[k] = v[k - 1] * (k - 1 - r) / (mu + k - 1);
  return v;
}

// int_0^inf z^{r-1} K(z / scale) dz
IntegrationResult moment_integral(const RadialKernel& K, double r, double scale, const NumericSettings& ns) {
  // split at z = 1 with K(0) integrated exactly, so small r does not need a long tail in log z
  const double k0 = K(0.0);
  const auto opt = perf_options(ns);
  auto up = integrate_gk_inf(
      [&](double y, double* out) {
        const double z = std::exp(y);
        out[0] = std::isfinite(z) ? std::exp(r * y) * K(z / scale) : 0.0;
      },
      1, 0.0, opt);
  auto down = integrate_gk_inf(
      [&](double y, double* out) {
        const double z = std::exp(-y);
        out[0] = std::exp(-r * y) * (K(z / scale) - k0);
      },
      1, 0.0, opt);
  IntegrationResult res;
  res.value = {up.value[0] + down.value[0] + k0 / r};
  res.error = {up.error[0] + down.error[0]};
  res.evaluations = up.evaluations + down.evaluations;
  res.intervals = up.intervals + down.intervals;
  res.converged = up.converged && down.converged;
  return res;
}

MetricResult divergent_result(const std::string& note) {
  MetricResult m;
  m.value = std::numeric_limits<double>::infinity();
  m.abs_error_estimate = std::numeric_limits<double>::infinity();
  m.divergent = true;
  m.converged = false;
  m.note = note;
  return m;
}

MetricResult tier_negative_binomial(const NetworkConfig& net, int k, const GFunction& g, const SeriesControls& sc,
                                    const NumericSettings& ns) {
  const auto& f = net.tiers.at(k).fading;
  const RadialKernel K(net, k, ns, sc.kernel);
  const double tol = sc.tol > 0 ? sc.tol : ns.perf_series_tol;
  const auto mix = nb_gamma_mixture(f, tol, std::max(sc.max_order, 100000));
  const int nc = static_cast<int>(mix.components.size());
  MetricResult res;
  res.kernel = K.branch();
  res.series_terms_used = nc;
  if (g.kind == MetricKind::Moment) {
    if (g.r >= net.delta()) return divergent_result("moment order >= delta: the SINR moment is infinite");
    const auto J = moment_integral(K, g.r, f.theta1, ns);
    double s = 0.0;
    for (const auto& c : mix.components)
      s += c.weight * std::exp(log_gamma(c.shape + g.r) - log_gamma(c.shape) - log_gamma(g.r));
    res.value = s * J.value[0];
    res.abs_error_estimate = s * J.error[0] + tol * std::abs(res.value);
    res.converged = J.converged;
    res.diagnostics["quad_evaluations"] = J.evaluations;
    return res;
  }
  if (g.kind == MetricKind::Custom && !is_int(f.mu))
    throw domain_error("custom g needs integer mu on the serving tier");
  const int top = static_cast<int>(std::lround(mix.components.back().shape));
  const bool custom = g.kind == MetricKind::Custom;
  auto r = integrate_positive(
      [&](double z, double* out) {
        const double kz = K(z / f.theta1);
        if (!custom) {
          for (int c = 0; c < nc; ++c) out[c] = rate_g(mix.components[c].shape, z) * kz;
        } else {
          const Jet gj = relative_jet(g, top, z);
          for (int c = 0; c < nc; ++c) {
            double rb = 0.0;
            out[c] = custom_g_from_jet(gj, static_cast<int>(std::lround(mix.components[c].shape)), z, rb) * kz;
            out[nc + c] = rb * std::abs(kz);
          }
        }
      },
      custom ? 2 * nc : nc, perf_options(ns));
  double v = 0.0, e = 0.0, rounding = 0.0;
  for (int c = 0; c < nc; ++c) {
    v += mix.components[c].weight * r.value[c];
    e += mix.components[c].weight * r.error[c];
    if (custom) rounding += mix.components[c].weight * r.value[nc + c];
  }
  res.value = v;
  res.abs_error_estimate = e + tol * std::abs(v);
  res.converged = r.converged;
  res.diagnostics["quad_evaluations"] = r.evaluations;
  if (custom) apply_rounding(res, rounding, tol);
  return res;
}

// finite gamma mixture for integer mu and m; g must vanish at 0
MetricResult tier_gamma_mixture(const NetworkConfig& net, int k, const GFunction& g, const NumericSettings& ns,
                                KernelMethod kernel) {
  const auto& f = net.tiers.at(k).fading;
  const auto mix = gamma_mixture(f);
  const RadialKernel K(net, k, ns, kernel);
  const int nc = static_cast<int>(mix.components.size());
  MetricResult res;
  res.kernel = K.branch();
  res.series_terms_used = nc;
  double v = 0.0, e = 0.0, rounding = 0.0;
  bool ok = true;
  if (g.kind == MetricKind::Moment) {
    if (g.r >= net.delta()) return divergent_result("moment order >= delta: the SINR moment is infinite");
    for (const auto& c : mix.components) {
      const auto J = moment_integral(K, g.r, c.scale, ns);
      const double gam = std::exp(log_gamma(c.shape + g.r) - log_gamma(c.shape) - log_gamma(g.r));
      v += c.weight * gam * J.value[0];
      e += std::abs(c.weight) * gam * J.error[0];
      ok = ok && J.converged;
    }
  } else {
    const bool custom = g.kind == MetricKind::Custom;
    int top = 1;
    for (const auto& c : mix.components) top = std::max(top, static_cast<int>(std::lround(c.shape)));
    auto r = integrate_positive(
        [&](double z, double* out) {
          Jet gj;
          if (custom) gj = relative_jet(g, top, z);
          for (int c = 0; c < nc; ++c) {
            const auto& comp = mix.components[c];
            const double kz = K(z / comp.scale);
            if (custom) {
              double rb = 0.0;
              out[c] = custom_g_from_jet(gj, static_cast<int>(std::lround(comp.shape)), z, rb) * kz;
              out[nc + c] = rb * kz;
            } else {
              out[c] = rate_g(comp.shape, z) * kz;
            }
          }
        },
        custom ? 2 * nc : nc, perf_options(ns));
    for (int c = 0; c < nc; ++c) {
      v += mix.components[c].weight * r.value[c];
      e += std::abs(mix.components[c].weight) * r.error[c];
      if (custom) rounding += std::abs(mix.components[c].weight) * r.value[nc + c];
    }
    ok = r.converged;
  }
  res.value = v;
  res.abs_error_estimate = e;
  res.converged = ok;
  if (g.kind == MetricKind::Custom) apply_rounding(res, rounding, ns.perf_series_tol);
  return res;
}

// the kernel identity needs g(0) = 0
GFunction anchored(const GFunction& g, double& g0) {
  g0 = 0.0;
  if (g.kind != MetricKind::Custom) return g;
  g0 = g.g(Jet(0, 0.0)).c[0];
  if (g0 == 0.0) return g;
  const auto inner = g.g;
  const double shift = g0;
  return GFunction::custom([inner, shift](const Jet& x) { return inner(x) - shift; });
}

}  // namespace

MetricResult expected_g_tier_anchored(const NetworkConfig& net, int k, const GFunction& g, const SeriesControls& sc,
                                      const NumericSettings& ns);

double g_family(const GFunction& g, double nu, double z) {
  switch (g.kind) {
    case MetricKind::Rate:
      return rate_g(nu, z);
    case MetricKind::Moment:
      return std::exp(log_gamma(nu + g.r) - log_gamma(nu) - log_gamma(g.r) + (g.r - 1.0) * std::log(z));
    case MetricKind::Custom: {
      if (!is_int(nu)) throw domain_error("custom g: order must be an integer");
      const int n = static_cast<int>(std::lround(nu));
      if (z == 0.0) {
        const Jet gj = g.g(Jet::variable(1, 0.0));
        return n * gj.c[1];
      }
      return custom_g_from_jet(relative_jet(g, n, z), n, z);
    }
  }
  return 0.0;
}

MetricResult expected_g_tier(const NetworkConfig& net, int k, const GFunction& g_in, const SeriesControls& sc,
                             const NumericSettings& ns) {
  double g0 = 0.0;
  const GFunction g = anchored(g_in, g0);
  auto res = expected_g_tier_anchored(net, k, g, sc, ns);
  res.value += g0;
  return res;
}

MetricResult expected_g_tier_anchored(const NetworkConfig& net, int k, const GFunction& g, const SeriesControls& sc,
                                      const NumericSettings& ns) {
  const auto& fk = net.tiers.at(k).fading;
  if (g.kind == MetricKind::Custom && is_int(fk.mu) && is_int(fk.m)) return tier_gamma_mixture(net, k, g, ns, sc.kernel);
  if (sc.method == SeriesMethod::NegativeBinomial) return tier_negative_binomial(net, k, g, sc, ns);
  const auto& f = net.tiers.at(k).fading;
  if (g.kind == MetricKind::Custom && !is_int(f.mu))
    throw domain_error("custom g needs integer mu on the serving tier (tiers[" + std::to_string(k) + "].fading.mu)");
  const double beta = laguerre_scale(f, sc.scale);
  const int max_order = sc.max_order > 0 ? sc.max_order : ns.perf_max_order;
  const double tol = sc.tol > 0 ? sc.tol : ns.perf_series_tol;
  const auto co = laguerre_coeffs_scaled(f, max_order, tol, beta, false, 0);
  const int N = co.order;
  const RadialKernel K(net, k, ns, sc.kernel);
  MetricResult res;
  res.kernel = K.branch();
  res.series_terms_used = N + 1;
  res.diagnostics["laguerre_scale"] = beta;
  res.diagnostics["laguerre_tail"] = co.tail_estimate;
  const double mu = f.mu;

  if (g.kind == MetricKind::Moment) {
    if (g.r >= net.delta()) return divergent_result("moment order >= delta: the SINR moment is infinite");
    const auto J = moment_integral(K, g.r, beta, ns);
    const double pre = std::exp(log_gamma(mu + g.r) - log_gamma(g.r) - log_gamma(mu));
    double s = 0.0, sabs = 0.0;
    if (sc.xi == XiMode::Differenced) {
      const auto rat = moment_ratios(g.r, mu, N);
      for (int n = 0; n <= N; ++n) {
        s += co.C[n] * rat[n];
        sabs += std::abs(co.C[n] * rat[n]);
      }
      s *= pre;
      sabs *= pre;
    } else {
      std::vector<double> xi(N + 1);
      for (int i = 0; i <= N; ++i) xi[i] = std::exp(log_gamma(mu + i + g.r) - log_gamma(mu + i) - log_gamma(g.r));
      for (int n = 0; n <= N; ++n) {
        double inner = 0.0;
        for (int i = 0; i <= n; ++i) inner += ((i % 2) ? -1.0 : 1.0) * real_binomial(n, i) * xi[i];
        s += co.C[n] * inner;
        sabs += std::abs(co.C[n] * inner);
      }
    }
    res.value = s * J.value[0];
    res.abs_error_estimate = sabs * J.error[0] + co.tail_estimate * std::abs(J.value[0]) * pre;
    res.converged = co.converged && J.converged;
    res.diagnostics["quad_evaluations"] = J.evaluations;
    return res;
  }

  const int dim = N + 1;
  std::vector<double> I;
  std::vector<double> Ierr;
  bool quad_ok = true;
  int evals = 0;
  if (sc.xi == XiMode::Naive) {
    // every (n, i) pair integrated on its own
    double v = 0.0, e = 0.0;
    for (int n = 0; n <= N; ++n) {
      double inner = 0.0;
      for (int i = 0; i <= n; ++i) {
        auto r = integrate_positive(
            [&](double z, double* out) { out[0] = g_family(g, mu + i, z) * K(z / beta); }, 1, perf_options(ns));
        inner += ((i % 2) ? -1.0 : 1.0) * real_binomial(n, i) * r.value[0];
        e += std::abs(co.C[n]) * real_binomial(n, i) * r.error[0];
        quad_ok = quad_ok && r.converged;
        evals += r.evaluations;
      }
      v += co.C[n] * inner;
    }
    res.value = v;
    res.abs_error_estimate = e;
    res.converged = co.converged && quad_ok;
    res.diagnostics["quad_evaluations"] = evals;
    return res;
  }

  const bool differenced = sc.xi == XiMode::Differenced && g.kind == MetricKind::Rate;
  const bool custom = g.kind == MetricKind::Custom;
  const int top = static_cast<int>(std::lround(mu)) + N;
  auto r = integrate_positive(
      [&](double z, double* out) {
        const double kz = K(z / beta);
        if (differenced) {
          for (int n = 0; n <= N; ++n) out[n] = rate_g_diff(n, mu, z) * kz;
        } else if (g.kind == MetricKind::Rate) {
          for (int i = 0; i <= N; ++i) out[i] = rate_g(mu + i, z) * kz;
        } else {
          const Jet gj = relative_jet(g, top, z);
          const int m0 = static_cast<int>(std::lround(mu));
          for (int i = 0; i <= N; ++i) {
            double rb = 0.0;
            out[i] = custom_g_from_jet(gj, m0 + i, z, rb) * kz;
            out[dim + i] = rb * std::abs(kz);
          }
        }
      },
      custom ? 2 * dim : dim, perf_options(ns));
  I = r.value;
  Ierr = r.error;
  quad_ok = r.converged;
  evals = r.evaluations;
  double v = 0.0, e = 0.0, imax = 0.0, rounding = 0.0;
  if (differenced) {
    for (int n = 0; n <= N; ++n) {
      v += co.C[n] * I[n];
      e += std::abs(co.C[n]) * Ierr[n];
      imax = std::max(imax, std::abs(I[n]));
    }
  } else {
    for (int n = 0; n <= N; ++n) {
      double inner = 0.0, ierr = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double b = real_binomial(n, i);
        inner += ((i % 2) ? -1.0 : 1.0) * b * I[i];
        ierr += b * Ierr[i];
        if (custom) rounding += std::abs(co.C[n]) * b * I[dim + i];
      }
      v += co.C[n] * inner;
      e += std::abs(co.C[n]) * ierr;
      imax = std::max(imax, std::abs(inner));
    }
  }
  res.value = v;
  res.abs_error_estimate = e + (std::isfinite(co.tail_estimate) ? co.tail_estimate * imax : imax);
  res.converged = co.converged && quad_ok;
  res.diagnostics["quad_evaluations"] = evals;
  if (custom) apply_rounding(res, rounding, tol);
  return res;
}

MetricResult expected_g_sinr(const NetworkConfig& net, const GFunction& g, const SeriesControls& sc,
                             const NumericSettings& ns) {
  net.validate();
  MetricResult total;
  total.value = 0.0;
  for (size_t k = 0; k < net.tiers.size(); ++k) {
    const double pk = association_probability(net, static_cast<int>(k));
    const auto r = expected_g_tier(net, static_cast<int>(k), g, sc, ns);
    if (r.divergent) return r;
    total.value += pk * r.value;
    total.abs_error_estimate += pk * r.abs_error_estimate;
    total.series_terms_used = std::max(total.series_terms_used, r.series_terms_used);
    total.converged = total.converged && r.converged;
    if (k == 0) total.kernel = r.kernel;
    if (!r.note.empty()) total.note = r.note;
    const std::string tag = "tier" + std::to_string(k) + "_";
    total.diagnostics[tag + "association"] = pk;
    total.diagnostics[tag + "value"] = r.value;
    for (const auto& [key, val] : r.diagnostics) total.diagnostics[tag + key] = val;
  }
  return total;
}

MetricResult expected_g_integer(const NetworkConfig& net, const GFunction& g_in, const NumericSettings& ns,
                                KernelMethod kernel) {
  net.validate();
  double g0 = 0.0;
  const GFunction g = anchored(g_in, g0);
  MetricResult total;
  total.value = g0;
  for (size_t k = 0; k < net.tiers.size(); ++k) {
    const double pk = association_probability(net, static_cast<int>(k));
    const auto r = tier_gamma_mixture(net, static_cast<int>(k), g, ns, kernel);
    if (r.divergent) return r;
    total.value += pk * r.value;
    total.abs_error_estimate += pk * r.abs_error_estimate;
    total.series_terms_used = std::max(total.series_terms_used, r.series_terms_used);
    total.converged = total.converged && r.converged;
    if (k == 0) total.kernel = r.kernel;
    if (!r.note.empty()) total.note = r.note;
    total.diagnostics["tier" + std::to_string(k) + "_components"] = r.series_terms_used;
  }
  return total;
}

MetricResult spectral_efficiency(const NetworkConfig& net, const SeriesControls& sc, const NumericSettings& ns) {
  return expected_g_sinr(net, GFunction::rate(), sc, ns);
}

MetricResult sinr_moment(const NetworkConfig& net, double r, const SeriesControls& sc, const NumericSettings& ns) {
  if (!(r > 0.0)) throw domain_error("moment order r must be > 0");
  return expected_g_sinr(net, GFunction::moment(r), sc, ns);
}

MetricResult sinr_mgf(const NetworkConfig& net, double t, int terms, const SeriesControls& sc,
                      const NumericSettings& ns) {
  MetricResult res;
  res.series_terms_used = 1;
  if (t == 0.0 || terms <= 0) {
    res.value = 1.0;
    return res;
  }
  // E[SINR^n] is infinite for every n >= delta, so the moment series breaks at its first term
  res.divergent = true;
  res.converged = false;
  res.diagnostics["first_divergent_order"] = 1;
  if (t > 0.0) {
    res.value = std::numeric_limits<double>::infinity();
    res.abs_error_estimate = std::numeric_limits<double>::infinity();
    res.note = "moment series diverges; E[exp(t SINR)] is infinite for t > 0";
    return res;
  }
  bool integer_mu = true;
  for (const auto& tr : net.tiers) integer_mu = integer_mu && is_int(tr.fading.mu);
  if (!integer_mu) {
    res.value = std::numeric_limits<double>::quiet_NaN();
    res.note = "moment series diverges; direct evaluation for t < 0 needs integer mu";
    return res;
  }
  const auto g = GFunction::custom([t](const Jet& x) { return exp(t * x); });
  SeriesControls c = sc;
  c.method = SeriesMethod::NegativeBinomial;
  auto d = expected_g_sinr(net, g, c, ns);
  const std::string inner = d.note;
  d.divergent = false;
  d.note = "moment series diverges; value is the direct evaluation of E[exp(t SINR)]";
  if (!inner.empty()) d.note += "; " + inner;
  d.diagnostics["series_divergent"] = 1;
  return d;
}

}  // namespace kms
