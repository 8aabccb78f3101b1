#include "kms/outage.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "kms/quadrature.hpp"
#include "kms/specfun.hpp"

namespace kms {

namespace {

constexpr int kJetCap = 1000;
constexpr int kLaguerreCap = 50;

// P(K > j) for the dominant-path count K ~ NB(m, q), j = 0..n
std::vector<double> nb_survival(const KappaMuShadowedParams& f, int n) {
  const double q = f.nb_q();
  std::vector<double> s(n + 1);
  double w = std::exp(f.m * std::log1p(-q));
  double cdf = 0.0;
  for (int j = 0; j <= n; ++j) {
    cdf += w;
    s[j] = std::max(0.0, 1.0 - cdf);
    w *= (f.m + j) / (j + 1.0) * q;
  }
  return s;
}

// E[F(B)] for B ~ Beta(a, 1 - a), endpoint values subtracted so a near 0 or 1 stays well conditioned
double beta_mean(const std::function<double(double)>& F, double a, double f0, double f1, double rel_tol) {
  const double b = 1.0 - a;
  auto lo = integrate_tanh_sinh(
      [&](double x, double da, double, double* out) {
        out[0] = std::pow(da, a - 1.0) * (std::pow(1.0 - x, b - 1.0) * F(x) - f0);
      },
      1, 0.0, 0.5, rel_tol);
  auto hi = integrate_tanh_sinh(
      [&](double x, double, double db, double* out) {
        out[0] = std::pow(db, b - 1.0) * (std::pow(x, a - 1.0) * F(x) - f1);
      },
      1, 0.5, 1.0, rel_tol);
  const double norm = std::exp(-log_gamma(a) - log_gamma(b));
  const double ends = f0 * std::exp(-a * std::log(2.0) - log_gamma(a + 1.0) - log_gamma(b)) +
                      f1 * std::exp(-b * std::log(2.0) - log_gamma(a) - log_gamma(b + 1.0));
  return norm * (lo.value[0] + hi.value[0]) + ends;
}

// E[Gamma(eps, X) / Gamma(eps)] = E_B[K(c / B)], B ~ Beta(eps, 1 - eps)
double fractional_head(const RadialKernel& K, double c, double eps, const NumericSettings& ns) {
  return beta_mean([&](double x) { return K(c / x); }, eps, 0.0, K(c), std::max(ns.quad_rel_tol, 1e-12));
}

// p_{mu0+i} = E[e^{-X} X^{mu0+i}] / Gamma(mu0+i+1), i = 0..N, X = T r^alpha (I + N) / (P theta1)
std::vector<double> fractional_p(const RadialKernel& K, double c, double mu0, int N, const NumericSettings& ns,
                                 bool& ok) {
  const double eps = 1.0 - mu0;
  const int dim = N + 1;
  auto F = [&](double u, double* out) {
    const auto t = kernel_taylor(K, c, 1.0 + u, N + 1);
    for (int i = 0; i <= N; ++i) out[i] = ((i % 2) ? 1.0 : -1.0) * t[i + 1];
  };
  std::vector<double> f0(dim);
  F(0.0, f0.data());
  // int_0^1 u^{eps-1} (F(u) - F(0)) du + F(0) / eps
  auto near = integrate_tanh_sinh(
      [&](double u, double da, double, double* out) {
        F(u, out);
        const double w = std::pow(da, eps - 1.0);
        for (int i = 0; i <= N; ++i) out[i] = w * (out[i] - f0[i]);
      },
      dim, 0.0, 1.0, std::max(ns.quad_rel_tol, 1e-11), 9);
  QuadOptions o = quad_options(ns);
  o.abs_tol = 1e-300;
  auto far = integrate_gk_inf(
      [&](double u, double* out) {
        if (!std::isfinite(c * (1.0 + u))) {
          std::fill(out, out + dim, 0.0);
          return;
        }
        F(u, out);
        const double w = std::pow(u, eps - 1.0);
        for (int i = 0; i <= N; ++i) out[i] *= w;
      },
      dim, 1.0, o);
  ok = near.converged && far.converged;
  std::vector<double> p(dim);
  // 1 / Gamma(eps) = eps / Gamma(1 + eps)
  for (int i = 0; i <= N; ++i) {
    const double g = std::exp(log_gamma(i + 2.0) - log_gamma(eps + 1.0) - log_gamma(mu0 + i + 1.0));
    p[i] = g * (eps * (near.value[i] + far.value[i]) + f0[i]);
  }
  return p;
}

MetricResult outage_nb(const NetworkConfig& net, int k, double T, const OutageControls& oc,
                       const NumericSettings& ns) {
  const auto& f = net.tiers.at(k).fading;
  const RadialKernel K(net, k, ns, oc.kernel);
  const double c = T / f.theta1;
  double fl = std::floor(f.mu + 1e-12);
  double mu0 = f.mu - fl;
  if (mu0 < 1e-12) mu0 = 0.0;
  const int base = static_cast<int>(fl);
  const int cap = oc.max_order > 0 ? oc.max_order : kJetCap;
  MetricResult res;
  res.kernel = K.branch();
  const double head = mu0 > 0.0 ? fractional_head(K, c, mu0, ns) : 0.0;
  int N = std::min(cap, base + 16);
  bool quad_ok = true;
  for (;;) {
    std::vector<double> p;
    if (mu0 == 0.0) {
      const auto t = kernel_taylor(K, c, 1.0, N);
      p.resize(N + 1);
      for (int i = 0; i <= N; ++i) p[i] = ((i % 2) ? -1.0 : 1.0) * t[i];
    } else {
      p = fractional_p(K, c, mu0, N, ns, quad_ok);
    }
    const auto sk = nb_survival(f, N + 1);
    auto S = [&](int i) { return i < base ? 1.0 : sk[i - base]; };
    double cover = head, mass = head;
    for (int i = 0; i <= N; ++i) {
      cover += p[i] * S(i);
      mass += p[i];
    }
    const double bound = S(N + 1) * std::max(0.0, 1.0 - mass);
    if (bound < oc.tol || N >= cap) {
      res.value = std::clamp(1.0 - cover, 0.0, 1.0);
      res.abs_error_estimate = bound + 1e-14 * (N + 1);
      res.series_terms_used = N + 1;
      res.converged = bound < oc.tol && quad_ok;
      res.diagnostics["truncation_bound"] = bound;
      res.diagnostics["mass_deficit"] = 1.0 - mass;
      res.diagnostics["fractional_head"] = head;
      if (!res.converged) res.note = "outage series did not reach the tolerance";
      return res;
    }
    N = std::min(cap, 2 * N);
  }
}

MetricResult outage_laguerre(const NetworkConfig& net, int k, double T, const OutageControls& oc,
                             const NumericSettings& ns) {
  const auto& f = net.tiers.at(k).fading;
  const double beta = laguerre_scale(f, oc.scale);
  const int max_order = oc.max_order > 0 ? oc.max_order : kLaguerreCap;
  const auto co = laguerre_coeffs_scaled(f, max_order, oc.tol, beta, false, 0);
  const RadialKernel K(net, k, ns, oc.kernel);
  const int mu = static_cast<int>(std::lround(f.mu));
  const int N = co.order;
  const auto t = kernel_taylor(K, T / beta, 1.0, mu + N);
  std::vector<double> p(mu + N + 1);
  for (int i = 0; i <= mu + N; ++i) p[i] = ((i % 2) ? -1.0 : 1.0) * t[i];
  double v = 1.0, spread = 0.0;
  for (int i = 0; i < mu; ++i) v -= p[i];
  for (int n = 1; n <= N; ++n) {
    double inner = 0.0;
    for (int i = 0; i <= n - 1; ++i) {
      const double term = real_binomial(n - 1.0, i) * p[mu + i];
      inner += (i % 2) ? -term : term;
      spread = std::max(spread, std::abs(co.C[n] * term));
    }
    v += co.C[n] * inner;
  }
  MetricResult res;
  res.kernel = K.branch();
  res.value = v;
  res.series_terms_used = N + 1;
  res.abs_error_estimate = co.tail_estimate + spread * N * 1e-16;
  res.converged = co.converged;
  res.diagnostics["laguerre_scale"] = beta;
  res.diagnostics["cancellation"] = spread;
  return res;
}

}  // namespace

std::vector<double> kernel_taylor(const RadialKernel& K, double c, double s0, int order) {
  const Jet z = Jet::variable(order, 0.0) * c + c * s0;
  return K(z).c;
}

MetricResult outage_tier(const NetworkConfig& net, int k, double T, const OutageControls& oc,
                         const NumericSettings& ns) {
  if (!(T >= 0.0)) throw domain_error("threshold: T must be >= 0");
  MetricResult res;
  if (T == 0.0) return res;
  if (std::isinf(T)) {
    res.value = 1.0;
    return res;
  }
  const auto& f = net.tiers.at(k).fading;
  const bool integer_mu = std::abs(f.mu - std::round(f.mu)) < 1e-12;
  if (oc.method == OutageMethod::LaguerreJets) {
    if (integer_mu) return outage_laguerre(net, k, T, oc, ns);
    auto r = outage_nb(net, k, T, oc, ns);
    r.note = "non-integer mu: evaluated by the negative-binomial route";
    return r;
  }
  return outage_nb(net, k, T, oc, ns);
}

MetricResult outage_probability(const NetworkConfig& net, double T, const OutageControls& oc,
                                const NumericSettings& ns) {
  net.validate();
  MetricResult total;
  for (size_t k = 0; k < net.tiers.size(); ++k) {
    const double pk = association_probability(net, static_cast<int>(k));
    const auto r = outage_tier(net, static_cast<int>(k), T, oc, ns);
    total.value += pk * r.value;
    total.abs_error_estimate += pk * r.abs_error_estimate;
    total.series_terms_used = std::max(total.series_terms_used, r.series_terms_used);
    total.converged = total.converged && r.converged;
    if (k == 0) total.kernel = r.kernel;
    if (!r.note.empty()) total.note = r.note;
    const std::string tag = "tier" + std::to_string(k) + "_";
    total.diagnostics[tag + "value"] = r.value;
    for (const auto& [key, val] : r.diagnostics) total.diagnostics[tag + key] = val;
  }
  total.value = std::clamp(total.value, 0.0, 1.0);
  return total;
}

}  // namespace kms
