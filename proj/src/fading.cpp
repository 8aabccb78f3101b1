#include "kms/fading.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "kms/specfun.hpp"

namespace kms {

namespace {

bool is_int(double v) { return std::abs(v - std::round(v)) < 1e-12 && v >= 0.5; }

std::string num(double v) { return std::to_string(v); }

// Neumaier compensated sum
struct CompSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// coefficients of (1 - a t)^p up to t^n
std::vector<double> binomial_series(double a, double p, int n) {
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (int j = 1; j <= n; ++j) e[j] = e[j - 1] * (j - 1 - p) * a / j;
  return e;
}

}  // namespace

KappaMuShadowedParams KappaMuShadowedParams::make(double kappa, double mu, double m, double mean_power) {
  KappaMuShadowedParams p;
  p.kappa = kappa;
  p.mu = mu;
  p.m = m;
  p.mean_power = mean_power;
  p.validate();
  p.theta1 = mean_power / (mu * (1.0 + kappa));
  p.theta2 = (mu * kappa + m) * mean_power / (mu * (1.0 + kappa) * m);
  return p;
}

void KappaMuShadowedParams::validate() const {
  if (!(std::isfinite(kappa) && kappa >= 0.0)) throw domain_error("fading.kappa must be >= 0, got " + num(kappa));
  if (!(std::isfinite(mu) && mu > 0.0)) throw domain_error("fading.mu must be > 0, got " + num(mu));
  if (!(std::isfinite(m) && m > 0.0)) throw domain_error("fading.m must be > 0, got " + num(m));
  if (!(std::isfinite(mean_power) && mean_power > 0.0))
    throw domain_error("fading.mean_power must be > 0, got " + num(mean_power));
}

double pdf_exact(const KappaMuShadowedParams& p, double x, const NumericSettings& ns) {
  if (x < 0.0 || std::isnan(x)) throw domain_error("pdf_exact: x must be >= 0");
  const double t1 = p.theta1, t2 = p.theta2;
  if (x == 0.0) {
    if (p.mu < 1.0) return std::numeric_limits<double>::infinity();
    if (p.mu > 1.0) return 0.0;
    return std::exp((p.m - 1.0) * std::log(t1) - p.m * std::log(t2));
  }
  const double c = (t2 - t1) / (t1 * t2);
  // e^{-x/theta1} 1F1(m; mu; c x) = e^{-x/theta2} [e^{-cx} 1F1(m; mu; c x)]
  const double lg = (p.m - p.mu) * std::log(t1) - p.m * std::log(t2) + (p.mu - 1.0) * std::log(x) - x / t2 -
                    log_gamma(p.mu);
  return std::exp(lg) * kummer_1f1_scaled(p.m, p.mu, c * x, ns);
}

double cdf_exact(const KappaMuShadowedParams& p, double x, const NumericSettings& ns) {
  if (x < 0.0 || std::isnan(x)) throw domain_error("cdf_exact: x must be >= 0");
  if (x == 0.0) return 0.0;
  const auto mix = nb_gamma_mixture(p, 1e-16);
  CompSum s;
  for (const auto& c : mix.components) s.add(c.weight * lower_incomplete_gamma_reg(c.shape, x / c.scale, ns));
  return std::clamp(s.value(), 0.0, 1.0);
}

double moment(const KappaMuShadowedParams& p, double j, const NumericSettings& ns) {
  if (!(j > 0.0)) throw domain_error("moment: order must be > 0, got " + num(j));
  const double lg = (p.m - p.mu) * std::log(p.theta1) + (p.mu + j - p.m) * std::log(p.theta2) +
                    log_gamma(p.mu + j) - log_gamma(p.mu);
  return std::exp(lg) * gauss_2f1(p.mu - p.m, p.mu + j, p.mu, -p.mu * p.kappa / p.m, ns);
}

double log_laplace(const KappaMuShadowedParams& p, double s) {
  if (!(s >= 0.0)) throw domain_error("laplace: s must be >= 0");
  // split so that large m does not cancel
  return -p.mu * std::log1p(p.theta1 * s) - p.m * std::log1p((p.theta2 - p.theta1) * s / (1.0 + p.theta1 * s));
}

double laplace(const KappaMuShadowedParams& p, double s) { return std::exp(log_laplace(p, s)); }

double laguerre_scale(const KappaMuShadowedParams& p, ScaleMode mode) {
  return mode == ScaleMode::Auto ? 0.5 * (p.theta1 + p.theta2) : 1.0;
}

LaguerreCoeffs laguerre_coeffs_scaled(const KappaMuShadowedParams& p, int max_order, double tol, double scale,
                                      bool with_tables, int hard_limit) {
  if (max_order < 0) throw domain_error("laguerre_coeffs: max_order must be >= 0");
  if (!(scale > 0.0)) throw domain_error("laguerre_coeffs: scale must be > 0");
  const int limit = hard_limit > 0 ? std::min(hard_limit, max_order) : max_order;
  // +1 so the b table can use C_{N+1}
  const int n_all = limit + 1;
  const double a1 = 1.0 - p.theta1 / scale, a2 = 1.0 - p.theta2 / scale;
  const auto s1 = binomial_series(a1, p.m - p.mu, n_all);
  const auto s2 = binomial_series(a2, -p.m, n_all);
  std::vector<double> C(n_all + 1);
  for (int n = 0; n <= n_all; ++n) {
    CompSum s;
    for (int j = 0; j <= n; ++j) s.add(s1[j] * s2[n - j]);
    C[n] = s.value();
  }
  LaguerreCoeffs co;
  co.mu = p.mu;
  co.scale = scale;
  const double ratio = std::max(std::abs(a1), std::abs(a2));
  int small = 0, order = limit;
  bool conv = false;
  for (int n = 1; n <= limit; ++n) {
    const double norm = std::exp(log_gamma(n + 1.0) - log_gamma(n + p.mu));
    const double t = std::abs(C[n]) * std::max(1.0, norm);
    small = t < tol ? small + 1 : 0;
    if (small >= 3) {
      order = n;
      conv = ratio < 1.0;
      break;
    }
  }
  if (limit == 0) conv = ratio < 1.0 || std::abs(C[1]) < tol;
  co.order = order;
  co.converged = conv;
  if (ratio < 1.0)
    co.tail_estimate = std::abs(C[order]) * ratio / (1.0 - ratio) + std::abs(C[order + 1]);
  else
    co.tail_estimate = std::numeric_limits<double>::infinity();
  co.C.assign(C.begin(), C.begin() + order + 2);
  if (with_tables) {
    co.c.resize(order + 1);
    co.b.resize(order + 1);
    for (int n = 0; n <= order; ++n) {
      co.c[n].resize(n + 1);
      co.b[n].resize(n + 1);
      for (int i = 0; i <= n; ++i) {
        const double sg = (i % 2 == 0) ? 1.0 : -1.0;
        const double bin = real_binomial(n, i);
        co.c[n][i] = sg * co.C[n] * bin / gamma_fn(p.mu + i);
        co.b[n][i] = sg * co.C[n + 1] * bin / gamma_fn(p.mu + i + 1.0);
      }
    }
  }
  co.C.resize(order + 1);
  return co;
}

LaguerreCoeffs laguerre_coeffs(const KappaMuShadowedParams& p, int max_order, double tol, ScaleMode mode,
                               const NumericSettings& ns) {
  if (max_order < 1 || max_order > ns.laguerre_max_order)
    throw domain_error("laguerre_coeffs: max_order must be in [1, " + std::to_string(ns.laguerre_max_order) +
                       "], got " + std::to_string(max_order));
  return laguerre_coeffs_scaled(p, max_order, tol, laguerre_scale(p, mode), true, 0);
}

std::vector<double> laguerre_coeffs_moment_sum(const KappaMuShadowedParams& p, int order,
                                               const NumericSettings& ns) {
  std::vector<double> C(order + 1, 0.0);
  std::vector<double> mom(order + 1, 1.0);
  for (int j = 1; j <= order; ++j) mom[j] = moment(p, j, ns);
  for (int n = 0; n <= order; ++n) {
    CompSum s;
    double biggest = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double sg = (j % 2 == 0) ? 1.0 : -1.0;
      const double t = sg * std::exp(-log_gamma(j + 1.0)) * real_binomial(n + p.mu - 1.0, n - j) * mom[j];
      biggest = std::max(biggest, std::abs(t));
      s.add(t);
    }
    C[n] = s.value();
    if (biggest > 1e12 * std::max(std::abs(C[n]), 1.0))
      throw convergence_error("laguerre moment sum: cancellation at n=" + std::to_string(n));
  }
  return C;
}

namespace {

// sum_n C_n n!/Gamma(n+mu) L_n^{mu-1}(u), plus the largest term magnitude
std::pair<double, double> pdf_core(const LaguerreCoeffs& co, double u) {
  const double a = co.mu - 1.0;
  double lm1 = 0.0, l = 1.0;
  double r = 1.0 / gamma_fn(co.mu);
  CompSum s;
  double biggest = 0.0;
  for (int n = 0; n <= co.order; ++n) {
    if (n == 1) {
      lm1 = l;
      l = 1.0 + a - u;
    } else if (n > 1) {
      const double nl = ((2.0 * (n - 1) + 1.0 + a - u) * l - (n - 1 + a) * lm1) / n;
      lm1 = l;
      l = nl;
    }
    if (n > 0) r *= n / (n + co.mu - 1.0);
    const double t = co.C[n] * r * l;
    biggest = std::max(biggest, std::abs(t));
    s.add(t);
  }
  return {s.value(), biggest};
}

// sum_{n>=1} C_n (n-1)!/Gamma(n+mu) L_{n-1}^{mu}(u)
std::pair<double, double> cdf_core(const LaguerreCoeffs& co, double u) {
  const double a = co.mu;
  double lm1 = 0.0, l = 1.0;
  double q = 1.0 / gamma_fn(co.mu + 1.0);
  CompSum s;
  double biggest = 0.0;
  for (int n = 1; n <= co.order; ++n) {
    const int k = n - 1;
    if (k == 1) {
      lm1 = l;
      l = 1.0 + a - u;
    } else if (k > 1) {
      const double nl = ((2.0 * (k - 1) + 1.0 + a - u) * l - (k - 1 + a) * lm1) / k;
      lm1 = l;
      l = nl;
    }
    if (n > 1) q *= (n - 1.0) / (n + co.mu - 1.0);
    const double t = co.C[n] * q * l;
    biggest = std::max(biggest, std::abs(t));
    s.add(t);
  }
  return {s.value(), biggest};
}

}  // namespace

SeriesEval pdf_series_checked(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x) {
  if (x < 0.0) throw domain_error("pdf_series: x must be >= 0");
  SeriesEval ev;
  ev.max_usable_x = usable_x_limit(co);
  const double u = x / co.scale;
  if (u == 0.0) {
    ev.value = p.mu < 1.0 ? std::numeric_limits<double>::infinity() : (p.mu > 1.0 ? 0.0 : pdf_core(co, 0.0).first);
    ev.value /= co.scale;
    return ev;
  }
  const auto [s, big] = pdf_core(co, u);
  ev.value = s * std::exp((co.mu - 1.0) * std::log(u) - u) / co.scale;
  ev.usable = big <= 1e6 * std::abs(s) || big * std::exp((co.mu - 1.0) * std::log(u) - u) < 1e-12;
  return ev;
}

double pdf_series(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x) {
  return pdf_series_checked(co, p, x).value;
}

SeriesEval cdf_series_checked(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x) {
  if (x < 0.0) throw domain_error("cdf_series: x must be >= 0");
  SeriesEval ev;
  ev.max_usable_x = usable_x_limit(co);
  if (x == 0.0) return ev;
  const double u = x / co.scale;
  const auto [s, big] = cdf_core(co, u);
  const double w = std::exp(co.mu * std::log(u) - u);
  const double raw = lower_incomplete_gamma_reg(co.mu, u) + s * w;
  ev.usable = big <= 1e6 * std::abs(s) || big * w < 1e-12;
  ev.value = std::clamp(raw, 0.0, 1.0);
  (void)p;
  return ev;
}

double cdf_series(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x) {
  return cdf_series_checked(co, p, x).value;
}

double pdf_series_double_sum(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x) {
  if (co.c.empty()) throw domain_error("pdf_series_double_sum: coefficient tables were not built");
  if (x <= 0.0) return pdf_series(co, p, x);
  const double u = x / co.scale;
  CompSum s;
  for (int n = 0; n <= co.order; ++n)
    for (int i = 0; i <= n; ++i) s.add(co.c[n][i] * std::pow(u, i));
  return s.value() * std::exp((co.mu - 1.0) * std::log(u) - u) / co.scale;
}

double usable_x_limit(const LaguerreCoeffs& co) {
  if (co.c.empty()) return std::numeric_limits<double>::infinity();
  // loss of digits ~ sum |c_{i,n}| u^i / |sum c_{i,n} u^i|
  double last_ok = 0.0;
  for (double u = 0.05; u <= 200.0; u *= 1.05) {
    CompSum s;
    double a = 0.0;
    for (int n = 0; n <= co.order; ++n)
      for (int i = 0; i <= n; ++i) {
        const double t = co.c[n][i] * std::pow(u, i);
        s.add(t);
        a += std::abs(t);
      }
    if (a > 1e6 * std::abs(s.value())) break;
    last_ok = u;
  }
  return last_ok * co.scale;
}

double GammaMixture::pdf(double x) const {
  if (x < 0.0) throw domain_error("mixture pdf: x must be >= 0");
  double s = 0.0;
  for (const auto& c : components) {
    if (x == 0.0) {
      if (c.shape < 1.0) return std::numeric_limits<double>::infinity();
      if (c.shape == 1.0) s += c.weight / c.scale;
      continue;
    }
    s += c.weight * std::exp((c.shape - 1.0) * std::log(x) - x / c.scale - log_gamma(c.shape) -
                             c.shape * std::log(c.scale));
  }
  return s;
}

double GammaMixture::laplace(double s) const {
  double v = 0.0;
  for (const auto& c : components) v += c.weight * std::exp(-c.shape * std::log1p(c.scale * s));
  return v;
}

GammaMixture gamma_mixture(const KappaMuShadowedParams& p) {
  if (!is_int(p.mu) || !is_int(p.m))
    throw domain_error("gamma_mixture: mu and m must be positive integers, got mu=" + num(p.mu) + " m=" + num(p.m));
  const int mu = static_cast<int>(std::lround(p.mu)), m = static_cast<int>(std::lround(p.m));
  GammaMixture g;
  const double t1 = p.theta1, t2 = p.theta2;
  if (std::abs(t2 / t1 - 1.0) < 1e-8) {
    g.components.push_back({1.0, static_cast<double>(mu), t1});
    return g;
  }
  if (m >= mu) {
    // (1 - rho + rho y)^{m-mu} y^{-m} with y = 1 + theta2 s
    const double rho = t1 / t2;
    const int d = m - mu;
    for (int i = 0; i <= d; ++i) {
      const double w = real_binomial(d, i) * std::pow(rho, i) * std::pow(1.0 - rho, d - i);
      g.components.push_back({w, static_cast<double>(m - i), t2});
    }
  } else {
    const int a = mu - m, b = m;
    const double r = t2 / t1, rho = 1.0 / r;
    auto neg_binom = [](int k, int i) {
      // binom(-k, i)
      return ((i % 2 == 0) ? 1.0 : -1.0) * real_binomial(k + i - 1.0, i);
    };
    for (int j = 1; j <= a; ++j) {
      const double w = std::pow(1.0 - r, -b) * neg_binom(b, a - j) * std::pow(r / (1.0 - r), a - j);
      g.components.push_back({w, static_cast<double>(j), t1});
    }
    for (int j = 1; j <= b; ++j) {
      const double w = std::pow(1.0 - rho, -a) * neg_binom(a, b - j) * std::pow(rho / (1.0 - rho), b - j);
      g.components.push_back({w, static_cast<double>(j), t2});
    }
  }
  // residual check against the Laplace transform
  Rng rng(0x5eed);
  std::uniform_real_distribution<double> ud(-3.0, 3.0);
  for (int k = 0; k < 20; ++k) {
    const double s = std::pow(10.0, ud(rng)) / p.mean_power;
    const double ref = laplace(p, s);
    if (std::abs(g.laplace(s) - ref) > 1e-9 * std::max(1.0, ref) + 1e-12)
      throw convergence_error("gamma_mixture: partial-fraction residual too large at s=" + num(s));
  }
  return g;
}

GammaMixture nb_gamma_mixture(const KappaMuShadowedParams& p, double tol, int max_terms) {
  GammaMixture g;
  const double q = p.nb_q();
  double w = std::exp(p.m * std::log1p(-q));
  double acc = 0.0;
  for (int k = 0; k < max_terms; ++k) {
    if (w > 0.0) g.components.push_back({w, p.mu + k, p.theta1});
    acc += w;
    if (1.0 - acc < tol || q == 0.0) return g;
    w *= (p.m + k) / (k + 1.0) * q;
    if (w == 0.0 && k > p.m * q / (1.0 - q)) return g;
  }
  throw convergence_error("nb_gamma_mixture: tail not below tolerance after " + std::to_string(max_terms) +
                          " terms");
}

KappaMuShadowedParams from_named_model(NamedModel model, const NamedModelParams& v) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw domain_error(msg);
  };
  KappaMuShadowedParams p;
  const double h = v.mean_power;
  switch (model) {
    case NamedModel::Rayleigh:
      p = KappaMuShadowedParams::make(kKappaZero, 1.0, 1.0, h);
      p.provenance = "Rayleigh: kappa->0 as 1e-12";
      break;
    case NamedModel::Rice:
      need(v.K >= 0.0, "Rice: K must be >= 0");
      p = KappaMuShadowedParams::make(v.K, 1.0, kMInfinite, h);
      p.provenance = "Rice: m->inf as 1e7";
      break;
    case NamedModel::NakagamiM:
      need(v.m > 0.0, "Nakagami-m: m must be > 0");
      p = KappaMuShadowedParams::make(kKappaZero, v.m, v.m, h);
      p.provenance = "Nakagami-m: kappa->0 as 1e-12";
      break;
    case NamedModel::Hoyt:
      need(v.q > 0.0 && v.q <= 1.0, "Hoyt: q must be in (0, 1]");
      p = KappaMuShadowedParams::make(std::max((1.0 - v.q * v.q) / (2.0 * v.q * v.q), kKappaZero), 1.0, 0.5, h);
      p.provenance = "Hoyt";
      break;
    case NamedModel::OneSidedGaussian:
      p = KappaMuShadowedParams::make(kKappaZero, 0.5, 0.5, h);
      p.provenance = "One-sided Gaussian: kappa->0 as 1e-12";
      break;
    case NamedModel::KappaMu:
      need(v.kappa >= 0.0 && v.mu > 0.0, "kappa-mu: kappa >= 0 and mu > 0 required");
      p = KappaMuShadowedParams::make(v.kappa, v.mu, kMInfinite, h);
      p.provenance = "kappa-mu: m->inf as 1e7";
      break;
    case NamedModel::EtaMu: {
      need(v.eta > 0.0 && v.mu > 0.0, "eta-mu: eta > 0 and mu > 0 required");
      // the law is symmetric under eta -> 1/eta
      const double eta = v.eta > 1.0 ? 1.0 / v.eta : v.eta;
      p = KappaMuShadowedParams::make(std::max((1.0 - eta) / (2.0 * eta), kKappaZero), 2.0 * v.mu, v.mu, h);
      p.provenance = v.eta > 1.0 ? "eta-mu: eta replaced by 1/eta" : "eta-mu";
      break;
    }
    case NamedModel::RicianShadowed:
      need(v.K >= 0.0 && v.m > 0.0, "Rician shadowed: K >= 0 and m > 0 required");
      p = KappaMuShadowedParams::make(v.K, 1.0, v.m, h);
      p.provenance = "Rician shadowed";
      break;
  }
  return p;
}

NamedModel named_model_from_string(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (std::isalnum(static_cast<unsigned char>(ch))) t += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (t == "rayleigh") return NamedModel::Rayleigh;
  if (t == "rice" || t == "rician" || t == "nakagamin") return NamedModel::Rice;
  if (t == "nakagami" || t == "nakagamim") return NamedModel::NakagamiM;
  if (t == "hoyt" || t == "nakagamiq") return NamedModel::Hoyt;
  if (t == "onesidedgaussian" || t == "osg") return NamedModel::OneSidedGaussian;
  if (t == "kappamu") return NamedModel::KappaMu;
  if (t == "etamu") return NamedModel::EtaMu;
  if (t == "ricianshadowed") return NamedModel::RicianShadowed;
  throw domain_error("unknown fading model '" + s + "'");
}

double sample(const KappaMuShadowedParams& p, Rng& rng) {
  auto gamma = [&](double shape) {
    if (shape == 1.0) return -std::log(uniform01(rng));
    return std::gamma_distribution<double>(shape, 1.0)(rng);
  };
  if (p.kappa * p.mu < 1e-9) return p.theta1 * gamma(p.mu);
  const double xi2 = p.m >= kMInfinite ? 1.0 : gamma(p.m) / p.m;
  const double lam = p.mu * p.kappa * xi2;
  // Gamma(mu + Poisson(lam)) as half a noncentral chi-square with 2 mu degrees of freedom
  if (p.mu >= 0.5) {
    const double z = std::normal_distribution<double>(0.0, 1.0)(rng) + std::sqrt(2.0 * lam);
    const double rest = p.mu > 0.5 ? gamma(p.mu - 0.5) : 0.0;
    return p.theta1 * (0.5 * z * z + rest);
  }
  std::poisson_distribution<long long> pois(lam);
  return p.theta1 * gamma(p.mu + static_cast<double>(pois(rng)));
}

}  // namespace kms
