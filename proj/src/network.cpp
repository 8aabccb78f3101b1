#include "kms/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "kms/quadrature.hpp"
#include "kms/specfun.hpp"

namespace kms {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num(double v) { return std::to_string(v); }

// -L'(u) for the fading Laplace transform, written so that large m does not cancel
template <class T>
T minus_laplace_derivative(const KappaMuShadowedParams& f, const T& u) {
  using std::exp;
  using std::log1p;
  const double t1 = f.theta1, t2 = f.theta2, d = t2 - t1;
  const T a = 1.0 + t1 * u;
  const T b = 1.0 + t2 * u;
  const T logl = -f.mu * log1p(t1 * u) - f.m * log1p(d * u / a);
  return exp(logl) * (f.mu * t1 / a + f.m * d / (a * b));
}

template <class T>
T one_minus_laplace(const KappaMuShadowedParams& f, const T& u) {
  using std::expm1;
  using std::log1p;
  const double t1 = f.theta1, d = f.theta2 - f.theta1;
  const T logl = -f.mu * log1p(t1 * u) - f.m * log1p(d * u / (1.0 + t1 * u));
  return -expm1(logl);
}

int dim_of(double) { return 1; }
int dim_of(const Jet& j) { return j.order() + 1; }

void store(double v, double* out) { out[0] = v; }
void store(const Jet& v, double* out) {
  for (size_t k = 0; k < v.c.size(); ++k) out[k] = v.c[k];
}

double load(double, const std::vector<double>& v) { return v[0]; }
Jet load(const Jet& like, const std::vector<double>& v) {
  Jet r(like.order(), 0.0);
  r.c = v;
  return r;
}

QuadOptions w_options(const NumericSettings& ns) {
  QuadOptions o = quad_options(ns);
  o.rel_tol = std::min(ns.quad_rel_tol, 1e-13);
  o.abs_tol = 1e-300;
  o.max_intervals = std::max(ns.quad_max_intervals, 4000);
  return o;
}

// z p int_0^1 -L'(z w^p) dw - (1 - L(z))
template <class T>
T w_finite(const KappaMuShadowedParams& f, const T& z, double delta, const NumericSettings& ns, double* err,
           int* evals) {
  const double p = 1.0 / (1.0 - delta);
  const int dim = dim_of(z);
  auto r = integrate_gk(
      [&](double w, double* out) { store(minus_laplace_derivative(f, z * std::pow(w, p)), out); }, dim, 0.0, 1.0,
      w_options(ns));
  if (err) *err = r.error[0] * value_of(z) * p;
  if (evals) *evals = r.evaluations;
  return z * load(z, r.value) * p - one_minus_laplace(f, z);
}

// z^delta (c - int_z^inf -L'(u) u^{-delta} du) - (1 - L(z)), c = Gamma(1-delta) E[h^delta]
template <class T>
T w_complement(const KappaMuShadowedParams& f, const T& z, double delta, const NumericSettings& ns, double* err,
               int* evals) {
  using std::pow;
  const double c = gamma_fn(1.0 - delta) * moment(f, delta, ns);
  const int dim = dim_of(z);
  auto r = integrate_gk(
      [&](double v, double* out) {
        const T u = z / v;
        store(minus_laplace_derivative(f, u) * pow(u, 1.0 - delta) * (1.0 / v), out);
      },
      dim, 0.0, 1.0, w_options(ns));
  const T tail = load(z, r.value);
  const T zd = pow(z, delta);
  if (err) *err = r.error[0] * std::pow(value_of(z), delta);
  if (evals) *evals = r.evaluations;
  return zd * (c - tail) - one_minus_laplace(f, z);
}

template <class T>
T w_dispatch(const KappaMuShadowedParams& f, const T& z, double delta, const NumericSettings& ns, double* err,
             int* evals) {
  if (!(delta > 0.0 && delta < 1.0)) throw domain_error("interference_w: delta must be in (0,1), got " + num(delta));
  const double z0 = value_of(z);
  if (!(z0 >= 0.0)) throw domain_error("interference_w: z must be >= 0");
  if (z0 == 0.0 && dim_of(z) == 1) {
    if (err) *err = 0.0;
    return z * 0.0;
  }
  if (z0 <= 1.0) return w_finite(f, z, delta, ns, err, evals);
  return w_complement(f, z, delta, ns, err, evals);
}

double w_gauss_laguerre(const KappaMuShadowedParams& f, double z, double delta, int order,
                        const NumericSettings& ns) {
  const auto rule = gauss_laguerre(order, delta + f.mu - 1.0);
  double s = 0.0;
  const double ratio = f.mu * f.kappa / f.m;
  for (int n = 0; n < order; ++n) {
    const double y = rule.nodes[n];
    s += rule.weights[n] * kummer_1f1(f.mu - f.m, f.mu, -ratio * y, ns) *
         lower_incomplete_gamma(1.0 - delta, f.theta2 * z * y, ns);
  }
  const double pref = std::exp(delta * std::log(f.theta1 * z) - log_gamma(f.mu) +
                               (f.m - delta - f.mu) * std::log(f.theta1 / f.theta2));
  return pref * s - one_minus_laplace(f, z);
}

}  // namespace

void NetworkConfig::validate() const {
  if (tiers.empty()) throw domain_error("tiers: at least one tier is required");
  if (alpha == 2.0 && !allow_alpha_2) throw domain_error("alpha: alpha = 2 requires --allow-alpha-2");
  if (!(alpha > 2.0) && alpha != 2.0) throw domain_error("alpha: must be > 2, got " + num(alpha));
  if (!(tau > 0.0)) throw domain_error("tau: must be > 0");
  if (!(noise_psd >= 0.0)) throw domain_error("noise_psd: must be >= 0");
  if (!(bandwidth > 0.0)) throw domain_error("bandwidth: must be > 0");
  for (size_t j = 0; j < tiers.size(); ++j) {
    const auto& t = tiers[j];
    const std::string at = "tiers[" + std::to_string(j) + "].";
    if (!(t.density > 0.0 && std::isfinite(t.density))) throw domain_error(at + "density: must be > 0");
    if (!(t.power > 0.0 && std::isfinite(t.power))) throw domain_error(at + "power: must be > 0");
    try {
      t.fading.validate();
      t.shadowing.validate();
    } catch (const domain_error& e) {
      throw domain_error(at + e.what());
    }
    if (!std::isfinite(moment(t.shadowing, delta()))) throw domain_error(at + "shadowing: delta-moment is not finite");
  }
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::General:
      return "general";
    case Regime::InterferenceLimited:
      return "interference_limited";
    case Regime::NoiseLimited:
      return "noise_limited";
  }
  return "general";
}

Regime regime_from_string(const std::string& s) {
  std::string t;
  for (char c : s)
    if (std::isalpha(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "general") return Regime::General;
  if (t == "interferencelimited") return Regime::InterferenceLimited;
  if (t == "noiselimited") return Regime::NoiseLimited;
  throw domain_error("regime: unknown value '" + s + "'");
}

double equivalent_density(const NetworkConfig& net, int j) {
  const auto& t = net.tiers.at(j);
  return t.density * moment(t.shadowing, net.delta());
}

double lambda0(const NetworkConfig& net, int k) {
  const double d = net.delta();
  const double pk = net.tiers.at(k).power;
  double s = 0.0;
  for (size_t j = 0; j < net.tiers.size(); ++j)
    s += equivalent_density(net, static_cast<int>(j)) * std::pow(net.tiers[j].power / pk, d);
  return s;
}

double noise_hat(const NetworkConfig& net, int k) {
  if (net.regime == Regime::InterferenceLimited) return 0.0;
  return net.noise() / (net.tau * net.tiers.at(k).power);
}

double snr_unit(const NetworkConfig& net, int k) {
  const auto& t = net.tiers.at(k);
  const double n = net.noise() / (net.tau * t.power);
  return moment(t.shadowing, 1.0) * t.fading.mean_power / n;
}

double association_probability(const NetworkConfig& net, int k) {
  return equivalent_density(net, k) / lambda0(net, k);
}

double serving_distance_pdf(const NetworkConfig& net, int k, double r) {
  if (r < 0.0) throw domain_error("serving_distance_pdf: r must be >= 0");
  const double l0 = lambda0(net, k);
  return 2.0 * kPi * l0 * r * std::exp(-kPi * r * r * l0);
}

double serving_distance_mean(const NetworkConfig& net, int k) { return 0.5 / std::sqrt(lambda0(net, k)); }

WResult interference_w_checked(const KappaMuShadowedParams& f, double z, double delta, WMethod method,
                               const NumericSettings& ns, int gl_order) {
  WResult res;
  if (z == 0.0) return res;
  switch (method) {
    case WMethod::Finite: {
      double err = 0.0;
      res.value = w_dispatch(f, z, delta, ns, &err, &res.evaluations);
      res.error = err;
      break;
    }
    case WMethod::GaussLaguerre: {
      const int n = gl_order > 0 ? gl_order : ns.gl_order;
      res.value = w_gauss_laguerre(f, z, delta, n, ns);
      const int n2 = std::min(2 * n, 256);
      res.error = n2 > n ? std::abs(w_gauss_laguerre(f, z, delta, n2, ns) - res.value) : 0.0;
      res.evaluations = n + n2;
      break;
    }
    case WMethod::Appell: {
      const auto [a, b] = appell_arguments(f, z);
      const double t1 = f.theta1;
      const double pre = std::exp(std::log(f.mu * t1 * z / (1.0 - delta)) + f.m * std::log(t1 / f.theta2) -
                                  (f.mu + 1.0) * std::log1p(t1 * z));
      res.value = pre * appell_f2(f.mu + 1.0, f.m, 1.0, f.mu, 2.0 - delta, a, b, ns) - one_minus_laplace(f, z);
      res.error = ns.appell_tol * std::abs(res.value);
      break;
    }
  }
  res.warning = res.error > ns.w_warn_tol;
  return res;
}

double interference_w(const KappaMuShadowedParams& f, double z, double delta, const NumericSettings& ns) {
  return w_dispatch(f, z, delta, ns, nullptr, nullptr);
}

Jet interference_w(const KappaMuShadowedParams& f, const Jet& z, double delta, const NumericSettings& ns) {
  return w_dispatch(f, z, delta, ns, nullptr, nullptr);
}

std::pair<double, double> appell_arguments(const KappaMuShadowedParams& f, double z) {
  const double t1 = f.theta1;
  return {(1.0 - t1 / f.theta2) / (1.0 + t1 * z), t1 * z / (1.0 + t1 * z)};
}

double interference_w_special(SpecialRow row, double z, double delta, const SpecialParams& sp,
                              const NumericSettings& ns) {
  const double h = sp.mean_power;
  const double c = 2.0 - delta, b = 1.0 - delta;
  switch (row) {
    case SpecialRow::Rayleigh:
      return h * delta * z / (1.0 - delta) * gauss_2f1(1.0, b, c, -h * z, ns);
    case SpecialRow::NakagamiM:
      return h * z / (1.0 - delta) * gauss_2f1(sp.m + 1.0, b, c, -h * z / sp.m, ns) -
             (1.0 - std::exp(-sp.m * std::log1p(h * z / sp.m)));
    case SpecialRow::OneSidedGaussian:
      return h * z / (1.0 - delta) * gauss_2f1(1.5, b, c, -2.0 * h * z, ns) - (1.0 - 1.0 / std::sqrt(1.0 + 2.0 * h * z));
    case SpecialRow::KappaMu: {
      const double t1 = h / (sp.mu * (1.0 + sp.kappa));
      return sp.mu * t1 * z / ((1.0 - delta) * std::exp(sp.mu * sp.kappa)) *
                 gauss_2f1(sp.mu + 1.0, b, c, -t1 * z, ns) -
             (1.0 - std::exp(-sp.mu * sp.kappa / (1.0 + 1.0 / (t1 * z)) - sp.mu * std::log1p(t1 * z)));
    }
    case SpecialRow::Rician: {
      const double t1 = h / (1.0 + sp.K);
      return t1 * z / ((1.0 - delta) * std::exp(sp.K)) * gauss_2f1(2.0, b, c, -t1 * z, ns) -
             (1.0 - std::exp(-sp.K / (1.0 + 1.0 / (t1 * z))) / (1.0 + t1 * z));
    }
  }
  return 0.0;
}

double interference_laplace(const NetworkConfig& net, int k, double r, double s, const NumericSettings& ns) {
  if (!(r > 0.0)) throw domain_error("interference_laplace: r must be > 0");
  if (!(s >= 0.0)) throw domain_error("interference_laplace: s must be >= 0");
  if (s == 0.0) return 1.0;
  const double d = net.delta();
  const double z = s * std::pow(r, -net.alpha);
  const double pk = net.tiers.at(k).power;
  double e = 0.0;
  for (size_t j = 0; j < net.tiers.size(); ++j) {
    const double lj = equivalent_density(net, static_cast<int>(j)) * std::pow(net.tiers[j].power / pk, d);
    e += kPi * r * r * lj * interference_w(net.tiers[j].fading, z, d, ns);
  }
  return std::exp(-e);
}

namespace {

// sum_j pi lambda_j E[chi^delta] Phat^delta z^{-delta} W_j(z), with the z -> inf limit in closed form
double stable_scale(const NetworkConfig& net, int k, double z, const NumericSettings& ns) {
  const double d = net.delta();
  const double pk = net.tiers.at(k).power;
  double c = 0.0;
  for (size_t j = 0; j < net.tiers.size(); ++j) {
    const double lj = equivalent_density(net, static_cast<int>(j)) * std::pow(net.tiers[j].power / pk, d);
    const auto& f = net.tiers[j].fading;
    const double wz = std::isinf(z) ? gamma_fn(1.0 - d) * moment(f, d, ns)
                                    : std::pow(z, -d) * interference_w(f, z, d, ns);
    c += kPi * lj * wz;
  }
  return c;
}

}  // namespace

MomentValue interference_moment(const NetworkConfig& net, int k, double j, double z, const NumericSettings& ns) {
  if (!(j > 0.0)) throw domain_error("interference_moment: order must be > 0");
  const double d = net.delta();
  MomentValue mv;
  if (j >= d) {
    mv.divergent = true;
    mv.value = std::numeric_limits<double>::infinity();
    return mv;
  }
  const double c = stable_scale(net, k, z, ns);
  mv.value = std::exp(log_gamma(1.0 - j / d) - log_gamma(1.0 - j) + (j / d) * std::log(c));
  return mv;
}

MomentValue interference_moment_printed(const NetworkConfig& net, int k, double j, double z,
                                        const NumericSettings& ns) {
  if (!(j > 0.0)) throw domain_error("interference_moment: order must be > 0");
  const double d = net.delta();
  MomentValue mv;
  if (j >= d) {
    mv.divergent = true;
    mv.value = std::numeric_limits<double>::infinity();
    return mv;
  }
  const double c = stable_scale(net, k, z, ns);
  mv.value = std::exp(log_gamma(1.0 - j / d) - log_gamma(1.0 - j) - (j / d) * std::log(std::cos(kPi * d / 2.0)) +
                      (d / j) * std::log(c));
  return mv;
}

StableParams stable_params(const NetworkConfig& net, int k, double z, const NumericSettings& ns) {
  StableParams sp;
  sp.stability = net.delta();
  sp.dispersion = stable_scale(net, k, z, ns) / std::cos(kPi * net.delta() / 2.0);
  return sp;
}

}  // namespace kms
