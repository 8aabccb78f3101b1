#include "kms/shadowing.hpp"

#include <cmath>
#include <limits>

#include "kms/specfun.hpp"

namespace kms {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num(double v) { return std::to_string(v); }

// bisection on log(v) for a monotone residual
template <class F>
double solve_log(F f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 300; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi / lo - 1.0 < 1e-15) break;
  }
  return std::sqrt(lo * hi);
}

}  // namespace

ShadowingModel ShadowingModel::lognormal(double mu_l_db, double sigma_l_db) {
  ShadowingModel s;
  s.type = Type::Lognormal;
  s.mu_l = mu_l_db;
  s.sigma_l = sigma_l_db;
  s.validate();
  return s;
}

ShadowingModel ShadowingModel::gamma(double k, double theta) {
  ShadowingModel s;
  s.type = Type::Gamma;
  s.k_g = k;
  s.theta_g = theta;
  s.validate();
  return s;
}

ShadowingModel ShadowingModel::inverse_gaussian(double mean, double shape) {
  ShadowingModel s;
  s.type = Type::InverseGaussian;
  s.mu_ig = mean;
  s.lambda_ig = shape;
  s.validate();
  return s;
}

void ShadowingModel::validate() const {
  switch (type) {
    case Type::None:
      return;
    case Type::Lognormal:
      if (!(std::isfinite(mu_l) && std::isfinite(sigma_l) && sigma_l >= 0.0))
        throw domain_error("shadowing.sigma_l must be >= 0, got " + num(sigma_l));
      return;
    case Type::Gamma:
      if (!(k_g > 0.0 && std::isfinite(k_g))) throw domain_error("shadowing.k_g must be > 0, got " + num(k_g));
      if (!(theta_g > 0.0 && std::isfinite(theta_g)))
        throw domain_error("shadowing.theta_g must be > 0, got " + num(theta_g));
      return;
    case Type::InverseGaussian:
      if (!(mu_ig > 0.0 && std::isfinite(mu_ig))) throw domain_error("shadowing.mu_ig must be > 0, got " + num(mu_ig));
      if (!(lambda_ig > 0.0 && std::isfinite(lambda_ig)))
        throw domain_error("shadowing.lambda_ig must be > 0, got " + num(lambda_ig));
      return;
  }
}

std::string ShadowingModel::name() const {
  switch (type) {
    case Type::None:
      return "none";
    case Type::Lognormal:
      return "lognormal";
    case Type::Gamma:
      return "gamma";
    case Type::InverseGaussian:
      return "inverse_gaussian";
  }
  return "none";
}

double bessel_k_scaled(double nu, double x) {
  if (!(x > 0.0)) throw domain_error("bessel_k_scaled: x must be > 0");
  if (x < 500.0) return std::exp(x) * bessel_k_real_order(nu, x);
  // large-argument asymptotic series
  const double mu4 = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (mu4 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * x)) * sum;
}

double moment(const ShadowingModel& s, double j) {
  switch (s.type) {
    case ShadowingModel::Type::None:
      return 1.0;
    case ShadowingModel::Type::Lognormal: {
      const double a = j * s.sigma_l / kEps0;
      return std::exp(j * s.mu_l / kEps0 + 0.5 * a * a);
    }
    case ShadowingModel::Type::Gamma:
      return std::exp(log_gamma(j + s.k_g) - log_gamma(s.k_g) + j * std::log(s.theta_g));
    case ShadowingModel::Type::InverseGaussian: {
      const double x = s.lambda_ig / s.mu_ig;
      return std::sqrt(2.0 * x / kPi) * std::pow(s.mu_ig, j) * bessel_k_scaled(j - 0.5, x);
    }
  }
  return 1.0;
}

double pdf(const ShadowingModel& s, double x) {
  if (!(x > 0.0)) return 0.0;
  switch (s.type) {
    case ShadowingModel::Type::None:
      throw domain_error("shadowing pdf: the none model is a point mass at 1");
    case ShadowingModel::Type::Lognormal: {
      const double d = 10.0 * std::log10(x) - s.mu_l;
      return kEps0 / (x * s.sigma_l * std::sqrt(2.0 * kPi)) * std::exp(-d * d / (2.0 * s.sigma_l * s.sigma_l));
    }
    case ShadowingModel::Type::Gamma:
      return std::exp((s.k_g - 1.0) * std::log(x) - x / s.theta_g - log_gamma(s.k_g) - s.k_g * std::log(s.theta_g));
    case ShadowingModel::Type::InverseGaussian: {
      const double d = x - s.mu_ig;
      return std::sqrt(s.lambda_ig / (2.0 * kPi * x * x * x)) *
             std::exp(-s.lambda_ig * d * d / (2.0 * s.mu_ig * s.mu_ig * x));
    }
  }
  return 0.0;
}

double sample(const ShadowingModel& s, std::mt19937_64& rng) {
  switch (s.type) {
    case ShadowingModel::Type::None:
      return 1.0;
    case ShadowingModel::Type::Lognormal: {
      std::normal_distribution<double> nd(s.mu_l, s.sigma_l);
      return std::pow(10.0, nd(rng) / 10.0);
    }
    case ShadowingModel::Type::Gamma: {
      std::gamma_distribution<double> gd(s.k_g, s.theta_g);
      return gd(rng);
    }
    case ShadowingModel::Type::InverseGaussian: {
      // Michael, Schucany and Haas
      std::normal_distribution<double> nd(0.0, 1.0);
      std::uniform_real_distribution<double> ud(0.0, 1.0);
      const double mu = s.mu_ig, lam = s.lambda_ig;
      const double v = nd(rng);
      const double y = v * v;
      const double x = mu + mu * mu * y / (2.0 * lam) - mu / (2.0 * lam) * std::sqrt(4.0 * mu * lam * y + mu * mu * y * y);
      return ud(rng) <= mu / (mu + x) ? x : mu * mu / x;
    }
  }
  return 1.0;
}

MatchResult match_to_lognormal(double sigma_l, double mu_l, MatchMode mode, double delta) {
  if (!(sigma_l > 0.0)) throw domain_error("match_to_lognormal: sigma_l must be > 0, got " + num(sigma_l));
  const auto ln = ShadowingModel::lognormal(mu_l, sigma_l);
  const double mean = moment(ln, 1.0);
  const double second = moment(ln, 2.0);
  const double var = second - mean * mean;
  MatchResult r;
  r.mode = mode;
  if (mode == MatchMode::MeanVariance) {
    r.gamma = ShadowingModel::gamma(mean * mean / var, var / mean);
    r.inverse_gaussian = ShadowingModel::inverse_gaussian(mean, mean * mean * mean / var);
    r.gamma_residual[0] = std::abs(moment(r.gamma, 1.0) - mean);
    r.gamma_residual[1] = std::abs(moment(r.gamma, 2.0) - second);
    r.ig_residual[0] = std::abs(moment(r.inverse_gaussian, 1.0) - mean);
    r.ig_residual[1] = std::abs(moment(r.inverse_gaussian, 2.0) - second);
    return r;
  }
  if (!(delta > 0.0 && delta < 1.0)) throw domain_error("match_to_lognormal: delta must be in (0,1)");
  const double target = moment(ln, delta);
  // E[chi^delta] increases to mean^delta as the law concentrates
  const double k = solve_log(
      [&](double k) { return moment(ShadowingModel::gamma(k, mean / k), delta) - target; }, 1e-6, 1e8);
  r.gamma = ShadowingModel::gamma(k, mean / k);
  const double lam = solve_log(
      [&](double l) { return moment(ShadowingModel::inverse_gaussian(mean, l), delta) - target; }, 1e-6, 1e8);
  r.inverse_gaussian = ShadowingModel::inverse_gaussian(mean, lam);
  r.gamma_residual[0] = std::abs(moment(r.gamma, 1.0) - mean);
  r.gamma_residual[1] = std::abs(moment(r.gamma, delta) - target);
  r.ig_residual[0] = std::abs(moment(r.inverse_gaussian, 1.0) - mean);
  r.ig_residual[1] = std::abs(moment(r.inverse_gaussian, delta) - target);
  return r;
}

}  // namespace kms
