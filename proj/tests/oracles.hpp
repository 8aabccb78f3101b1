#pragma once

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "kms/fading.hpp"

namespace oracle {

// classical power densities, written independently of the library
inline double exponential(double x, double h) { return std::exp(-x / h) / h; }

inline double gamma_pdf(double x, double shape, double scale) {
  return std::exp((shape - 1) * std::log(x) - x / scale - std::lgamma(shape) - shape * std::log(scale));
}

inline double rice(double x, double K, double h) {
  const double a = (1 + K) / h;
  const double arg = 2 * std::sqrt(K * (1 + K) * x / h);
  return a * std::exp(-K - a * x + arg) * boost::math::cyl_bessel_i(0, arg) * std::exp(-arg);
}

inline double hoyt(double x, double q, double h) {
  const double q2 = q * q;
  const double c = (1 + q2) / (2 * q * h);
  const double arg = (1 - q2 * q2) * x / (4 * q2 * h);
  return c * std::exp(-(1 + q2) * (1 + q2) * x / (4 * q2 * h)) * boost::math::cyl_bessel_i(0, arg);
}

inline double half_normal_power(double x, double h) {
  return std::exp(-x / (2 * h)) / std::sqrt(2 * M_PI * h * x);
}

inline double kappa_mu(double x, double kappa, double mu, double h) {
  const double y = x / h;
  const double arg = 2 * mu * std::sqrt(kappa * (1 + kappa) * y);
  const double lead = std::log(mu) + (mu + 1) / 2 * std::log1p(kappa) - (mu - 1) / 2 * std::log(kappa) - mu * kappa -
                      std::log(h) + (mu - 1) / 2 * std::log(y) - mu * (1 + kappa) * y;
  return std::exp(lead) * boost::math::cyl_bessel_i(mu - 1, arg);
}

// format 1: h = (2 + 1/eta + eta)/4, H = (1/eta - eta)/4
inline double eta_mu(double x, double eta, double mu, double h) {
  const double hh = (2 + 1 / eta + eta) / 4, H = (1 / eta - eta) / 4;
  const double y = x / h;
  const double lead = 0.5 * std::log(M_PI) + std::log(2.0) + (mu + 0.5) * std::log(mu) + mu * std::log(hh) -
                      std::lgamma(mu) - (mu - 0.5) * std::log(H) - std::log(h) + (mu - 0.5) * std::log(y) -
                      2 * mu * hh * y;
  return std::exp(lead) * boost::math::cyl_bessel_i(mu - 0.5, 2 * mu * H * y);
}

// K = Omega/(2b), h = 2b + Omega
inline double rician_shadowed(double x, double K, double m, double h) {
  const double b = h / (2 * (1 + K)), Om = K * h / (1 + K);
  return std::pow(2 * b * m / (2 * b * m + Om), m) / (2 * b) * std::exp(-x / (2 * b)) *
         boost::math::hypergeometric_1F1(m, 1.0, Om * x / (2 * b * (2 * b * m + Om)));
}

inline double sup_error(const std::function<double(double)>& a, const std::function<double(double)>& b,
                        const std::vector<double>& grid) {
  double e = 0.0;
  for (double x : grid) e = std::max(e, std::abs(a(x) - b(x)));
  return e;
}

inline std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

// one-sample Kolmogorov-Smirnov statistic
inline double ks_statistic(std::vector<double> s, const std::function<double(double)>& cdf) {
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    const double F = cdf(s[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

}  // namespace oracle
