#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kms/settings.hpp"

namespace kms {

using Rng = std::mt19937_64;

// uniform on (0, 1)
inline double uniform01(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

struct KappaMuShadowedParams {
  double kappa = 0.0;
  double mu = 1.0;
  double m = 1.0;
  double mean_power = 1.0;
  double theta1 = 1.0;
  double theta2 = 1.0;
  std::string provenance;

  static KappaMuShadowedParams make(double kappa, double mu, double m, double mean_power = 1.0);
  void validate() const;
  // probability that the dominant-path count is k: negative-binomial weight parameter
  double nb_q() const { return mu * kappa / (mu * kappa + m); }
};

double pdf_exact(const KappaMuShadowedParams& p, double x, const NumericSettings& ns = {});
double cdf_exact(const KappaMuShadowedParams& p, double x, const NumericSettings& ns = {});
double moment(const KappaMuShadowedParams& p, double j, const NumericSettings& ns = {});
double laplace(const KappaMuShadowedParams& p, double s);
double log_laplace(const KappaMuShadowedParams& p, double s);

enum class ScaleMode { Unit, Auto };

struct LaguerreCoeffs {
  int order = 0;
  double mu = 1.0;
  double scale = 1.0;
  std::vector<double> C;
  std::vector<std::vector<double>> c;  // c[n][i]
  std::vector<std::vector<double>> b;  // b[n][i], uses C[n+1]
  bool converged = false;
  double tail_estimate = 0.0;
};

double laguerre_scale(const KappaMuShadowedParams& p, ScaleMode mode);

// Coefficients of the expansion of h/scale in the basis x^{mu-1} e^{-x} L_n^{mu-1}(x).
LaguerreCoeffs laguerre_coeffs(const KappaMuShadowedParams& p, int max_order, double tol,
                               ScaleMode mode = ScaleMode::Unit, const NumericSettings& ns = {});
LaguerreCoeffs laguerre_coeffs_scaled(const KappaMuShadowedParams& p, int max_order, double tol, double scale,
                                      bool with_tables = true, int hard_limit = 0);
// the alternating moment-sum definition, unit scale; throws convergence_error on hopeless cancellation
std::vector<double> laguerre_coeffs_moment_sum(const KappaMuShadowedParams& p, int order,
                                               const NumericSettings& ns = {});

struct SeriesEval {
  double value = 0.0;
  double max_usable_x = 0.0;
  bool usable = true;
};

double pdf_series(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x);
double cdf_series(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x);
SeriesEval pdf_series_checked(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x);
SeriesEval cdf_series_checked(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x);
// expanded c_{i,n} double sum of the density, accurate only for small x
double pdf_series_double_sum(const LaguerreCoeffs& co, const KappaMuShadowedParams& p, double x);
// largest x where the expanded double sums keep 10 digits
double usable_x_limit(const LaguerreCoeffs& co);

struct GammaComponent {
  double weight;
  double shape;
  double scale;
};

struct GammaMixture {
  std::vector<GammaComponent> components;
  double pdf(double x) const;
  double laplace(double s) const;
};

GammaMixture gamma_mixture(const KappaMuShadowedParams& p);
// infinite negative-binomial mixture of Gamma(mu+k, theta1), truncated once the tail is below tol
GammaMixture nb_gamma_mixture(const KappaMuShadowedParams& p, double tol, int max_terms = 100000);

enum class NamedModel { Rayleigh, Rice, NakagamiM, Hoyt, OneSidedGaussian, KappaMu, EtaMu, RicianShadowed };

struct NamedModelParams {
  double K = 0.0;     // Rice factor
  double m = 1.0;     // Nakagami / shadowing severity
  double q = 1.0;     // Hoyt
  double eta = 1.0;   // eta-mu
  double kappa = 0.0;
  double mu = 1.0;
  double mean_power = 1.0;
};

constexpr double kKappaZero = 1e-12;
constexpr double kMInfinite = 1e7;

KappaMuShadowedParams from_named_model(NamedModel model, const NamedModelParams& v);
NamedModel named_model_from_string(const std::string& s);

double sample(const KappaMuShadowedParams& p, Rng& rng);

}  // namespace kms
