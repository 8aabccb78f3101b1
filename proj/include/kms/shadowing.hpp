#pragma once

#include <random>
#include <string>

#include "kms/settings.hpp"

namespace kms {

// 10 / ln 10, the dB to neper factor
constexpr double kEps0 = 4.34294481903251827651;

struct ShadowingModel {
  enum class Type { None, Lognormal, Gamma, InverseGaussian };
  Type type = Type::None;
  double mu_l = 0.0;     // dB
  double sigma_l = 0.0;  // dB
  double k_g = 1.0;
  double theta_g = 1.0;
  double mu_ig = 1.0;
  double lambda_ig = 1.0;

  static ShadowingModel none() { return {}; }
  static ShadowingModel lognormal(double mu_l_db, double sigma_l_db);
  static ShadowingModel gamma(double k, double theta);
  static ShadowingModel inverse_gaussian(double mean, double shape);
  void validate() const;
  std::string name() const;
};

double moment(const ShadowingModel& s, double j);
double pdf(const ShadowingModel& s, double x);
double sample(const ShadowingModel& s, std::mt19937_64& rng);

enum class MatchMode { MeanVariance, MeanDeltaMoment };

struct MatchResult {
  ShadowingModel gamma;
  ShadowingModel inverse_gaussian;
  MatchMode mode = MatchMode::MeanVariance;
  // |achieved - target| for the two matched moments, per law
  double gamma_residual[2] = {0.0, 0.0};
  double ig_residual[2] = {0.0, 0.0};
};

MatchResult match_to_lognormal(double sigma_l, double mu_l = 0.0, MatchMode mode = MatchMode::MeanVariance,
                               double delta = 0.5);

// e^x K_nu(x) for x > 0
double bessel_k_scaled(double nu, double x);

}  // namespace kms
