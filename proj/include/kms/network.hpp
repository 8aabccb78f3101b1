#pragma once

#include <limits>
#include <string>
#include <vector>

#include "kms/fading.hpp"
#include "kms/jet.hpp"
#include "kms/settings.hpp"
#include "kms/shadowing.hpp"

namespace kms {

struct TierConfig {
  double density = 1e-3;
  double power = 1.0;
  KappaMuShadowedParams fading = KappaMuShadowedParams::make(kKappaZero, 1.0, 1.0, 1.0);
  ShadowingModel shadowing;
};

enum class Regime { General, InterferenceLimited, NoiseLimited };

struct NetworkConfig {
  std::vector<TierConfig> tiers;
  double alpha = 4.0;
  double tau = 1.0;
  double noise_psd = 0.0;
  double bandwidth = 1.0;
  Regime regime = Regime::General;
  bool allow_alpha_2 = false;

  double delta() const { return 2.0 / alpha; }
  double noise() const { return noise_psd * bandwidth; }
  void validate() const;
};

std::string regime_name(Regime r);
Regime regime_from_string(const std::string& s);

// lambda_j E[chi_j^delta]
double equivalent_density(const NetworkConfig& net, int j);
// sum_j lambda_j E[chi_j^delta] (P_j/P_k)^delta
double lambda0(const NetworkConfig& net, int k);
// N / (tau P_k), zero in the interference-limited regime
double noise_hat(const NetworkConfig& net, int k);
// mean received SNR at unit distance for tier k
double snr_unit(const NetworkConfig& net, int k);

double association_probability(const NetworkConfig& net, int k);
double serving_distance_pdf(const NetworkConfig& net, int k, double r);
double serving_distance_mean(const NetworkConfig& net, int k);

enum class WMethod { Finite, GaussLaguerre, Appell };

struct WResult {
  double value = 0.0;
  double error = 0.0;
  bool warning = false;
  int evaluations = 0;
};

WResult interference_w_checked(const KappaMuShadowedParams& f, double z, double delta,
                               WMethod method = WMethod::Finite, const NumericSettings& ns = {},
                               int gl_order = 0);
double interference_w(const KappaMuShadowedParams& f, double z, double delta, const NumericSettings& ns = {});
// Taylor jet of W along z
Jet interference_w(const KappaMuShadowedParams& f, const Jet& z, double delta, const NumericSettings& ns = {});

// Appell arguments A, B
std::pair<double, double> appell_arguments(const KappaMuShadowedParams& f, double z);

enum class SpecialRow { Rayleigh, NakagamiM, OneSidedGaussian, KappaMu, Rician };

struct SpecialParams {
  double mean_power = 1.0;
  double m = 1.0;
  double kappa = 0.0;
  double mu = 1.0;
  double K = 0.0;
};

double interference_w_special(SpecialRow row, double z, double delta, const SpecialParams& sp,
                              const NumericSettings& ns = {});

double interference_laplace(const NetworkConfig& net, int k, double r, double s, const NumericSettings& ns = {});

struct MomentValue {
  double value = 0.0;
  bool divergent = false;
};

// E[I^j] with no exclusion zone; finite z uses z^{-delta} W(z) in place of the z -> inf limit
MomentValue interference_moment(const NetworkConfig& net, int k, double j,
                                double z = std::numeric_limits<double>::infinity(),
                                const NumericSettings& ns = {});
// the printed delta/j exponent reading, for reporting
MomentValue interference_moment_printed(const NetworkConfig& net, int k, double j, double z,
                                        const NumericSettings& ns = {});

struct StableParams {
  double stability = 0.0;
  double skew = 1.0;
  double drift = 0.0;
  double dispersion = 0.0;
};

StableParams stable_params(const NetworkConfig& net, int k, double z, const NumericSettings& ns = {});

}  // namespace kms
