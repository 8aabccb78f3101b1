#pragma once

#include <cmath>

#include "kms/network.hpp"

namespace fixture {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// two tiers, lambda1 = 2 lambda2, P2 = P1 - 20 dB, alpha = 4, lognormal 0/4 dB, unit mean fading
inline kms::NetworkConfig section6(double kappa = 2.0, double mu = 2.0, double m = 1.0, double sigma_l = 4.0) {
  kms::NetworkConfig net;
  net.alpha = 4.0;
  net.regime = kms::Regime::InterferenceLimited;
  const double l1 = 1.0 / (M_PI * 500.0 * 500.0);
  for (int t = 0; t < 2; ++t) {
    kms::TierConfig tc;
    tc.density = t == 0 ? l1 : 0.5 * l1;
    tc.power = dbm_to_watt(t == 0 ? 53.0 : 33.0);
    tc.fading = kms::KappaMuShadowedParams::make(kappa, mu, m, 1.0);
    tc.shadowing = kms::ShadowingModel::lognormal(0.0, sigma_l);
    net.tiers.push_back(tc);
  }
  return net;
}

inline kms::NetworkConfig rayleigh(double density = 1e-3) {
  kms::NetworkConfig net;
  net.alpha = 4.0;
  net.regime = kms::Regime::InterferenceLimited;
  kms::TierConfig tc;
  tc.density = density;
  tc.power = 1.0;
  tc.fading = kms::KappaMuShadowedParams::make(kms::kKappaZero, 1.0, 1.0, 1.0);
  net.tiers.push_back(tc);
  return net;
}

// sets noise so that the tier-0 unit-distance SNR equals snr_db
inline void set_snr_db(kms::NetworkConfig& net, double snr_db) {
  net.regime = kms::Regime::General;
  net.noise_psd = 1.0;
  net.bandwidth = 1.0;
  const double s1 = kms::snr_unit(net, 0);
  net.noise_psd = s1 / std::pow(10.0, snr_db / 10.0);
}

}  // namespace fixture
