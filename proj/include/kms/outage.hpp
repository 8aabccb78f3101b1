#pragma once

#include "kms/kernel.hpp"
#include "kms/network.hpp"
#include "kms/performance.hpp"

namespace kms {

enum class OutageMethod { NegativeBinomial, LaguerreJets };

struct OutageControls {
  OutageMethod method = OutageMethod::NegativeBinomial;
  int max_order = 0;  // 0: 1000 jet orders (NegativeBinomial) or 50 coefficients (LaguerreJets)
  double tol = 1e-10;
  ScaleMode scale = ScaleMode::Auto;
  KernelMethod kernel = KernelMethod::Auto;
};

// P(SINR_k < T) for serving tier k
MetricResult outage_tier(const NetworkConfig& net, int k, double T, const OutageControls& oc = {},
                         const NumericSettings& ns = {});
// sum_k P_k P(SINR_k < T)
MetricResult outage_probability(const NetworkConfig& net, double T, const OutageControls& oc = {},
                                const NumericSettings& ns = {});

// Taylor coefficients of s -> K(s c) at s = s0, orders 0..order
std::vector<double> kernel_taylor(const RadialKernel& K, double c, double s0, int order);

}  // namespace kms
