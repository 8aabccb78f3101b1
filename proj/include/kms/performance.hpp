#pragma once

#include <functional>
#include <map>
#include <string>

#include "kms/fading.hpp"
#include "kms/jet.hpp"
#include "kms/kernel.hpp"
#include "kms/network.hpp"

namespace kms {

enum class MetricKind { Rate, Moment, Custom };

struct GFunction {
  MetricKind kind = MetricKind::Rate;
  double r = 1.0;
  std::function<Jet(const Jet&)> g;  // Custom only

  static GFunction rate() { return {}; }
  static GFunction moment(double r) { return {MetricKind::Moment, r, {}}; }
  static GFunction custom(std::function<Jet(const Jet&)> g) { return {MetricKind::Custom, 0.0, std::move(g)}; }
};

// g_nu(z) for the closed real-order families
double g_family(const GFunction& g, double nu, double z);

struct MetricResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int series_terms_used = 0;
  KernelBranch kernel = KernelBranch::InterferenceLimited;
  bool converged = true;
  bool divergent = false;
  std::map<std::string, double> diagnostics;
  std::string note;
};

enum class XiMode { Differenced, Cached, Naive };
enum class SeriesMethod { Laguerre, NegativeBinomial };

struct SeriesControls {
  int max_order = 0;  // 0: NumericSettings::perf_max_order
  double tol = 0.0;   // 0: NumericSettings::perf_series_tol
  ScaleMode scale = ScaleMode::Auto;
  XiMode xi = XiMode::Differenced;
  SeriesMethod method = SeriesMethod::Laguerre;
  KernelMethod kernel = KernelMethod::Auto;
};

// E[g(SINR_k)] for one serving tier
MetricResult expected_g_tier(const NetworkConfig& net, int k, const GFunction& g, const SeriesControls& sc = {},
                             const NumericSettings& ns = {});
MetricResult expected_g_sinr(const NetworkConfig& net, const GFunction& g, const SeriesControls& sc = {},
                             const NumericSettings& ns = {});
// finite gamma-mixture route for integer mu, m on every tier
MetricResult expected_g_integer(const NetworkConfig& net, const GFunction& g, const NumericSettings& ns = {},
                                KernelMethod kernel = KernelMethod::Auto);

MetricResult spectral_efficiency(const NetworkConfig& net, const SeriesControls& sc = {},
                                 const NumericSettings& ns = {});
MetricResult sinr_moment(const NetworkConfig& net, double r, const SeriesControls& sc = {},
                         const NumericSettings& ns = {});
MetricResult sinr_mgf(const NetworkConfig& net, double t, int terms, const SeriesControls& sc = {},
                      const NumericSettings& ns = {});

}  // namespace kms
