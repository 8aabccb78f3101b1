#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "kms/network.hpp"

namespace kms {

enum class ShadowingMode { Explicit, Equivalent };

struct SimConfig {
  long long drops = 100000;
  std::uint64_t seed = 1;
  double region_radius = 0.0;  // 0: chosen from the expected point count and the bias bound
  ShadowingMode mode = ShadowingMode::Explicit;
  bool condition = false;  // keep only drops with serving distance in [r_lo, r_hi]
  double r_lo = 0.0;
  double r_hi = std::numeric_limits<double>::infinity();
  int threads = 0;  // 0: OpenMP default
  double max_bias = 1e-3;
  double expected_points = 2000.0;
};

struct Station {
  int tier;
  double distance;
  double chi;
  double h;
};

struct DropResult {
  double sinr = 0.0;
  int serving_tier = -1;
  double serving_distance = 0.0;  // in the equivalent (shadowing-free) network
  double interference = 0.0;      // normalized by the serving tier power
};

struct SimulationRun {
  std::vector<DropResult> drops;
  long long empty_redraws = 0;
  long long conditioning_rejects = 0;
  double region_radius = 0.0;
  double bias_ratio = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
// seed of the generator used by drop i
std::uint64_t drop_seed(std::uint64_t master, std::uint64_t i);

// expected out-of-disc interference over in-disc interference beyond the typical serving distance
double truncation_bias(const NetworkConfig& net, const SimConfig& sim, double radius);
// resolves the disc radius and checks the bias bound
double region_radius(const NetworkConfig& net, const SimConfig& sim);

// SINR from an explicit station list, association by largest P chi d^{-alpha}
DropResult evaluate_drop(const NetworkConfig& net, const std::vector<Station>& stations);
std::vector<Station> draw_stations(const NetworkConfig& net, const SimConfig& sim, double radius, Rng& rng);
DropResult simulate_drop(const NetworkConfig& net, const SimConfig& sim, double radius, Rng& rng,
                         long long& redraws, long long& rejects);

SimulationRun simulate(const NetworkConfig& net, const SimConfig& sim);
SimulationRun simulate_serial(const NetworkConfig& net, const SimConfig& sim);

enum class SimMetricKind { Rate, OutageAt, MomentOf, LaplaceAt };

struct SimMetric {
  SimMetricKind kind = SimMetricKind::Rate;
  double param = 0.0;
  static SimMetric rate() { return {}; }
  static SimMetric outage(double T) { return {SimMetricKind::OutageAt, T}; }
  static SimMetric moment(double r) { return {SimMetricKind::MomentOf, r}; }
  static SimMetric laplace(double s) { return {SimMetricKind::LaplaceAt, s}; }
};

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal-approximation interval
  long long n_effective = 0;
  double trimmed_mean = 0.0;  // top 0.1% removed
  // top 0.1% replaced by the mean of a Pareto tail fitted with the Hill estimator
  double tail_corrected_mean = 0.0;
  double tail_index = 0.0;
  bool heavy_tail_warning = false;
};

double metric_sample(const DropResult& d, const SimMetric& m);
Estimate estimate(const std::vector<double>& samples);
Estimate estimate(const SimulationRun& run, const SimMetric& m);
Estimate estimate(const NetworkConfig& net, const SimConfig& sim, const SimMetric& m);

std::vector<double> association_fractions(const SimulationRun& run, int tiers);

// one record per drop: tier, distance, sinr, interference
void write_drop_log(const SimulationRun& run, std::ostream& os);

// aggregate interference at the origin from every station of every tier, normalized by tier k power
std::vector<double> interference_samples(const NetworkConfig& net, int k, const SimConfig& sim);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace kms
