#include "kms/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace kms {

namespace {

constexpr double kPi = 3.14159265358979323846;

double total_density(const NetworkConfig& net, ShadowingMode mode) {
  double s = 0.0;
  for (size_t j = 0; j < net.tiers.size(); ++j)
    s += mode == ShadowingMode::Explicit ? net.tiers[j].density : equivalent_density(net, static_cast<int>(j));
  return s;
}

double reference_distance(const NetworkConfig& net) {
  double s = 0.0;
  for (size_t j = 0; j < net.tiers.size(); ++j) s += equivalent_density(net, static_cast<int>(j));
  return 0.5 / std::sqrt(s);
}

double path_gain(double d, double alpha) {
  if (alpha == 4.0) {
    const double d2 = d * d;
    return 1.0 / (d2 * d2);
  }
  return std::pow(d, -alpha);
}

struct Sum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

template <class Body>
void run_drops(long long n, int threads, bool parallel, Body body) {
  if (!parallel) {
    for (long long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<bool> failed{false};
  std::string message;
  std::mutex mu;
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
  for (long long i = 0; i < n; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(i);
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failed.exchange(true)) message = e.what();
    }
  }
  if (failed) throw std::runtime_error(message);
}

SimulationRun simulate_impl(const NetworkConfig& net, const SimConfig& sim, bool parallel) {
  net.validate();
  if (sim.drops <= 0) throw domain_error("sim.drops must be > 0");
  SimulationRun run;
  run.region_radius = region_radius(net, sim);
  run.bias_ratio = truncation_bias(net, sim, run.region_radius);
  const long long n = sim.drops;
  run.drops.resize(n);
  std::vector<long long> redraws(n, 0), rejects(n, 0);
  run_drops(n, sim.threads, parallel, [&](long long i) {
    Rng rng(drop_seed(sim.seed, static_cast<std::uint64_t>(i)));
    run.drops[i] = simulate_drop(net, sim, run.region_radius, rng, redraws[i], rejects[i]);
  });
  for (long long i = 0; i < n; ++i) {
    run.empty_redraws += redraws[i];
    run.conditioning_rejects += rejects[i];
  }
  return run;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t drop_seed(std::uint64_t master, std::uint64_t i) { return splitmix64(splitmix64(master) ^ i); }

double truncation_bias(const NetworkConfig& net, const SimConfig&, double radius) {
  const double r0 = reference_distance(net);
  if (radius <= r0) return std::numeric_limits<double>::infinity();
  const double e = 2.0 - net.alpha;
  if (e >= 0.0) return std::numeric_limits<double>::infinity();
  const double out = std::pow(radius, e);
  return out / (std::pow(r0, e) - out);
}

double region_radius(const NetworkConfig& net, const SimConfig& sim) {
  const bool interference = net.regime != Regime::NoiseLimited;
  if (sim.region_radius > 0.0) {
    const double b = truncation_bias(net, sim, sim.region_radius);
    if (interference && b > sim.max_bias)
      throw domain_error("sim.region_radius: truncation bias " + std::to_string(b) + " exceeds " +
                         std::to_string(sim.max_bias));
    return sim.region_radius;
  }
  const double lt = total_density(net, sim.mode);
  double R = std::sqrt(sim.expected_points / (kPi * lt));
  if (interference) {
    if (net.alpha <= 2.0) throw domain_error("alpha: the simulator needs alpha > 2 when interference is modeled");
    const double rb = reference_distance(net) * std::pow(1.0 + 1.0 / sim.max_bias, 1.0 / (net.alpha - 2.0));
    R = std::max(R, rb);
    if (lt * kPi * R * R > 2e7)
      throw domain_error("sim.region_radius: the bias bound needs more than 2e7 expected stations per drop");
  }
  return R;
}

std::vector<Station> draw_stations(const NetworkConfig& net, const SimConfig& sim, double radius, Rng& rng) {
  std::vector<Station> st;
  const double area = kPi * radius * radius;
  st.reserve(static_cast<size_t>(1.2 * total_density(net, sim.mode) * area) + 16);
  for (size_t j = 0; j < net.tiers.size(); ++j) {
    const auto& tier = net.tiers[j];
    const bool explicit_chi = sim.mode == ShadowingMode::Explicit;
    const double lam = explicit_chi ? tier.density : equivalent_density(net, static_cast<int>(j));
    std::poisson_distribution<long long> count(lam * area);
    const long long n = count(rng);
    for (long long i = 0; i < n; ++i) {
      Station s;
      s.tier = static_cast<int>(j);
      s.distance = radius * std::sqrt(uniform01(rng));
      s.chi = explicit_chi ? sample(tier.shadowing, rng) : 1.0;
      s.h = sample(tier.fading, rng);
      st.push_back(s);
    }
  }
  return st;
}

DropResult evaluate_drop(const NetworkConfig& net, const std::vector<Station>& stations) {
  if (stations.empty()) throw domain_error("evaluate_drop: no stations");
  const double a = net.alpha;
  size_t best = 0;
  double best_power = -1.0;
  std::vector<double> rx(stations.size());
  for (size_t i = 0; i < stations.size(); ++i) {
    const auto& s = stations[i];
    const double p = net.tiers[s.tier].power * s.chi * path_gain(s.distance, a);
    rx[i] = p;
    if (p > best_power) {
      best_power = p;
      best = i;
    }
  }
  const auto& srv = stations[best];
  const int k = srv.tier;
  const double pk = net.tiers[k].power;
  DropResult d;
  d.serving_tier = k;
  d.serving_distance = srv.distance * std::pow(srv.chi, -1.0 / a);
  Sum interference;
  for (size_t i = 0; i < stations.size(); ++i) {
    if (i == best) continue;
    const double p = rx[i];
    if (p > best_power * (1.0 + 1e-12)) throw std::logic_error("exclusion zone violated by an interferer");
    interference.add(p * stations[i].h / pk);
  }
  d.interference = interference.value();
  const double signal = srv.h * rx[best] / pk;
  const double nh = noise_hat(net, k);
  const double denom = nh + (net.regime == Regime::NoiseLimited ? 0.0 : d.interference);
  d.sinr = denom > 0.0 ? signal / denom : std::numeric_limits<double>::infinity();
  return d;
}

DropResult simulate_drop(const NetworkConfig& net, const SimConfig& sim, double radius, Rng& rng,
                         long long& redraws, long long& rejects) {
  for (long long attempt = 0; attempt < 10000000; ++attempt) {
    const auto st = draw_stations(net, sim, radius, rng);
    if (st.empty()) {
      ++redraws;
      continue;
    }
    const auto d = evaluate_drop(net, st);
    if (sim.condition && (d.serving_distance < sim.r_lo || d.serving_distance > sim.r_hi)) {
      ++rejects;
      continue;
    }
    return d;
  }
  throw convergence_error("simulate_drop: no acceptable drop after 1e7 attempts");
}

SimulationRun simulate(const NetworkConfig& net, const SimConfig& sim) { return simulate_impl(net, sim, true); }

SimulationRun simulate_serial(const NetworkConfig& net, const SimConfig& sim) {
  return simulate_impl(net, sim, false);
}

double metric_sample(const DropResult& d, const SimMetric& m) {
  switch (m.kind) {
    case SimMetricKind::Rate:
      return std::log1p(d.sinr);
    case SimMetricKind::OutageAt:
      return d.sinr < m.param ? 1.0 : 0.0;
    case SimMetricKind::MomentOf:
      return std::pow(d.sinr, m.param);
    case SimMetricKind::LaplaceAt:
      return std::exp(-m.param * d.interference);
  }
  return 0.0;
}

Estimate estimate(const std::vector<double>& x) {
  Estimate e;
  const long long n = static_cast<long long>(x.size());
  e.n_effective = n;
  if (n == 0) return e;
  Sum s;
  for (double v : x) s.add(v);
  e.mean = s.value() / n;
  auto variance = [&](long long upto) {
    Sum m, q;
    for (long long i = 0; i < upto; ++i) m.add(x[i]);
    const double mean = m.value() / upto;
    for (long long i = 0; i < upto; ++i) q.add((x[i] - mean) * (x[i] - mean));
    return upto > 1 ? q.value() / (upto - 1) : 0.0;
  };
  const double var = variance(n);
  e.half_width = 1.96 * std::sqrt(var / n);
  if (n >= 1000) {
    const double early = variance(n / 10);
    e.heavy_tail_warning = !(var <= 10.0 * early) || !std::isfinite(var);
  }
  std::vector<double> y = x;
  const long long drop = static_cast<long long>(std::ceil(0.001 * n));
  const long long keep = n - drop;
  if (keep > 0) {
    std::nth_element(y.begin(), y.begin() + keep, y.end());
    std::sort(y.begin(), y.begin() + keep);
    Sum t;
    for (long long i = 0; i < keep; ++i) t.add(y[i]);
    e.trimmed_mean = t.value() / keep;
    e.tail_corrected_mean = e.trimmed_mean;
    const double q = y[keep - 1];
    if (drop >= 2 && q > 0.0) {
      double hill = 0.0;
      for (long long i = keep; i < n; ++i) hill += std::log(y[i] / q);
      e.tail_index = hill > 0.0 ? drop / hill : std::numeric_limits<double>::infinity();
      const double tail = e.tail_index > 1.0 ? drop * q * e.tail_index / (e.tail_index - 1.0)
                                             : std::numeric_limits<double>::infinity();
      e.tail_corrected_mean = (t.value() + tail) / n;
    }
  }
  return e;
}

Estimate estimate(const SimulationRun& run, const SimMetric& m) {
  std::vector<double> x(run.drops.size());
  for (size_t i = 0; i < x.size(); ++i) x[i] = metric_sample(run.drops[i], m);
  return estimate(x);
}

Estimate estimate(const NetworkConfig& net, const SimConfig& sim, const SimMetric& m) {
  return estimate(simulate(net, sim), m);
}

std::vector<double> association_fractions(const SimulationRun& run, int tiers) {
  std::vector<double> f(tiers, 0.0);
  for (const auto& d : run.drops) f.at(d.serving_tier) += 1.0;
  for (auto& v : f) v /= static_cast<double>(run.drops.size());
  return f;
}

void write_drop_log(const SimulationRun& run, std::ostream& os) {
  char buf[160];
  for (const auto& d : run.drops) {
    std::snprintf(buf, sizeof buf, "%d,%.16e,%.16e,%.16e\n", d.serving_tier, d.serving_distance, d.sinr,
                  d.interference);
    os << buf;
  }
}

std::vector<double> interference_samples(const NetworkConfig& net, int k, const SimConfig& sim) {
  net.validate();
  const double R = region_radius(net, sim);
  const double pk = net.tiers.at(k).power;
  std::vector<double> out(sim.drops);
  run_drops(sim.drops, sim.threads, true, [&](long long i) {
    Rng rng(drop_seed(sim.seed, static_cast<std::uint64_t>(i)));
    Sum s;
    for (const auto& st : draw_stations(net, sim, R, rng))
      s.add(net.tiers[st.tier].power * st.chi * st.h * path_gain(st.distance, net.alpha) / pk);
    out[i] = s.value();
  });
  return out;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw domain_error("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  KsResult r;
  r.statistic = d;
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lam = (ne + 0.12 + 0.11 / ne) * d;
  if (lam < 0.2) return r;
  double p = 0.0, sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lam * lam);
    p += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  r.p_value = std::clamp(2.0 * p, 0.0, 1.0);
  return r;
}

}  // namespace kms
