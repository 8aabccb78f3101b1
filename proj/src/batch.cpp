#include "kms/batch.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

#include <omp.h>

namespace kms {

namespace {

std::string label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

SweepTable sweep_impl(const RunConfig& rc, bool parallel, int threads) {
  if (!rc.has_sweep) throw config_error("sweep: no sweep section in the configuration");
  const auto& sw = rc.sweep;
  SweepTable t;
  t.columns.push_back(sw.parameter);
  for (const auto& c : metric_columns(rc, sw.metric, sw.monte_carlo)) t.columns.push_back(c);
  const long long n = static_cast<long long>(sw.values.size());
  t.rows.assign(n, {});
  std::vector<int> ok(n, 1);
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](long long i) {
    try {
      const RunConfig point = parse_config(with_parameter(rc.document, sw.parameter, sw.values[i]));
      RunConfig local = point;
      local.sim.threads = parallel ? 1 : local.sim.threads;
      bool conv = true;
      auto vals = metric_values(local, sw.metric, sw.monte_carlo, conv);
      vals.insert(vals.begin(), sw.values[i]);
      t.rows[i] = std::move(vals);
      ok[i] = conv ? 1 : 0;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (parallel) {
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (long long i = 0; i < n; ++i) body(i);
  } else {
    for (long long i = 0; i < n; ++i) body(i);
  }
  for (long long i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    t.converged = t.converged && ok[i];
  }
  return t;
}

}  // namespace

std::vector<std::string> metric_columns(const RunConfig& rc, const std::string& metric, bool monte_carlo) {
  std::vector<std::string> c;
  if (metric == "rate") {
    c = {"rate_nats", "err_est"};
    if (monte_carlo) c.insert(c.end(), {"mc_rate_nats", "mc_half_width"});
  } else if (metric == "outage") {
    for (double T : rc.thresholds_db) {
      c.push_back("outage_" + label(T) + "dB");
      c.push_back("err_" + label(T) + "dB");
      if (monte_carlo) {
        c.push_back("mc_outage_" + label(T) + "dB");
        c.push_back("mc_half_width_" + label(T) + "dB");
      }
    }
  } else if (metric == "moment") {
    for (double r : rc.moment_orders) {
      c.push_back("moment_" + label(r));
      c.push_back("err_" + label(r));
      if (monte_carlo) {
        c.push_back("mc_tail_corrected_moment_" + label(r));
        c.push_back("mc_half_width_" + label(r));
      }
    }
  } else {
    throw config_error("sweep.metric: unknown metric '" + metric + "' (rate, outage, moment)");
  }
  return c;
}

std::vector<double> metric_values(const RunConfig& rc, const std::string& metric, bool monte_carlo, bool& converged) {
  std::vector<double> v;
  SimulationRun run;
  if (monte_carlo) run = simulate(rc.net, rc.sim);
  if (metric == "rate") {
    const auto r = spectral_efficiency(rc.net, rc.series, rc.ns);
    converged = converged && r.converged;
    v = {r.value, r.abs_error_estimate};
    if (monte_carlo) {
      const auto e = estimate(run, SimMetric::rate());
      v.insert(v.end(), {e.mean, e.half_width});
    }
  } else if (metric == "outage") {
    for (double T : rc.thresholds_db) {
      const auto r = outage_probability(rc.net, db_to_linear(T), rc.outage, rc.ns);
      converged = converged && r.converged;
      v.insert(v.end(), {r.value, r.abs_error_estimate});
      if (monte_carlo) {
        const auto e = estimate(run, SimMetric::outage(db_to_linear(T)));
        v.insert(v.end(), {e.mean, e.half_width});
      }
    }
  } else if (metric == "moment") {
    for (double r : rc.moment_orders) {
      const auto m = sinr_moment(rc.net, r, rc.series, rc.ns);
      if (!m.divergent) converged = converged && m.converged;
      v.insert(v.end(), {m.value, m.abs_error_estimate});
      if (monte_carlo) {
        const auto e = estimate(run, SimMetric::moment(r));
        v.insert(v.end(), {e.tail_corrected_mean, e.half_width});
      }
    }
  } else {
    throw config_error("sweep.metric: unknown metric '" + metric + "' (rate, outage, moment)");
  }
  return v;
}

SweepTable run_sweep(const RunConfig& rc, int threads) { return sweep_impl(rc, true, threads); }

SweepTable run_sweep_serial(const RunConfig& rc) { return sweep_impl(rc, false, 1); }

std::vector<Check> validate_network(const RunConfig& rc) {
  std::vector<Check> checks;
  const auto run = simulate(rc.net, rc.sim);
  const double n = static_cast<double>(run.drops.size());
  const int K = static_cast<int>(rc.net.tiers.size());
  const auto frac = association_fractions(run, K);
  for (int k = 0; k < K; ++k) {
    Check c;
    c.name = "association_tier" + std::to_string(k);
    c.analytic = association_probability(rc.net, k);
    c.simulated = frac[k];
    c.half_width = 1.96 * std::sqrt(c.analytic * (1.0 - c.analytic) / n);
    c.tolerance = 3.0 * std::sqrt(c.analytic * (1.0 - c.analytic) / n) + 1e-12;
    c.pass = std::abs(c.analytic - c.simulated) <= c.tolerance;
    checks.push_back(c);
  }
  {
    const auto r = spectral_efficiency(rc.net, rc.series, rc.ns);
    const auto e = estimate(run, SimMetric::rate());
    Check c{"rate_nats", r.value, e.mean, e.half_width, std::max(0.02 * std::abs(r.value), 1.5 * e.half_width), false};
    c.pass = r.converged && std::abs(c.analytic - c.simulated) <= c.tolerance;
    checks.push_back(c);
  }
  for (double T : rc.thresholds_db) {
    const auto r = outage_probability(rc.net, db_to_linear(T), rc.outage, rc.ns);
    const auto e = estimate(run, SimMetric::outage(db_to_linear(T)));
    Check c{"outage_" + label(T) + "dB", r.value, e.mean, e.half_width, std::max(0.02, 1.5 * e.half_width), false};
    c.pass = r.converged && std::abs(c.analytic - c.simulated) <= c.tolerance;
    checks.push_back(c);
  }
  for (double r : rc.moment_orders) {
    const auto m = sinr_moment(rc.net, r, rc.series, rc.ns);
    const auto e = estimate(run, SimMetric::moment(r));
    Check c;
    c.name = "moment_" + label(r);
    c.analytic = m.value;
    c.simulated = e.tail_corrected_mean;
    c.half_width = e.half_width;
    if (m.divergent) {
      c.tolerance = std::numeric_limits<double>::infinity();
      c.pass = true;
    } else {
      c.tolerance = std::max(0.05 * std::abs(m.value), 1.5 * e.half_width);
      c.pass = m.converged && std::abs(c.analytic - c.simulated) <= c.tolerance;
    }
    checks.push_back(c);
  }
  return checks;
}

}  // namespace kms
