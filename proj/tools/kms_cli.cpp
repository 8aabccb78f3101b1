#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "kms/batch.hpp"
#include "kms/config.hpp"
#include "kms/fading.hpp"
#include "kms/outage.hpp"
#include "kms/performance.hpp"
#include "kms/simulator.hpp"

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kNonConvergence = 3, kValidation = 4 };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
  return buf;
}

void emit(std::ostream& os, const std::string& format, const std::string& command, const json& doc,
          std::uint64_t seed, const Table& t) {
  if (format == "json-lines") {
    os << json{{"kms", kVersion}, {"command", command}, {"seed", seed}, {"config", doc}}.dump() << "\n";
    for (const auto& row : t.rows) {
      json o = json::object();
      for (size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = row[i];
      os << o.dump() << "\n";
    }
    return;
  }
  os << "# kms " << kVersion << "\n";
  os << "# command: " << command << "\n";
  os << "# seed: " << seed << "\n";
  os << "# config: " << doc.dump() << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
    os << "\n";
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Table cmd_pdf(const kms::RunConfig& rc) {
  Table t{{"tier", "x", "pdf_exact", "pdf_series", "cdf_exact", "cdf_series", "series_usable"}, {}};
  for (size_t k = 0; k < rc.net.tiers.size(); ++k) {
    const auto& f = rc.net.tiers[k].fading;
    const auto co = kms::laguerre_coeffs(f, rc.coeff_order, rc.coeff_tol, kms::ScaleMode::Auto, rc.ns);
    for (double x : rc.pdf_x) {
      const auto ps = kms::pdf_series_checked(co, f, x);
      const auto cs = kms::cdf_series_checked(co, f, x);
      t.rows.push_back({static_cast<int>(k), x, kms::pdf_exact(f, x, rc.ns), ps.value, kms::cdf_exact(f, x, rc.ns),
                        cs.value, ps.usable && cs.usable});
    }
  }
  return t;
}

Table cmd_coeffs(const kms::RunConfig& rc, bool& converged) {
  Table t{{"tier", "n", "coefficient", "scale", "converged", "tail_estimate"}, {}};
  for (size_t k = 0; k < rc.net.tiers.size(); ++k) {
    const auto co =
        kms::laguerre_coeffs(rc.net.tiers[k].fading, rc.coeff_order, rc.coeff_tol, kms::ScaleMode::Auto, rc.ns);
    converged = converged && co.converged;
    for (int n = 0; n <= co.order; ++n)
      t.rows.push_back({static_cast<int>(k), n, co.C[n], co.scale, co.converged, co.tail_estimate});
  }
  return t;
}

Table cmd_rate(const kms::RunConfig& rc, bool& converged) {
  const auto r = kms::spectral_efficiency(rc.net, rc.series, rc.ns);
  converged = converged && r.converged;
  const auto& t0 = rc.net.tiers[0];
  const double sigma =
      t0.shadowing.type == kms::ShadowingModel::Type::Lognormal ? t0.shadowing.sigma_l : 0.0;
  return {{"kappa", "mu", "m", "sigma_l", "rate_nats", "err_est"},
          {{t0.fading.kappa, t0.fading.mu, t0.fading.m, sigma, r.value, r.abs_error_estimate}}};
}

Table cmd_moments(const kms::RunConfig& rc, bool& converged) {
  Table t{{"r", "value", "err_est", "divergent"}, {}};
  for (double r : rc.moment_orders) {
    const auto m = kms::sinr_moment(rc.net, r, rc.series, rc.ns);
    if (!m.divergent) converged = converged && m.converged;
    t.rows.push_back({r, m.value, m.abs_error_estimate, m.divergent});
  }
  return t;
}

Table cmd_mgf(const kms::RunConfig& rc, bool& converged) {
  Table t{{"t", "value", "err_est", "series_divergent"}, {}};
  for (double s : rc.mgf_t) {
    const auto m = kms::sinr_mgf(rc.net, s, rc.mgf_terms, rc.series, rc.ns);
    const bool series_div = m.divergent || m.diagnostics.count("series_divergent");
    if (!m.divergent && std::isfinite(m.value)) converged = converged && m.converged;
    t.rows.push_back({s, m.value, m.abs_error_estimate, series_div});
  }
  return t;
}

Table cmd_outage(const kms::RunConfig& rc, bool& converged) {
  Table t{{"T_dB", "T", "outage", "err_est"}, {}};
  for (double T : rc.thresholds_db) {
    const auto r = kms::outage_probability(rc.net, db_to_linear(T), rc.outage, rc.ns);
    converged = converged && r.converged;
    t.rows.push_back({T, db_to_linear(T), r.value, r.abs_error_estimate});
  }
  return t;
}

Table cmd_simulate(const kms::RunConfig& rc, const std::string& drop_log) {
  const auto run = kms::simulate(rc.net, rc.sim);
  if (!drop_log.empty()) {
    std::ofstream os(drop_log);
    if (!os) throw std::runtime_error("cannot write drop log '" + drop_log + "'");
    kms::write_drop_log(run, os);
  }
  Table t{{"metric", "mean", "half_width", "trimmed_mean", "tail_corrected_mean", "n"}, {}};
  auto add = [&](const std::string& name, const kms::Estimate& e) {
    t.rows.push_back({name, e.mean, e.half_width, e.trimmed_mean, e.tail_corrected_mean, e.n_effective});
  };
  add("rate_nats", kms::estimate(run, kms::SimMetric::rate()));
  for (double T : rc.thresholds_db) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "outage_%gdB", T);
    add(buf, kms::estimate(run, kms::SimMetric::outage(db_to_linear(T))));
  }
  for (double r : rc.moment_orders) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "moment_%g", r);
    add(buf, kms::estimate(run, kms::SimMetric::moment(r)));
  }
  const auto frac = kms::association_fractions(run, static_cast<int>(rc.net.tiers.size()));
  const double n = static_cast<double>(run.drops.size());
  for (size_t k = 0; k < frac.size(); ++k)
    t.rows.push_back({"association_tier" + std::to_string(k), frac[k],
                      1.96 * std::sqrt(frac[k] * (1.0 - frac[k]) / n), frac[k], frac[k],
                      static_cast<long long>(run.drops.size())});
  t.rows.push_back({"empty_redraws", static_cast<double>(run.empty_redraws), 0.0, 0.0, 0.0,
                    static_cast<long long>(run.drops.size())});
  return t;
}

Table cmd_sweep(const kms::RunConfig& rc, int threads, bool& converged) {
  const auto s = kms::run_sweep(rc, threads);
  converged = converged && s.converged;
  Table t{s.columns, {}};
  for (const auto& row : s.rows) t.rows.emplace_back(row.begin(), row.end());
  return t;
}

Table cmd_validate(const kms::RunConfig& rc, bool& passed) {
  Table t{{"check", "analytic", "simulated", "half_width", "tolerance", "pass"}, {}};
  for (const auto& c : kms::validate_network(rc)) {
    passed = passed && c.pass;
    t.rows.push_back({c.name, c.analytic, c.simulated, c.half_width, c.tolerance, c.pass ? "PASS" : "FAIL"});
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Downlink metrics of K-tier Poisson networks under kappa-mu shadowed fading"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file, out_file, format = "csv", drop_log;
  long long drops = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  double tol = 0.0;
  bool allow_alpha_2 = false;
  app.add_option("--config", config_file, "configuration file (JSON)")->required();
  app.add_option("--out", out_file, "output file (default: stdout)");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json-lines"}));
  app.add_option("--drops", drops, "Monte Carlo drops")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::NonNegativeNumber);
  app.add_option("--tol", tol, "series tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--allow-alpha-2", allow_alpha_2, "permit alpha = 2 in the noise-limited regime");
  app.add_option("--drop-log", drop_log, "simulate: write one record per drop");
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"pdf", "fading density and CDF, exact and series"},
      {"coeffs", "Laguerre coefficients of each tier's fading law"},
      {"rate", "spectral efficiency in nats per channel use"},
      {"moments", "SINR moments"},
      {"mgf", "SINR moment generating function"},
      {"outage", "outage probability at the configured thresholds"},
      {"simulate", "Monte Carlo estimates"},
      {"sweep", "metric over a parameter grid"},
      {"validate", "analytic versus Monte Carlo check table"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }
  seed_given = seed_opt->count() > 0;
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    json doc = kms::read_config(config_file);
    if (drops > 0) doc["simulation"]["drops"] = drops;
    if (seed_given) doc["simulation"]["seed"] = seed;
    if (tol > 0.0) {
      doc["series"]["tol"] = tol;
      doc["outage"]["tol"] = tol;
      doc["metrics"]["coeff_tol"] = tol;
    }
    if (allow_alpha_2) doc["allow_alpha_2"] = true;
    kms::RunConfig rc = kms::parse_config(doc);
    if (threads > 0) {
      rc.sim.threads = threads;
      omp_set_num_threads(threads);
    }

    bool converged = true, passed = true;
    Table t;
    if (command == "pdf") t = cmd_pdf(rc);
    else if (command == "coeffs") t = cmd_coeffs(rc, converged);
    else if (command == "rate") t = cmd_rate(rc, converged);
    else if (command == "moments") t = cmd_moments(rc, converged);
    else if (command == "mgf") t = cmd_mgf(rc, converged);
    else if (command == "outage") t = cmd_outage(rc, converged);
    else if (command == "simulate") t = cmd_simulate(rc, drop_log);
    else if (command == "sweep") t = cmd_sweep(rc, threads, converged);
    else t = cmd_validate(rc, passed);

    std::unique_ptr<std::ofstream> file;
    if (!out_file.empty()) {
      file = std::make_unique<std::ofstream>(out_file);
      if (!*file) throw std::runtime_error("cannot write '" + out_file + "'");
    }
    emit(file ? *file : std::cout, format, command, doc, rc.sim.seed, t);
    if (!passed) {
      std::cerr << "validation failed\n";
      return kValidation;
    }
    if (!converged) {
      std::cerr << "numerical evaluation did not converge to the requested tolerance\n";
      return kNonConvergence;
    }
    return kOk;
  } catch (const kms::convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const kms::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
