#include "kms/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kms {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw config_error(path + ": expected an object");
  for (const auto& [key, val] : obj.items())
    if (!allowed.count(key)) throw config_error((path.empty() ? key : path + "." + key) + ": unknown key");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double num(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw config_error(join(path, key) + ": expected a number");
  return v.get<double>();
}

long long integer(const json& obj, const std::string& key, const std::string& path, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (v.is_number_integer() || v.is_number_unsigned()) return v.get<long long>();
  if (v.is_number_float() && v.get<double>() == std::floor(v.get<double>())) return static_cast<long long>(v.get<double>());
  throw config_error(join(path, key) + ": expected an integer");
}

bool boolean(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw config_error(join(path, key) + ": expected true or false");
  return obj.at(key).get<bool>();
}

std::string text(const json& obj, const std::string& key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw config_error(join(path, key) + ": expected a string");
  return obj.at(key).get<std::string>();
}

std::vector<double> numbers(const json& obj, const std::string& key, const std::string& path,
                            const std::vector<double>& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw config_error(join(path, key) + ": expected an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw config_error(join(path, key) + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

KappaMuShadowedParams parse_fading(const json& f, const std::string& path) {
  check_keys(f, path, {"model", "kappa", "mu", "m", "mean_power", "K", "q", "eta"});
  const double hbar = num(f, "mean_power", path, 1.0);
  try {
    if (f.contains("model")) {
      NamedModelParams v;
      v.K = num(f, "K", path, 0.0);
      v.m = num(f, "m", path, 1.0);
      v.q = num(f, "q", path, 1.0);
      v.eta = num(f, "eta", path, 1.0);
      v.kappa = num(f, "kappa", path, 0.0);
      v.mu = num(f, "mu", path, 1.0);
      v.mean_power = hbar;
      return from_named_model(named_model_from_string(text(f, "model", path, "")), v);
    }
    double kappa = num(f, "kappa", path, 0.0);
    if (kappa == 0.0) kappa = kKappaZero;
    return KappaMuShadowedParams::make(kappa, num(f, "mu", path, 1.0), num(f, "m", path, 1.0), hbar);
  } catch (const config_error&) {
    throw;
  } catch (const domain_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

MatchMode match_mode(const std::string& s, const std::string& path) {
  if (s == "mean_variance") return MatchMode::MeanVariance;
  if (s == "mean_delta_moment") return MatchMode::MeanDeltaMoment;
  throw config_error(path + ": unknown match mode '" + s + "'");
}

ShadowingModel parse_shadowing(const json& s, const std::string& path, double delta) {
  check_keys(s, path, {"type", "mu_l", "sigma_l", "k", "theta", "mean", "shape", "match"});
  const std::string type = text(s, "type", path, "none");
  ShadowingModel m;
  try {
    if (type == "none") {
      m = ShadowingModel::none();
    } else if (type == "lognormal") {
      m = ShadowingModel::lognormal(num(s, "mu_l", path, 0.0), num(s, "sigma_l", path, 0.0));
    } else if (type == "gamma" || type == "inverse_gaussian") {
      if (s.contains("match")) {
        const auto r = match_to_lognormal(num(s, "sigma_l", path, 0.0), num(s, "mu_l", path, 0.0),
                                          match_mode(text(s, "match", path, ""), join(path, "match")), delta);
        m = type == "gamma" ? r.gamma : r.inverse_gaussian;
      } else if (type == "gamma") {
        m = ShadowingModel::gamma(num(s, "k", path, 1.0), num(s, "theta", path, 1.0));
      } else {
        m = ShadowingModel::inverse_gaussian(num(s, "mean", path, 1.0), num(s, "shape", path, 1.0));
      }
    } else {
      throw config_error(join(path, "type") + ": unknown shadowing law '" + type + "'");
    }
    m.validate();
  } catch (const config_error&) {
    throw;
  } catch (const domain_error& e) {
    throw config_error(path + ": " + e.what());
  }
  return m;
}

NumericSettings parse_numerics(const json& j, const std::string& path) {
  check_keys(j, path,
             {"series_tol", "series_max_terms", "appell_max_blocks", "appell_tol", "quad_rel_tol", "quad_abs_tol",
              "quad_max_intervals", "laguerre_max_order", "laguerre_tol", "perf_max_order", "perf_series_tol",
              "gl_order", "w_warn_tol"});
  NumericSettings ns;
  ns.series_tol = num(j, "series_tol", path, ns.series_tol);
  ns.series_max_terms = static_cast<int>(integer(j, "series_max_terms", path, ns.series_max_terms));
  ns.appell_max_blocks = static_cast<int>(integer(j, "appell_max_blocks", path, ns.appell_max_blocks));
  ns.appell_tol = num(j, "appell_tol", path, ns.appell_tol);
  ns.quad_rel_tol = num(j, "quad_rel_tol", path, ns.quad_rel_tol);
  ns.quad_abs_tol = num(j, "quad_abs_tol", path, ns.quad_abs_tol);
  ns.quad_max_intervals = static_cast<int>(integer(j, "quad_max_intervals", path, ns.quad_max_intervals));
  ns.laguerre_max_order = static_cast<int>(integer(j, "laguerre_max_order", path, ns.laguerre_max_order));
  ns.laguerre_tol = num(j, "laguerre_tol", path, ns.laguerre_tol);
  ns.perf_max_order = static_cast<int>(integer(j, "perf_max_order", path, ns.perf_max_order));
  ns.perf_series_tol = num(j, "perf_series_tol", path, ns.perf_series_tol);
  ns.gl_order = static_cast<int>(integer(j, "gl_order", path, ns.gl_order));
  ns.w_warn_tol = num(j, "w_warn_tol", path, ns.w_warn_tol);
  return ns;
}

template <class E>
E pick(const std::string& s, const std::string& path, std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [name, val] : options)
    if (s == name) return val;
  throw config_error(path + ": unknown value '" + s + "'");
}

}  // namespace

json::json_pointer parameter_pointer(const std::string& path) {
  std::string p;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) p += "/" + token;
    token.clear();
  };
  for (char c : path) {
    if (c == '.' || c == '[') {
      flush();
    } else if (c == ']') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  if (p.empty()) throw config_error("sweep.parameter: empty path");
  try {
    return json::json_pointer(p);
  } catch (const json::exception&) {
    throw config_error("sweep.parameter: bad path '" + path + "'");
  }
}

json with_parameter(const json& doc, const std::string& path, double value) {
  // "[*]" applies the value to every element of the array
  const auto star = path.find("[*]");
  if (star != std::string::npos) {
    const auto arr = parameter_pointer(path.substr(0, star));
    if (!doc.contains(arr) || !doc.at(arr).is_array())
      throw config_error("sweep.parameter: '" + path.substr(0, star) + "' is not an array");
    json out = doc;
    for (size_t i = 0; i < doc.at(arr).size(); ++i)
      out = with_parameter(out, path.substr(0, star) + "[" + std::to_string(i) + "]" + path.substr(star + 3), value);
    return out;
  }
  const auto ptr = parameter_pointer(path);
  json out = doc;
  if (!out.contains(ptr) || !out.at(ptr).is_number())
    throw config_error("sweep.parameter: '" + path + "' does not name a numeric field");
  out[ptr] = value;
  return out;
}

RunConfig parse_config(const json& doc) {
  check_keys(doc, "",
             {"tiers", "alpha", "tau", "noise_psd", "bandwidth", "snr_db", "regime", "allow_alpha_2", "numerics",
              "series", "outage", "simulation", "metrics", "sweep", "comment"});
  RunConfig rc;
  rc.document = doc;
  auto& net = rc.net;
  net.alpha = num(doc, "alpha", "", 4.0);
  net.tau = num(doc, "tau", "", 1.0);
  net.noise_psd = num(doc, "noise_psd", "", 0.0);
  net.bandwidth = num(doc, "bandwidth", "", 1.0);
  net.allow_alpha_2 = boolean(doc, "allow_alpha_2", "", false);
  try {
    net.regime = regime_from_string(text(doc, "regime", "", "general"));
  } catch (const domain_error& e) {
    throw config_error(e.what());
  }
  if (!doc.contains("tiers") || !doc.at("tiers").is_array() || doc.at("tiers").empty())
    throw config_error("tiers: expected a nonempty array");
  const double delta = net.alpha > 0 ? 2.0 / net.alpha : 0.5;
  const auto& tiers = doc.at("tiers");
  for (size_t i = 0; i < tiers.size(); ++i) {
    const std::string path = "tiers[" + std::to_string(i) + "]";
    const auto& t = tiers[i];
    check_keys(t, path, {"density", "cell_radius", "power", "power_dbm", "fading", "shadowing"});
    TierConfig tc;
    if (t.contains("cell_radius")) {
      const double r = num(t, "cell_radius", path, 0.0);
      if (!(r > 0.0)) throw config_error(path + ".cell_radius: must be > 0");
      tc.density = 1.0 / (3.14159265358979323846 * r * r);
    } else {
      tc.density = num(t, "density", path, tc.density);
    }
    tc.power = t.contains("power_dbm") ? std::pow(10.0, (num(t, "power_dbm", path, 0.0) - 30.0) / 10.0)
                                       : num(t, "power", path, 1.0);
    if (t.contains("fading")) tc.fading = parse_fading(t.at("fading"), path + ".fading");
    if (t.contains("shadowing")) tc.shadowing = parse_shadowing(t.at("shadowing"), path + ".shadowing", delta);
    net.tiers.push_back(tc);
  }
  if (doc.contains("snr_db")) {
    if (doc.contains("noise_psd")) throw config_error("snr_db: give either snr_db or noise_psd");
    // SNR = E[chi] hbar / Nhat of the first tier at unit distance
    const auto& t0 = net.tiers[0];
    const double snr = std::pow(10.0, num(doc, "snr_db", "", 0.0) / 10.0);
    const double nhat = moment(t0.shadowing, 1.0) * t0.fading.mean_power / snr;
    net.noise_psd = nhat * net.tau * t0.power / net.bandwidth;
  }
  try {
    net.validate();
  } catch (const domain_error& e) {
    throw config_error(e.what());
  }

  if (doc.contains("numerics")) rc.ns = parse_numerics(doc.at("numerics"), "numerics");

  if (doc.contains("series")) {
    const auto& s = doc.at("series");
    check_keys(s, "series", {"max_order", "tol", "scale", "xi", "method", "kernel"});
    rc.series.max_order = static_cast<int>(integer(s, "max_order", "series", 0));
    rc.series.tol = num(s, "tol", "series", 0.0);
    rc.series.scale = pick<ScaleMode>(text(s, "scale", "series", "auto"), "series.scale",
                                      {{"auto", ScaleMode::Auto}, {"unit", ScaleMode::Unit}});
    rc.series.xi = pick<XiMode>(text(s, "xi", "series", "differenced"), "series.xi",
                                {{"differenced", XiMode::Differenced}, {"cached", XiMode::Cached}, {"naive", XiMode::Naive}});
    rc.series.method = pick<SeriesMethod>(text(s, "method", "series", "laguerre"), "series.method",
                                          {{"laguerre", SeriesMethod::Laguerre},
                                           {"negative_binomial", SeriesMethod::NegativeBinomial}});
    rc.series.kernel = pick<KernelMethod>(text(s, "kernel", "series", "auto"), "series.kernel",
                                          {{"auto", KernelMethod::Auto}, {"numeric", KernelMethod::Numeric}});
  }
  if (doc.contains("outage")) {
    const auto& o = doc.at("outage");
    check_keys(o, "outage", {"method", "max_order", "tol", "scale", "kernel"});
    rc.outage.method = pick<OutageMethod>(text(o, "method", "outage", "negative_binomial"), "outage.method",
                                          {{"negative_binomial", OutageMethod::NegativeBinomial},
                                           {"laguerre_jets", OutageMethod::LaguerreJets}});
    rc.outage.max_order = static_cast<int>(integer(o, "max_order", "outage", 0));
    rc.outage.tol = num(o, "tol", "outage", rc.outage.tol);
    rc.outage.scale = pick<ScaleMode>(text(o, "scale", "outage", "auto"), "outage.scale",
                                      {{"auto", ScaleMode::Auto}, {"unit", ScaleMode::Unit}});
    rc.outage.kernel = pick<KernelMethod>(text(o, "kernel", "outage", "auto"), "outage.kernel",
                                          {{"auto", KernelMethod::Auto}, {"numeric", KernelMethod::Numeric}});
  }
  if (doc.contains("simulation")) {
    const auto& s = doc.at("simulation");
    const std::string p = "simulation";
    check_keys(s, p,
               {"drops", "seed", "region_radius", "mode", "threads", "r_lo", "r_hi", "max_bias", "expected_points"});
    rc.sim.drops = integer(s, "drops", p, rc.sim.drops);
    rc.sim.seed = static_cast<std::uint64_t>(integer(s, "seed", p, static_cast<long long>(rc.sim.seed)));
    rc.sim.region_radius = num(s, "region_radius", p, 0.0);
    rc.sim.mode = pick<ShadowingMode>(text(s, "mode", p, "explicit"), "simulation.mode",
                                      {{"explicit", ShadowingMode::Explicit}, {"equivalent", ShadowingMode::Equivalent}});
    rc.sim.threads = static_cast<int>(integer(s, "threads", p, 0));
    if (s.contains("r_lo") || s.contains("r_hi")) {
      rc.sim.condition = true;
      rc.sim.r_lo = num(s, "r_lo", p, 0.0);
      rc.sim.r_hi = num(s, "r_hi", p, std::numeric_limits<double>::infinity());
    }
    rc.sim.max_bias = num(s, "max_bias", p, rc.sim.max_bias);
    rc.sim.expected_points = num(s, "expected_points", p, rc.sim.expected_points);
    if (rc.sim.drops <= 0) throw config_error("simulation.drops: must be > 0");
  }
  if (doc.contains("metrics")) {
    const auto& m = doc.at("metrics");
    const std::string p = "metrics";
    check_keys(m, p, {"thresholds_db", "moment_orders", "mgf_t", "mgf_terms", "pdf_x", "coeff_order", "coeff_tol"});
    rc.thresholds_db = numbers(m, "thresholds_db", p, rc.thresholds_db);
    rc.moment_orders = numbers(m, "moment_orders", p, rc.moment_orders);
    rc.mgf_t = numbers(m, "mgf_t", p, rc.mgf_t);
    rc.mgf_terms = static_cast<int>(integer(m, "mgf_terms", p, rc.mgf_terms));
    rc.pdf_x = numbers(m, "pdf_x", p, rc.pdf_x);
    rc.coeff_order = static_cast<int>(integer(m, "coeff_order", p, rc.coeff_order));
    rc.coeff_tol = num(m, "coeff_tol", p, rc.coeff_tol);
  }
  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    check_keys(s, "sweep", {"metric", "parameter", "values", "monte_carlo"});
    rc.has_sweep = true;
    rc.sweep.metric = text(s, "metric", "sweep", "rate");
    rc.sweep.parameter = text(s, "parameter", "sweep", "");
    rc.sweep.values = numbers(s, "values", "sweep", {});
    rc.sweep.monte_carlo = boolean(s, "monte_carlo", "sweep", false);
    if (rc.sweep.values.empty()) throw config_error("sweep.values: grid must be nonempty");
    with_parameter(doc, rc.sweep.parameter, rc.sweep.values.front());
  }
  return rc;
}

json read_config_text(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("parse error: ") + e.what());
  }
}

json read_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw config_error("cannot open config file '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return read_config_text(ss.str());
}

RunConfig load_config_text(const std::string& text) { return parse_config(read_config_text(text)); }

RunConfig load_config(const std::string& file) { return parse_config(read_config(file)); }

json to_json(const KappaMuShadowedParams& f) {
  return {{"kappa", f.kappa}, {"mu", f.mu}, {"m", f.m}, {"mean_power", f.mean_power}};
}

json to_json(const ShadowingModel& s) {
  switch (s.type) {
    case ShadowingModel::Type::None:
      return {{"type", "none"}};
    case ShadowingModel::Type::Lognormal:
      return {{"type", "lognormal"}, {"mu_l", s.mu_l}, {"sigma_l", s.sigma_l}};
    case ShadowingModel::Type::Gamma:
      return {{"type", "gamma"}, {"k", s.k_g}, {"theta", s.theta_g}};
    case ShadowingModel::Type::InverseGaussian:
      return {{"type", "inverse_gaussian"}, {"mean", s.mu_ig}, {"shape", s.lambda_ig}};
  }
  return {};
}

json to_json(const NetworkConfig& net) {
  json tiers = json::array();
  for (const auto& t : net.tiers)
    tiers.push_back({{"density", t.density},
                     {"power", t.power},
                     {"fading", to_json(t.fading)},
                     {"shadowing", to_json(t.shadowing)}});
  return {{"tiers", tiers},
          {"alpha", net.alpha},
          {"tau", net.tau},
          {"noise_psd", net.noise_psd},
          {"bandwidth", net.bandwidth},
          {"regime", regime_name(net.regime)},
          {"allow_alpha_2", net.allow_alpha_2}};
}

}  // namespace kms
