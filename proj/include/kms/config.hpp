#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "kms/network.hpp"
#include "kms/outage.hpp"
#include "kms/performance.hpp"
#include "kms/settings.hpp"
#include "kms/simulator.hpp"

namespace kms {

class config_error : public domain_error {
 public:
  using domain_error::domain_error;
};

struct SweepSpec {
  std::string metric = "rate";
  std::string parameter;  // e.g. tiers[0].fading.kappa
  std::vector<double> values;
  bool monte_carlo = false;
};

struct RunConfig {
  NetworkConfig net;
  NumericSettings ns;
  SeriesControls series;
  OutageControls outage;
  SimConfig sim;
  std::vector<double> thresholds_db{-5.0, 0.0, 5.0, 10.0};
  std::vector<double> moment_orders{0.2, 0.4};
  std::vector<double> mgf_t{-1.0};
  int mgf_terms = 10;
  std::vector<double> pdf_x{0.1, 0.5, 1.0, 2.0, 4.0};
  int coeff_order = 50;
  double coeff_tol = 1e-10;
  bool has_sweep = false;
  SweepSpec sweep;
  nlohmann::json document;  // the parsed input
};

// "tiers[0].fading.kappa" -> "/tiers/0/fading/kappa"
nlohmann::json::json_pointer parameter_pointer(const std::string& path);

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& file);
// JSON document of a config file, without validation
nlohmann::json read_config(const std::string& file);
nlohmann::json read_config_text(const std::string& text);
RunConfig load_config_text(const std::string& text);
// document with one numeric field replaced
nlohmann::json with_parameter(const nlohmann::json& doc, const std::string& path, double value);

nlohmann::json to_json(const NetworkConfig& net);
nlohmann::json to_json(const KappaMuShadowedParams& f);
nlohmann::json to_json(const ShadowingModel& s);

}  // namespace kms
