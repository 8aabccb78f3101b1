#pragma once

#include <string>
#include <vector>

#include "kms/config.hpp"

namespace kms {

struct SweepTable {
  std::vector<std::string> columns;  // first column is the swept parameter
  std::vector<std::vector<double>> rows;
  bool converged = true;
};

// metric columns for one configuration: rate, outage, moment
std::vector<std::string> metric_columns(const RunConfig& rc, const std::string& metric, bool monte_carlo);
std::vector<double> metric_values(const RunConfig& rc, const std::string& metric, bool monte_carlo, bool& converged);

// grid points evaluated concurrently, rows kept in grid order
SweepTable run_sweep(const RunConfig& rc, int threads = 0);
SweepTable run_sweep_serial(const RunConfig& rc);

struct Check {
  std::string name;
  double analytic = 0.0;
  double simulated = 0.0;
  double half_width = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// analytic metrics against the simulator on the configured network
std::vector<Check> validate_network(const RunConfig& rc);

}  // namespace kms
