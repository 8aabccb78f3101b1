#pragma once

#include <stdexcept>
#include <string>

namespace kms {

// Tolerances and limits shared by every numerical routine.
struct NumericSettings {
  double series_tol = 1e-14;
  int series_max_terms = 100000;
  int appell_max_blocks = 10000;
  double appell_tol = 1e-12;

  double quad_rel_tol = 1e-10;
  double quad_abs_tol = 1e-15;
  int quad_max_intervals = 2000;

  int laguerre_max_order = 120;
  double laguerre_tol = 1e-10;
  int perf_max_order = 400;
  double perf_series_tol = 1e-10;

  int gl_order = 64;
  double w_warn_tol = 1e-7;
};

class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kms
