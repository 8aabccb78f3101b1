#pragma once

#include <functional>
#include <vector>

#include "kms/settings.hpp"

namespace kms {

// f(x, out) writes dim values at x
using VecIntegrand = std::function<void(double, double*)>;

struct IntegrationResult {
  std::vector<double> value;
  std::vector<double> error;
  int evaluations = 0;
  int intervals = 0;
  bool converged = false;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  int max_intervals = 2000;
  int initial_intervals = 1;
};

QuadOptions quad_options(const NumericSettings& ns);

// adaptive Gauss-Kronrod (7/15) on [a, b]
IntegrationResult integrate_gk(const VecIntegrand& f, int dim, double a, double b, const QuadOptions& opt);
// [a, inf) through x = a + t/(1-t)
IntegrationResult integrate_gk_inf(const VecIntegrand& f, int dim, double a, const QuadOptions& opt);

// f(x, dist_from_a, dist_from_b, out); endpoint distances are exact to full precision
using EndpointIntegrand = std::function<void(double, double, double, double*)>;
// tanh-sinh on (a, b) for integrable endpoint singularities
IntegrationResult integrate_tanh_sinh(const EndpointIntegrand& f, int dim, double a, double b,
                                      double rel_tol, int max_levels = 12);

double integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt,
                 double* err = nullptr);
double integrate_inf(const std::function<double(double)>& f, double a, const QuadOptions& opt,
                     double* err = nullptr);

}  // namespace kms
