#pragma once

#include <vector>

#include "kms/settings.hpp"

namespace kms {

double log_gamma(double x);
double gamma_fn(double x);
double real_binomial(double x, double y);
// (a)_n for real a
double pochhammer(double a, int n);

double lower_incomplete_gamma_reg(double s, double x, const NumericSettings& ns = {});
double upper_incomplete_gamma_reg(double s, double x, const NumericSettings& ns = {});
// unregularized gamma(s, x)
double lower_incomplete_gamma(double s, double x, const NumericSettings& ns = {});

double kummer_1f1(double a, double b, double x, const NumericSettings& ns = {});
// e^{-x} 1F1(a; b; x) for x >= 0, safe for large x
double kummer_1f1_scaled(double a, double b, double x, const NumericSettings& ns = {});

double gauss_2f1(double a, double b, double c, double z, const NumericSettings& ns = {});
// plain power series, requires 0 <= |z| < 1
double gauss_2f1_series(double a, double b, double c, double z, const NumericSettings& ns = {});

double appell_f2(double alpha, double beta, double beta2, double gamma1, double gamma2,
                 double x, double y, const NumericSettings& ns = {});

double bessel_k_real_order(double nu, double x);

double erfcx(double x);

struct QuadratureRule {
  int order = 0;
  double alpha = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;
};

// Gauss-Laguerre rule for weight x^alpha e^{-x}
QuadratureRule gauss_laguerre(int order, double alpha = 0.0);
// cached copy, safe for concurrent readers
const QuadratureRule& gauss_laguerre_cached(int order);

}  // namespace kms
