#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "kms/quadrature.hpp"

using namespace kms;
using doctest::Approx;

TEST_CASE("gauss kronrod on finite interval") {
  QuadOptions o;
  auto r = integrate_gk([](double x, double* out) { out[0] = std::sin(x); out[1] = x * x; }, 2, 0.0, M_PI, o);
  CHECK(r.converged);
  CHECK(r.value[0] == Approx(2.0).epsilon(1e-12));
  CHECK(r.value[1] == Approx(M_PI * M_PI * M_PI / 3).epsilon(1e-12));
}

TEST_CASE("half line against boost") {
  QuadOptions o;
  auto f = [](double x) { return std::exp(-x) / (1 + x * x); };
  const double ours = integrate_inf(f, 0.0, o);
  const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
  CHECK(ours == Approx(ref).epsilon(1e-11));
}

TEST_CASE("tanh sinh endpoint singularity") {
  auto r = integrate_tanh_sinh([](double x, double, double, double* out) { out[0] = 1.0 / std::sqrt(x); }, 1,
                               0.0, 1.0, 1e-12);
  CHECK(r.value[0] == Approx(2.0).epsilon(1e-10));
  boost::math::quadrature::tanh_sinh<double> ts;
  auto g = [](double x) { return std::log(x) * std::pow(1 - x, -0.3); };
  const double ref = ts.integrate(g, 0.0, 1.0);
  auto ours = integrate_tanh_sinh(
      [](double x, double, double db, double* out) { out[0] = std::log(x) * std::pow(db, -0.3); }, 1, 0.0, 1.0,
      1e-12);
  CHECK(ours.value[0] == Approx(ref).epsilon(1e-9));
}
