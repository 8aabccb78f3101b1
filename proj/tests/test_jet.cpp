#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kms/jet.hpp"

using namespace kms;
using doctest::Approx;

TEST_CASE("exp and log jets") {
  const Jet x = Jet::variable(6, 0.7);
  const Jet e = exp(x);
  double f = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) f *= k;
    CHECK(e[k] == Approx(std::exp(0.7) / f).epsilon(1e-14));
  }
  const Jet l = log(x);
  CHECK(l[1] == Approx(1 / 0.7).epsilon(1e-14));
  CHECK(l[3] == Approx(1 / (3 * 0.343)).epsilon(1e-13));
  const Jet r = exp(log(x));
  for (int k = 0; k <= 6; ++k) CHECK(r[k] == Approx(x[k]).epsilon(1e-13).scale(1.0));
}

TEST_CASE("pow and division agree with finite differences") {
  auto f = [](double t) { return std::pow(1.0 + t, -2.5) / (2.0 + t * t); };
  const Jet t = Jet::variable(3, 0.4);
  const Jet j = pow(1.0 + t, -2.5) / (2.0 + t * t);
  const double h = 1e-3;
  const double d1 = (f(0.4 + h) - f(0.4 - h)) / (2 * h);
  const double d2 = (f(0.4 + h) - 2 * f(0.4) + f(0.4 - h)) / (h * h);
  const double d3 = (f(0.4 + 2 * h) - 2 * f(0.4 + h) + 2 * f(0.4 - h) - f(0.4 - 2 * h)) / (2 * h * h * h);
  CHECK(j[0] == Approx(f(0.4)).epsilon(1e-15));
  CHECK(j[1] == Approx(d1).epsilon(1e-6));
  CHECK(2 * j[2] == Approx(d2).epsilon(1e-5));
  CHECK(6 * j[3] == Approx(d3).epsilon(1e-4));
}

TEST_CASE("log1p and expm1 keep precision") {
  Jet x = Jet::variable(2, 1e-12);
  CHECK(log1p(x)[0] == Approx(1e-12).epsilon(1e-10));
  CHECK(expm1(x)[0] == Approx(1e-12).epsilon(1e-10));
}
