#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "kms/outage.hpp"
#include "kms/simulator.hpp"

using namespace kms;
using doctest::Approx;

TEST_CASE("Rayleigh closed form") {
  auto net = fixture::rayleigh();
  const auto r = outage_probability(net, 1.0);
  CHECK(r.converged);
  CHECK(r.value == Approx(1.0 - 1.0 / (1.0 + M_PI / 4)).epsilon(1e-9));
  CHECK(std::abs(r.value - 0.4399008465) < 1e-9);
}

TEST_CASE("limits and monotonicity") {
  auto net = fixture::section6();
  CHECK(outage_probability(net, 0.0).value == 0.0);
  CHECK(outage_probability(net, INFINITY).value == 1.0);
  CHECK(outage_probability(net, 1e-6).value < 1e-3);
  CHECK(outage_probability(net, 1e6).value > 0.99);
  double prev = 0.0;
  for (double tdb = -20; tdb <= 30; tdb += 5) {
    const double v = outage_probability(net, std::pow(10.0, tdb / 10)).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("jet route agrees with the negative-binomial route") {
  auto net = fixture::section6(2.0, 2.0, 1.0);
  OutageControls lj;
  lj.method = OutageMethod::LaguerreJets;
  for (double T : {0.1, 1.0, 10.0}) {
    const auto a = outage_probability(net, T);
    const auto b = outage_probability(net, T, lj);
    CHECK(a.value == Approx(b.value).epsilon(1e-6));
  }
  auto frac = fixture::section6(2.0, 1.5, 1.0);
  const auto f = outage_probability(frac, 1.0, lj);
  CHECK_FALSE(f.note.empty());
}

TEST_CASE("kernel Taylor coefficients match finite differences") {
  auto net = fixture::section6();
  RadialKernel K(net, 0);
  const double c = 2.0, s0 = 1.0, h = 1e-3;
  const auto t = kernel_taylor(K, c, s0, 3);
  auto f = [&](double s) { return K(s * c); };
  CHECK(t[0] == Approx(f(s0)).epsilon(1e-13));
  CHECK(t[1] == Approx((f(s0 + h) - f(s0 - h)) / (2 * h)).epsilon(1e-6));
  CHECK(2 * t[2] == Approx((f(s0 + h) - 2 * f(s0) + f(s0 - h)) / (h * h)).epsilon(1e-4));
  CHECK(6 * t[3] == Approx((f(s0 + 2 * h) - 2 * f(s0 + h) + 2 * f(s0 - h) - f(s0 - 2 * h)) / (2 * h * h * h)).epsilon(1e-3));
}

TEST_CASE("sigmoid-smoothed indicator") {
  auto net = fixture::rayleigh();
  const double T = 1.0, eps = 50.0;
  auto g = GFunction::custom([&](const Jet& x) { return 1.0 / (1.0 + exp(-eps * (x - T))); });
  const double cov = expected_g_sinr(net, g).value;
  const double out = outage_probability(net, T).value;
  CHECK(std::abs(out - (1.0 - cov)) < 2e-3);
}

TEST_CASE("fractional mu against simulation") {
  auto net = fixture::rayleigh();
  net.tiers[0].fading = KappaMuShadowedParams::make(1.0, 1.5, 2.0, 1.0);
  const double T = 1.0;
  const auto a = outage_probability(net, T);
  CHECK(a.converged);
  SimConfig sc;
  sc.drops = 20000;
  sc.seed = 99;
  const auto e = estimate(net, sc, SimMetric::outage(T));
  CHECK(std::abs(a.value - e.mean) < 3 * e.half_width / 1.96 + 1e-3);
}
