#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "kms/network.hpp"
#include "kms/quadrature.hpp"

using namespace kms;
using doctest::Approx;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}  // namespace

TEST_CASE("association probabilities") {
  auto one = fixture::rayleigh();
  CHECK(association_probability(one, 0) == 1.0);
  auto net = fixture::section6();
  CHECK(association_probability(net, 0) == Approx(2.0 / 2.1).epsilon(1e-12));
  CHECK(association_probability(net, 0) + association_probability(net, 1) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("serving distance law") {
  auto net = fixture::rayleigh(1e-3);
  QuadOptions o;
  o.rel_tol = 1e-12;
  CHECK(integrate_inf([&](double r) { return serving_distance_pdf(net, 0, r); }, 0.0, o) == Approx(1.0).epsilon(1e-9));
  for (double r : {1.0, 10.0, 30.0})
    CHECK(serving_distance_pdf(net, 0, r) == Approx(2 * M_PI * 1e-3 * r * std::exp(-M_PI * 1e-3 * r * r)));
  auto s6 = fixture::section6();
  const double m = integrate_inf([&](double r) { return r * serving_distance_pdf(s6, 1, r); }, 0.0, o);
  CHECK(serving_distance_mean(s6, 1) == Approx(m).epsilon(1e-9));
}

TEST_CASE("W kernel") {
  const auto ray = KappaMuShadowedParams::make(kKappaZero, 1, 1, 1);
  CHECK(interference_w(ray, 0.0, 0.5) == 0.0);
  CHECK(std::abs(interference_w(ray, 1.0, 0.5) - M_PI / 4) < 1e-8);
  SpecialParams sp;
  CHECK(std::abs(interference_w_special(SpecialRow::Rayleigh, 1.0, 0.5, sp) - M_PI / 4) < 1e-14);

  for (auto p : {KappaMuShadowedParams::make(2.0, 1.5, 0.7, 1.0), KappaMuShadowedParams::make(6.0, 3.0, 10.0, 1.0),
                 KappaMuShadowedParams::make(0.5, 0.5, 0.5, 1.0)}) {
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double z = std::pow(10.0, -3.0 + 6.0 * i / 100.0);
      const double w = interference_w(p, z, 0.5);
      CHECK(w >= prev);
      prev = w;
    }
  }
  // Appell cross-check where the double series converges
  const auto p = KappaMuShadowedParams::make(1.0, 1.5, 2.0, 1.0);
  for (double z : {0.1, 0.5, 1.0}) {
    const auto [A, B] = appell_arguments(p, z);
    REQUIRE(std::abs(A) + std::abs(B) <= 0.95);
    const auto a = interference_w_checked(p, z, 0.5, WMethod::Appell);
    CHECK(rel(interference_w(p, z, 0.5), a.value) < 1e-9);
  }
  const auto chk = interference_w_checked(p, 1.0, 0.5);
  CHECK_FALSE(chk.warning);
}

TEST_CASE("W jets agree with finite differences") {
  const auto p = KappaMuShadowedParams::make(2.0, 2.0, 1.0, 1.0);
  const Jet j = interference_w(p, Jet::variable(2, 1.3), 0.5);
  const double h = 1e-4;
  const double d1 = (interference_w(p, 1.3 + h, 0.5) - interference_w(p, 1.3 - h, 0.5)) / (2 * h);
  CHECK(j[0] == Approx(interference_w(p, 1.3, 0.5)).epsilon(1e-13));
  CHECK(j[1] == Approx(d1).epsilon(1e-7));
}

TEST_CASE("special forms") {
  SpecialParams sp;
  sp.mean_power = 1.3;
  for (double z : {0.1, 1.0, 10.0})
    for (double d : {0.4, 0.5}) {
      sp.m = 1.0;
      CHECK(rel(interference_w_special(SpecialRow::NakagamiM, z, d, sp),
                interference_w_special(SpecialRow::Rayleigh, z, d, sp)) < 1e-12);
      sp.m = 0.5;
      CHECK(rel(interference_w_special(SpecialRow::OneSidedGaussian, z, d, sp),
                interference_w_special(SpecialRow::NakagamiM, z, d, sp)) < 1e-12);
      sp.kappa = 2.0;
      sp.mu = 1.0;
      sp.K = 2.0;
      CHECK(rel(interference_w_special(SpecialRow::Rician, z, d, sp),
                interference_w_special(SpecialRow::KappaMu, z, d, sp)) < 1e-12);
      sp.m = 2.5;
      const auto nak = KappaMuShadowedParams::make(kKappaZero, 2.5, 2.5, 1.3);
      CHECK(rel(interference_w(nak, z, d), interference_w_special(SpecialRow::NakagamiM, z, d, sp)) < 1e-5);
    }
}

TEST_CASE("interference laplace") {
  auto net = fixture::rayleigh(1e-3);
  CHECK(interference_laplace(net, 0, 5.0, 0.0) == 1.0);
  const double r = 7.0, r4 = std::pow(r, 4);
  SpecialParams sp;
  for (double s : {r4, 10 * r4}) {
    const double w = interference_w_special(SpecialRow::Rayleigh, s / r4, 0.5, sp);
    CHECK(interference_laplace(net, 0, r, s) == Approx(std::exp(-M_PI * r * r * 1e-3 * w)).epsilon(1e-10));
  }
  auto s6 = fixture::section6(2.0, 1.5, 0.7);
  double prev = 1.0, pprev = 1.0;
  for (int i = 1; i <= 40; ++i) {
    const double s = 1e6 * i;
    const double v = interference_laplace(s6, 0, 100.0, s);
    CHECK(v > 0.0);
    CHECK(v <= prev);
    if (i >= 2) CHECK(std::log(v) - 2 * std::log(prev) + std::log(pprev) >= -1e-12);
    pprev = prev;
    prev = v;
  }
}

TEST_CASE("stable law") {
  auto net = fixture::section6();
  const auto sp = stable_params(net, 0, INFINITY);
  CHECK(sp.stability == 0.5);
  CHECK(sp.skew == 1.0);
  CHECK(sp.drift == 0.0);
  auto net10 = net;
  for (auto& t : net10.tiers) t.density *= 10;
  CHECK(stable_params(net10, 0, INFINITY).dispersion == Approx(10 * sp.dispersion).epsilon(1e-12));
  // the no-exclusion Laplace transform is exp(-dispersion cos(pi delta / 2) s^delta)
  auto ray = fixture::rayleigh(1e-3);
  const auto rp = stable_params(ray, 0, INFINITY);
  for (double s : {1e4, 1e6}) {
    const double ref = std::exp(-rp.dispersion * std::cos(M_PI / 4) * std::sqrt(s));
    CHECK(interference_laplace(ray, 0, 1e-3, s) == Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("interference moments") {
  auto net = fixture::rayleigh(1e-3);
  CHECK(interference_moment(net, 0, 0.5).divergent);
  CHECK(interference_moment(net, 0, 0.7).divergent);
  CHECK(interference_moment(net, 0, 1e-9).value == Approx(1.0).epsilon(1e-6));
  CHECK(std::isfinite(interference_moment(net, 0, 0.4).value));
  CHECK(std::isfinite(interference_moment_printed(net, 0, 0.4, INFINITY).value));
}

TEST_CASE("configuration validation") {
  auto net = fixture::rayleigh();
  net.alpha = 2.0;
  CHECK_THROWS_AS(net.validate(), kms::domain_error);
  net.allow_alpha_2 = true;
  CHECK_NOTHROW(net.validate());
  net.alpha = 1.5;
  CHECK_THROWS_AS(net.validate(), kms::domain_error);
  net = fixture::rayleigh();
  net.tiers[0].density = -1;
  CHECK_THROWS_AS(net.validate(), kms::domain_error);
}
