#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kms/fading.hpp"
#include "kms/quadrature.hpp"
#include "kms/specfun.hpp"
#include "oracles.hpp"

using namespace kms;
using doctest::Approx;

namespace {
QuadOptions tight() {
  QuadOptions o;
  o.rel_tol = 1e-12;
  o.abs_tol = 1e-16;
  o.max_intervals = 20000;
  return o;
}
double integral_pdf(const KappaMuShadowedParams& p, double j) {
  // split at the mean so both halves are smooth
  auto f = [&](double x) { return x > 0 ? std::pow(x, j) * pdf_exact(p, x) : 0.0; };
  return integrate(f, 0.0, 1.0, tight()) + integrate_inf(f, 1.0, tight());
}
}  // namespace

TEST_CASE("derived thetas") {
  const auto p = KappaMuShadowedParams::make(2.0, 1.5, 0.7, 3.0);
  CHECK(p.theta1 == Approx(3.0 / (1.5 * 3.0)).epsilon(1e-15));
  CHECK(p.theta2 == Approx((1.5 * 2 + 0.7) * 3.0 / (1.5 * 3.0 * 0.7)).epsilon(1e-15));
  CHECK(p.theta2 >= p.theta1);
  const auto q = KappaMuShadowedParams::make(0.0, 1.5, 0.7, 3.0);
  CHECK(q.theta2 == q.theta1);
  CHECK_THROWS_AS(KappaMuShadowedParams::make(-1.0, 1, 1, 1), kms::domain_error);
  CHECK_THROWS_AS(KappaMuShadowedParams::make(1.0, 0, 1, 1), kms::domain_error);
}

TEST_CASE("pdf_exact") {
  const auto ray = KappaMuShadowedParams::make(1e-12, 1, 1, 1);
  for (double x : {0.1, 1.0, 5.0}) CHECK(pdf_exact(ray, x) == Approx(std::exp(-x)).epsilon(1e-9));
  for (double k : {0.5, 2.0, 6.0})
    for (double mu : {0.5, 1.0, 3.0})
      for (double m : {0.5, 1.0, 10.0}) {
        const auto p = KappaMuShadowedParams::make(k, mu, m, 1.0);
        CHECK(integral_pdf(p, 0.0) == Approx(1.0).epsilon(1e-8));
      }
}

TEST_CASE("pdf_exact against a sampler histogram") {
  const auto p = KappaMuShadowedParams::make(2.0, 1.5, 2.0, 1.0);
  Rng rng(11);
  const int n = 2000000;
  const double lo = 0.95, hi = 1.05;
  int in = 0;
  for (int i = 0; i < n; ++i) {
    const double h = sample(p, rng);
    in += (h >= lo && h < hi);
  }
  const double expected = n * integrate([&](double x) { return pdf_exact(p, x); }, lo, hi, tight());
  CHECK(std::abs(in - expected) < 3.0 * std::sqrt(expected));
}

TEST_CASE("moments and laplace") {
  const auto p = KappaMuShadowedParams::make(2.0, 1.5, 2.0, 1.7);
  CHECK(moment(p, 1.0) == Approx(1.7).epsilon(1e-12));
  CHECK(moment(p, 1e-12) == Approx(1.0).epsilon(1e-9));
  const auto q = KappaMuShadowedParams::make(2.0, 1.5, 2.0, 1.0);
  CHECK(moment(q, 2.0) == Approx(integral_pdf(q, 2.0)).epsilon(1e-6));
  CHECK(laplace(p, 0.0) == 1.0);
  const double h = 1e-5;
  CHECK((-3 * laplace(p, 0.0) + 4 * laplace(p, h) - laplace(p, 2 * h)) / (2 * h) == Approx(-1.7).epsilon(1e-6));

  const auto r = KappaMuShadowedParams::make(1.0, 2.0, 3.0, 1.0);
  Rng rng(5);
  const int n = 1000000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(-2.0 * sample(r, rng));
    s1 += v;
    s2 += v * v;
  }
  const double mean = s1 / n, sd = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - laplace(r, 2.0)) < 3 * sd);
}

TEST_CASE("m to infinity limit") {
  const double k = 1.5, mu = 2.0;
  const auto p = KappaMuShadowedParams::make(k, mu, 1e7, 1.0);
  for (double s : {0.1, 1.0, 10.0}) {
    const double t1 = p.theta1;
    const double ref = std::exp(-mu * k * t1 * s / (1 + t1 * s)) / std::pow(1 + t1 * s, mu);
    CHECK(laplace(p, s) == Approx(ref).epsilon(1e-5));
  }
}

TEST_CASE("laguerre coefficients") {
  const auto ex = KappaMuShadowedParams::make(1e-12, 1, 1, 1);
  const auto c = laguerre_coeffs(ex, 20, 1e-12);
  CHECK(c.C[0] == 1.0);
  for (size_t n = 1; n < c.C.size(); ++n) CHECK(std::abs(c.C[n]) < 1e-8);
  CHECK(c.converged);

  const auto p = KappaMuShadowedParams::make(2.0, 1.7, 0.8, 1.7);
  const auto d = laguerre_coeffs(p, 10, 1e-12);
  CHECK(std::abs(d.C[1]) < 1e-10);
  const auto sum = laguerre_coeffs_moment_sum(p, 6);
  for (int n = 0; n <= 6; ++n) CHECK(d.C[n] == Approx(sum[n]).epsilon(1e-9).scale(1.0));

  for (int n = 1; n <= 5; ++n)
    for (int i = 0; i <= n; ++i) {
      const double sign = (i % 2) ? -1.0 : 1.0;
      CHECK(d.c[n][i] == Approx(sign * d.C[n] * real_binomial(n, i) / std::tgamma(p.mu + i)).scale(1.0));
      CHECK(d.b[n][i] == Approx(sign * d.C[n + 1] * real_binomial(n, i) / std::tgamma(p.mu + i + 1)).scale(1.0));
    }

  const auto q = KappaMuShadowedParams::make(2.0, 1.0, 1.0, 1.0);
  const auto e = laguerre_coeffs(q, 50, 1e-10);
  double sup = 0.0;
  for (double x = 0.01; x <= 10.0; x += 0.01) sup = std::max(sup, std::abs(pdf_series(e, q, x) - pdf_exact(q, x)));
  CHECK(sup <= 1e-4);
}

TEST_CASE("non-convergence is reported") {
  const auto p = KappaMuShadowedParams::make(6.0, 3.0, 0.5, 1.0);
  const auto c = laguerre_coeffs(p, 10, 1e-12, ScaleMode::Auto);
  CHECK_FALSE(c.converged);
  CHECK(c.tail_estimate > 1e-12);
}

TEST_CASE("series pdf and cdf") {
  struct P {
    double k, mu, m;
  };
  // the four sets shown in the fading-law figure
  for (auto s : {P{1, 1, 1}, P{2, 1.5, 2}, P{0.5, 2, 3}, P{3, 2, 5}}) {
    const auto p = KappaMuShadowedParams::make(s.k, s.mu, s.m, 1.0);
    const auto c = laguerre_coeffs(p, 50, 1e-10, ScaleMode::Auto);
    double sup = 0.0;
    for (double x = 0.01; x <= 10.0; x += 0.01) sup = std::max(sup, std::abs(pdf_series(c, p, x) - pdf_exact(p, x)));
    CHECK(sup <= 1e-3);
    CHECK(cdf_series(c, p, 0.0) == 0.0);
    CHECK(cdf_series(c, p, 200.0) == Approx(1.0).epsilon(1e-6));
  }
  const auto p = KappaMuShadowedParams::make(1.0, 2.0, 0.5, 1.0);
  const auto c = laguerre_coeffs(p, 120, 1e-12, ScaleMode::Auto);
  for (double x : {0.5, 1.0, 2.0}) {
    const double ref = integrate([&](double t) { return pdf_exact(p, t); }, 0.0, x, tight());
    CHECK(std::abs(cdf_series(c, p, x) - ref) <= 1e-6);
  }
  const auto chk = pdf_series_checked(c, p, 1.0);
  CHECK(chk.usable);
  CHECK(chk.max_usable_x > 0.0);
}

TEST_CASE("gamma mixtures") {
  const auto ray = KappaMuShadowedParams::make(1e-12, 1, 1, 1.3);
  const auto g = gamma_mixture(ray);
  REQUIRE(g.components.size() == 1);
  CHECK(g.components[0].weight == Approx(1.0));
  CHECK(g.components[0].shape == 1.0);
  CHECK(g.components[0].scale == Approx(1.3));

  const auto p = KappaMuShadowedParams::make(1.0, 2.0, 1.0, 1.0);
  const auto gm = gamma_mixture(p);
  for (double s : {0.1, 1.0, 10.0}) CHECK(std::abs(gm.laplace(s) - laplace(p, s)) < 1e-10);

  const auto q = KappaMuShadowedParams::make(3.0, 3.0, 2.0, 1.0);
  const auto gq = gamma_mixture(q);
  double wsum = 0.0;
  for (auto& c : gq.components) wsum += c.weight;
  CHECK(wsum == Approx(1.0).epsilon(1e-10));
  double sup = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double x = 0.1 * i;
    sup = std::max(sup, std::abs(gq.pdf(x) - pdf_exact(q, x)));
  }
  CHECK(sup <= 1e-9);
  CHECK_THROWS_AS(gamma_mixture(KappaMuShadowedParams::make(1.0, 1.5, 1.0, 1.0)), kms::domain_error);

  const auto nb = nb_gamma_mixture(KappaMuShadowedParams::make(2.0, 1.5, 0.7, 1.0), 1e-14);
  CHECK(nb.laplace(0.8) == Approx(laplace(KappaMuShadowedParams::make(2.0, 1.5, 0.7, 1.0), 0.8)).epsilon(1e-12));
}

TEST_CASE("named models") {
  const auto r = from_named_model(NamedModel::Rayleigh, {});
  CHECK(r.kappa == kKappaZero);
  CHECK(r.mu == 1.0);
  CHECK(r.m == 1.0);
  CHECK_FALSE(r.provenance.empty());
  NamedModelParams v;
  v.q = 0.5;
  const auto h = from_named_model(NamedModel::Hoyt, v);
  CHECK(h.kappa == Approx((1 - 0.25) / 0.5));
  CHECK(h.mu == 1.0);
  CHECK(h.m == 0.5);
  v.eta = 0.4;
  v.mu = 1.3;
  const auto e = from_named_model(NamedModel::EtaMu, v);
  CHECK(e.kappa == Approx(0.6 / 0.8));
  CHECK(e.mu == Approx(2.6));
  CHECK(e.m == Approx(1.3));
  v.q = 1.5;
  CHECK_THROWS_AS(from_named_model(NamedModel::Hoyt, v), kms::domain_error);

  auto grid = oracle::linear_grid(0.01, 10.0, 400);
  v = {};
  v.K = 3.0;
  const auto rice = from_named_model(NamedModel::Rice, v);
  CHECK(oracle::sup_error([&](double x) { return pdf_exact(rice, x); }, [&](double x) { return oracle::rice(x, 3.0, 1.0); },
                          grid) < 1e-6);
  v = {};
  v.m = 2.5;
  const auto nak = from_named_model(NamedModel::NakagamiM, v);
  CHECK(oracle::sup_error([&](double x) { return pdf_exact(nak, x); },
                          [&](double x) { return oracle::gamma_pdf(x, 2.5, 1 / 2.5); }, grid) < 1e-6);
}

TEST_CASE("sampler") {
  Rng rng(3);
  const auto p0 = KappaMuShadowedParams::make(1e-12, 2.5, 1.0, 1.4);
  const int n = 1000000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = sample(p0, rng);
    s1 += v;
    s2 += v * v;
  }
  double mean = s1 / n, sd = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.4) < 3 * sd);

  const auto p = KappaMuShadowedParams::make(2.0, 1.5, 0.7, 1.0);
  s1 = s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(-sample(p, rng));
    s1 += v;
    s2 += v * v;
  }
  mean = s1 / n;
  sd = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - laplace(p, 1.0)) < 3 * sd);

  const auto q = KappaMuShadowedParams::make(1.0, 2.0, 3.0, 1.0);
  const auto c = laguerre_coeffs(q, 120, 1e-12, ScaleMode::Auto);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = sample(q, rng);
  const double D = oracle::ks_statistic(xs, [&](double x) { return cdf_series(c, q, x); });
  CHECK(D < 1.63 / std::sqrt(100000.0));

  // small mu takes the Poisson route
  const auto s = KappaMuShadowedParams::make(2.0, 0.3, 1.5, 1.0);
  s1 = 0;
  for (int i = 0; i < n; ++i) s1 += sample(s, rng);
  CHECK(s1 / n == Approx(1.0).epsilon(0.01));
}
