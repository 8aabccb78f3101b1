#include "kms/specfun.hpp"

#include <quadmath.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <type_traits>
#include <vector>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace kms {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTiny = 1e-300;

bool is_nonpos_int(double v) { return v <= 0.0 && v == std::round(v); }

std::string num(double v) { return std::to_string(v); }

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive, got " + num(x));
  if (x < 20.0) return std::log(std::tgamma(x));
  // Stirling series
  const double z = 1.0 / (x * x);
  double s = 1.0 / 12.0 - z * (1.0 / 360.0 - z * (1.0 / 1260.0 - z * (1.0 / 1680.0 - z * (1.0 / 1188.0))));
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * kPi) + s / x;
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw domain_error("gamma_fn: argument must be positive, got " + num(x));
  if (x < 171.0) return std::tgamma(x);
  return std::exp(log_gamma(x));
}

double real_binomial(double x, double y) {
  if (!(x + 1.0 > 0.0) || !(y + 1.0 > 0.0) || !(x - y + 1.0 > 0.0))
    throw domain_error("real_binomial: gamma argument outside (0, inf) for (" + num(x) + ", " +
                       num(y) + ")");
  if (x == std::round(x) && y == std::round(y) && x <= 60.0) {
    double r = 1.0;
    const int k = static_cast<int>(y);
    for (int i = 1; i <= k; ++i) r = r * (x - k + i) / i;
    return r;
  }
  return std::exp(log_gamma(x + 1.0) - log_gamma(y + 1.0) - log_gamma(x - y + 1.0));
}

double pochhammer(double a, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= a + i;
  return r;
}

double lower_incomplete_gamma_reg(double s, double x, const NumericSettings& ns) {
  if (!(s > 0.0)) throw domain_error("lower_incomplete_gamma_reg: s must be positive");
  if (x < 0.0) throw domain_error("lower_incomplete_gamma_reg: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) {
    double term = 1.0 / s, sum = term;
    for (int n = 1; n < ns.series_max_terms; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * ns.series_tol)
        return sum * std::exp(s * std::log(x) - x - log_gamma(s));
    }
    throw convergence_error("lower_incomplete_gamma_reg: series did not converge");
  }
  return 1.0 - upper_incomplete_gamma_reg(s, x, ns);
}

double upper_incomplete_gamma_reg(double s, double x, const NumericSettings& ns) {
  if (!(s > 0.0)) throw domain_error("upper_incomplete_gamma_reg: s must be positive");
  if (x < 0.0) throw domain_error("upper_incomplete_gamma_reg: x must be nonnegative");
  if (x < s + 1.0) return 1.0 - lower_incomplete_gamma_reg(s, x, ns);
  // modified Lentz
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < ns.series_max_terms; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return std::exp(-x + s * std::log(x) - log_gamma(s)) * h;
  }
  throw convergence_error("upper_incomplete_gamma_reg: continued fraction did not converge");
}

double lower_incomplete_gamma(double s, double x, const NumericSettings& ns) {
  return lower_incomplete_gamma_reg(s, x, ns) * gamma_fn(s);
}

double kummer_1f1_scaled(double a, double b, double x, const NumericSettings& ns) {
  if (!(b > 0.0)) throw domain_error("kummer_1f1: b must be positive, got " + num(b));
  if (x < 0.0) throw domain_error("kummer_1f1_scaled: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x > 50.0 && !is_nonpos_int(a) && (b - 2.0 * a) * std::log(x) - x < -40.0) {
    double t = 1.0, s = 1.0;
    bool ok = false;
    for (int k = 0; k < 200; ++k) {
      const double ratio = (b - a + k) * (1.0 - a + k) / ((k + 1.0) * x);
      if (std::abs(ratio) >= 1.0) break;
      t *= ratio;
      s += t;
      if (std::abs(t) <= ns.series_tol * std::abs(s)) {
        ok = true;
        break;
      }
    }
    if (ok) {
      const double pre = a > 0.0 ? std::exp(log_gamma(b) - log_gamma(a) + (a - b) * std::log(x))
                                 : std::exp(log_gamma(b) + (a - b) * std::log(x)) / std::tgamma(a);
      return pre * s;
    }
  }
  double t = 1.0, s = 1.0, logscale = 0.0;
  for (int k = 0; k < ns.series_max_terms; ++k) {
    const double ratio = (a + k) * x / ((b + k) * (k + 1.0));
    t *= ratio;
    s += t;
    if (t == 0.0) return s * std::exp(logscale - x);
    if (std::abs(s) > 1e280) {
      s *= 1e-280;
      t *= 1e-280;
      logscale += 280.0 * std::log(10.0);
    }
    if (std::abs(ratio) < 1.0 && std::abs(t) <= ns.series_tol * std::abs(s) &&
        std::abs(t) * std::abs(ratio) / (1.0 - std::abs(ratio)) <= ns.series_tol * std::abs(s))
      return s * std::exp(logscale - x);
  }
  throw convergence_error("kummer_1f1: series did not reach tolerance in " +
                          std::to_string(ns.series_max_terms) + " terms");
}

double kummer_1f1(double a, double b, double x, const NumericSettings& ns) {
  if (!(b > 0.0)) throw domain_error("kummer_1f1: b must be positive, got " + num(b));
  if (x == 0.0) return 1.0;
  if (x < 0.0) return kummer_1f1_scaled(b - a, b, -x, ns);
  if (x < 600.0) return kummer_1f1_scaled(a, b, x, ns) * std::exp(x);
  const double v = kummer_1f1_scaled(a, b, x, ns);
  return v == 0.0 ? 0.0 : std::exp(std::log(std::abs(v)) + x) * (v < 0 ? -1.0 : 1.0);
}

namespace {

// arithmetic shared by the double and quad-precision evaluations
struct Real {
  static double exp(double x) { return std::exp(x); }
  static double log(double x) { return std::log(x); }
  static double log1p(double x) { return std::log1p(x); }
  static double tgamma(double x) { return std::tgamma(x); }
  static __float128 exp(__float128 x) { return expq(x); }
  static __float128 log(__float128 x) { return logq(x); }
  static __float128 log1p(__float128 x) { return log1pq(x); }
  static __float128 tgamma(__float128 x) { return tgammaq(x); }
};

template <class T>
T fabs_t(T x) {
  return x < 0 ? -x : x;
}

template <class T>
double series_tol_for(double tol) {
  return std::is_same_v<T, double> ? tol : std::min(tol, 1e-30);
}

template <class T>
struct Candidate {
  T value = 0;
  double cond = std::numeric_limits<double>::infinity();  // sum |terms| / |sum|
};

template <class T>
Candidate<T> series_2f1(T a, T b, T c, T z, const NumericSettings& ns) {
  const double tol = series_tol_for<T>(ns.series_tol);
  T t = 1, s = 1, sabs = 1;
  for (int k = 0; k < ns.series_max_terms; ++k) {
    const T ratio = (a + k) * (b + k) * z / ((c + k) * (k + T(1)));
    t *= ratio;
    s += t;
    sabs += fabs_t(t);
    // term ratios tend to |z|, possibly from below
    const double r = std::max(static_cast<double>(fabs_t(ratio)), static_cast<double>(fabs_t(z)));
    if (t == 0 || (r < 1.0 && static_cast<double>(fabs_t(t)) * r / (1.0 - r) <= tol * static_cast<double>(fabs_t(s))))
      return {s, s != 0 ? static_cast<double>(sabs / fabs_t(s)) : std::numeric_limits<double>::infinity()};
  }
  throw convergence_error("gauss_2f1: series did not reach tolerance in " +
                          std::to_string(ns.series_max_terms) + " terms");
}

template <class T>
T rgamma(T x) {
  return is_nonpos_int(static_cast<double>(x)) && x == static_cast<double>(x) ? T(0) : T(1) / Real::tgamma(x);
}

template <class T, class F>
void consider(Candidate<T>& best, F&& f) {
  try {
    const Candidate<T> c = f();
    if (std::isfinite(static_cast<double>(c.value)) && c.cond < best.cond) best = c;
  } catch (const convergence_error&) {
  }
}

// two-term connection formula: g1 F(p1) + g2 pre2 F(p2)
template <class T>
Candidate<T> two_terms(T g1, T pre1, const std::array<T, 4>& s1, T g2, T pre2, const std::array<T, 4>& s2,
                       const NumericSettings& ns) {
  T s = 0, sabs = 0;
  if (g1 != 0) {
    const auto r = series_2f1(s1[0], s1[1], s1[2], s1[3], ns);
    const T t = g1 * pre1 * r.value;
    s += t;
    sabs += fabs_t(t) * r.cond;
  }
  if (g2 != 0) {
    const auto r = series_2f1(s2[0], s2[1], s2[2], s2[3], ns);
    const T t = g2 * pre2 * r.value;
    s += t;
    sabs += fabs_t(t) * r.cond;
  }
  if (!std::isfinite(static_cast<double>(s)) || !std::isfinite(static_cast<double>(sabs)) || s == 0) return {};
  return {s, static_cast<double>(sabs / fabs_t(s))};
}

// connection formula in 1/(1-z), a-b not an integer
template <class T>
Candidate<T> inverse_2f1(T a, T b, T c, T z, const NumericSettings& ns) {
  const T u = 1 / (1 - z), l1mz = Real::log1p(-z);
  const T g1 = Real::tgamma(c) * Real::tgamma(b - a) * rgamma(b) * rgamma(c - a);
  const T g2 = Real::tgamma(c) * Real::tgamma(a - b) * rgamma(a) * rgamma(c - b);
  return two_terms<T>(g1, Real::exp(-a * l1mz), {a, c - b, a - b + 1, u}, g2, Real::exp(-b * l1mz),
                      {b, c - a, b - a + 1, u}, ns);
}

// connection formula in 1 - x, c-a-b not an integer
template <class T>
Candidate<T> complement_2f1(T a, T b, T c, T x, const NumericSettings& ns) {
  const T y = 1 - x, d = c - a - b;
  const T g1 = Real::tgamma(c) * Real::tgamma(d) * rgamma(c - a) * rgamma(c - b);
  const T g2 = Real::tgamma(c) * Real::tgamma(-d) * rgamma(a) * rgamma(b);
  return two_terms<T>(g1, T(1), {a, b, 1 - d, y}, g2, Real::exp(d * Real::log(y)), {c - a, c - b, 1 + d, y}, ns);
}

template <class T>
Candidate<T> euler_2f1(T a, T b, T c, T z, const NumericSettings& ns) {
  auto r = series_2f1(c - a, c - b, c, z, ns);
  r.value *= Real::exp((c - a - b) * Real::log1p(-z));
  return r;
}

// 0 < x < 1: direct series, Euler transformation, or the 1 - x connection formula
template <class T>
Candidate<T> positive_2f1(T a, T b, T c, T x, const NumericSettings& ns) {
  Candidate<T> best;
  consider(best, [&] { return series_2f1(a, b, c, x, ns); });
  if (best.cond > 1e3) consider(best, [&] { return euler_2f1(a, b, c, x, ns); });
  const double d = static_cast<double>(c - a - b);
  if (best.cond > 1e3 && x > T(0.25) && std::abs(d - std::round(d)) > 1e-3)
    consider(best, [&] { return complement_2f1(a, b, c, x, ns); });
  return best;
}

// z < 0: direct and Euler forms inside the unit disc, both Pfaff forms, and the 1/(1-z) connection formula
template <class T>
Candidate<T> negative_2f1(T a, T b, T c, T z, const NumericSettings& ns) {
  Candidate<T> best;
  const T w = z / (z - 1), l1mz = Real::log1p(-z);
  if (z > -1) {
    consider(best, [&] { return series_2f1(a, b, c, z, ns); });
    if (best.cond > 1e3) consider(best, [&] { return euler_2f1(a, b, c, z, ns); });
  }
  if (best.cond > 1e3)
    consider(best, [&] {
      auto r = positive_2f1(a, c - b, c, w, ns);
      r.value *= Real::exp(-a * l1mz);
      return r;
    });
  if (best.cond > 1e3)
    consider(best, [&] {
      auto r = positive_2f1(c - a, b, c, w, ns);
      r.value *= Real::exp(-b * l1mz);
      return r;
    });
  const auto nonpos = [](T v) { return is_nonpos_int(static_cast<double>(v)); };
  const bool terminates = nonpos(a) || nonpos(b) || nonpos(c - a) || nonpos(c - b);
  const double amb = static_cast<double>(a - b);
  if (z < -1 && !terminates && best.cond > 1e3) {
    if (std::abs(amb - std::round(amb)) > 1e-3) {
      consider(best, [&] { return inverse_2f1(a, b, c, z, ns); });
    } else if (!std::isfinite(best.cond)) {
      // integer a-b: average of perturbed parameters
      const T e = std::is_same_v<T, double> ? 1e-5 : 1e-12;
      consider(best, [&] {
        const auto p = inverse_2f1(a, b + e, c, z, ns), q = inverse_2f1(a, b - e, c, z, ns);
        return Candidate<T>{(p.value + q.value) / 2, std::max({p.cond, q.cond, 1e6})};
      });
    }
  }
  return best;
}

template <class T>
Candidate<T> best_2f1(double a, double b, double c, double z, const NumericSettings& ns) {
  return z > 0.0 ? positive_2f1<T>(a, b, c, z, ns) : negative_2f1<T>(a, b, c, z, ns);
}

template <class T>
Candidate<T> appell_sum(T alpha, T beta, T beta2, T gamma1, T gamma2, T x, T y, const NumericSettings& ns) {
  const double tol = std::is_same_v<T, double> ? ns.appell_tol : std::min(ns.appell_tol, 1e-28);
  std::vector<T> prev{T(1)}, cur;
  T sum = 1, total_abs = 1;
  int small = 0;
  for (int s = 1; s <= ns.appell_max_blocks; ++s) {
    cur.assign(s + 1, T(0));
    const T ga = alpha + s - 1;
    for (int m = 0; m < s; ++m) {
      const int n = s - m;
      cur[m] = prev[m] * ga * (beta2 + n - 1) * y / ((gamma2 + n - 1) * n);
    }
    cur[s] = prev[s - 1] * ga * (beta + s - 1) * x / ((gamma1 + s - 1) * s);
    T d = 0, dabs = 0;
    for (const T& v : cur) {
      d += v;
      dabs += fabs_t(v);
    }
    sum += d;
    total_abs += dabs;
    // the block sums decay at least like (|x| + |y|)^s
    const double rho = static_cast<double>(fabs_t(x) + fabs_t(y));
    if (static_cast<double>(dabs) / (1.0 - std::min(rho, 0.999)) <= tol * static_cast<double>(fabs_t(sum)))
      ++small;
    else
      small = 0;
    if (small >= 3)
      return {sum, sum != 0 ? static_cast<double>(total_abs / fabs_t(sum)) : std::numeric_limits<double>::infinity()};
    prev.swap(cur);
  }
  throw convergence_error("appell_f2: no convergence after " + std::to_string(ns.appell_max_blocks) +
                          " diagonal blocks");
}

// direct series and the transformations in x, in y and in both, among those that converge
template <class T>
Candidate<T> appell_best(double alpha, double beta, double beta2, double gamma1, double gamma2, double x, double y,
                         const NumericSettings& ns) {
  Candidate<T> best;
  const T a = alpha, b = beta, b2 = beta2, g1 = gamma1, g2 = gamma2, X = x, Y = y;
  const auto inside = [](double u, double v) { return std::abs(u) + std::abs(v) < 0.99; };
  consider(best, [&] { return appell_sum<T>(a, b, b2, g1, g2, X, Y, ns); });
  if (best.cond > 1e3 && inside(x / (x - 1.0), y / (1.0 - x)))
    consider(best, [&] {
      auto r = appell_sum<T>(a, g1 - b, b2, g1, g2, X / (X - 1), Y / (1 - X), ns);
      r.value *= Real::exp(-a * Real::log1p(-X));
      return r;
    });
  if (best.cond > 1e3 && inside(x / (1.0 - y), y / (y - 1.0)))
    consider(best, [&] {
      auto r = appell_sum<T>(a, b, g2 - b2, g1, g2, X / (1 - Y), Y / (Y - 1), ns);
      r.value *= Real::exp(-a * Real::log1p(-Y));
      return r;
    });
  if (best.cond > 1e3 && inside(x / (x + y - 1.0), y / (x + y - 1.0)))
    consider(best, [&] {
      auto r = appell_sum<T>(a, g1 - b, g2 - b2, g1, g2, X / (X + Y - 1), Y / (X + Y - 1), ns);
      r.value *= Real::exp(-a * Real::log1p(-X - Y));
      return r;
    });
  return best;
}

// above this cancellation ratio the double result is recomputed in quad precision
constexpr double kRecomputeCond = 1e4;

}  // namespace

double gauss_2f1_series(double a, double b, double c, double z, const NumericSettings& ns) {
  if (!(std::abs(z) < 1.0)) throw domain_error("gauss_2f1_series: |z| must be < 1");
  return series_2f1<double>(a, b, c, z, ns).value;
}

double gauss_2f1(double a, double b, double c, double z, const NumericSettings& ns) {
  if (!(c > 0.0)) throw domain_error("gauss_2f1: c must be positive, got " + num(c));
  if (!(z < 1.0)) throw domain_error("gauss_2f1: z must be < 1, got " + num(z));
  if (z == 0.0) return 1.0;
  // the representation with the least cancellation
  const auto best = best_2f1<double>(a, b, c, z, ns);
  if (best.cond <= kRecomputeCond) return best.value;
  const auto quad = best_2f1<__float128>(a, b, c, z, ns);
  if (std::isfinite(quad.cond) && quad.cond < 1e16) return static_cast<double>(quad.value);
  if (std::isfinite(best.cond)) return best.value;
  throw convergence_error("gauss_2f1: no representation converged at z=" + num(z));
}

// sum_m (alpha)_m (beta)_m / ((gamma1)_m m!) x^m 2F1(alpha+m, beta2; gamma2; y)
Candidate<double> appell_nested(double alpha, double beta, double beta2, double gamma1, double gamma2, double x,
                                double y, const NumericSettings& ns) {
  if (x == 0.0) return {gauss_2f1(alpha, beta2, gamma2, y, ns), 1.0};
  double coef = 1.0, sum = 0.0, sabs = 0.0;
  int small = 0;
  for (int m = 0; m < ns.series_max_terms; ++m) {
    const double t = coef * gauss_2f1(alpha + m, beta2, gamma2, y, ns);
    sum += t;
    sabs += std::abs(t);
    small = std::abs(t) <= ns.series_tol * std::abs(sum) ? small + 1 : 0;
    if (small >= 3 || t == 0.0) return {sum, sum != 0.0 ? sabs / std::abs(sum) : std::numeric_limits<double>::infinity()};
    coef *= (alpha + m) * (beta + m) * x / ((gamma1 + m) * (m + 1.0));
    if (coef == 0.0) return {sum, sum != 0.0 ? sabs / std::abs(sum) : std::numeric_limits<double>::infinity()};
  }
  throw convergence_error("appell_f2: nested series did not converge");
}

double appell_f2(double alpha, double beta, double beta2, double gamma1, double gamma2, double x,
                 double y, const NumericSettings& ns) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) throw domain_error("appell_f2: gamma parameters must be positive");
  if (!(std::abs(x) + std::abs(y) < 1.0))
    throw domain_error("appell_f2: double series diverges for |x|+|y| >= 1");
  auto d = appell_best<double>(alpha, beta, beta2, gamma1, gamma2, x, y, ns);
  if (d.cond <= kRecomputeCond) return d.value;
  // single sums over one variable of Gauss functions in the other
  consider(d, [&] { return appell_nested(alpha, beta, beta2, gamma1, gamma2, x, y, ns); });
  consider(d, [&] { return appell_nested(alpha, beta2, beta, gamma2, gamma1, y, x, ns); });
  if (d.cond <= kRecomputeCond) return d.value;
  const auto q = appell_best<__float128>(alpha, beta, beta2, gamma1, gamma2, x, y, ns);
  if (std::isfinite(q.cond) && q.cond * 1e-34 < d.cond * 1e-16) return static_cast<double>(q.value);
  if (std::isfinite(d.cond)) return d.value;
  throw convergence_error("appell_f2: no representation converged");
}

double bessel_k_real_order(double nu, double x) {
  if (!(x > 0.0)) throw domain_error("bessel_k_real_order: x must be positive");
  const double v = std::cyl_bessel_k(std::abs(nu), x);
  if (!std::isfinite(v)) throw convergence_error("bessel_k_real_order: overflow");
  return v;
}

double erfcx(double x) {
  if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
  if (x < 3.0) {
    const double hi = x * x;
    const double lo = std::fma(x, x, -hi);
    return std::exp(hi) * (1.0 + lo) * std::erfc(x);
  }
  if (x > 1e8) return 1.0 / (x * std::sqrt(kPi));
  // Lentz on x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))
  double f = x, c = x, d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double an = 0.5 * n;
    d = x + an * d;
    if (d == 0.0) d = kTiny;
    c = x + an / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    f *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return 1.0 / (std::sqrt(kPi) * f);
}

namespace {

struct LagEval {
  double ln, lnm1;  // scaled L_n, L_{n-1}
  double logscale;
};

LagEval laguerre_scaled(int n, double alpha, double x) {
  double pm1 = 1.0, p = 1.0 + alpha - x, logscale = 0.0;
  if (n == 0) return {1.0, 0.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * p - (k + alpha) * pm1) / (k + 1.0);
    pm1 = p;
    p = next;
    if (std::abs(p) > 1e200) {
      p *= 1e-200;
      pm1 *= 1e-200;
      logscale += 200.0 * std::log(10.0);
    }
  }
  return {p, pm1, logscale};
}

}  // namespace

QuadratureRule gauss_laguerre(int order, double alpha) {
  if (order < 1 || order > 256) throw domain_error("gauss_laguerre: order must be in [1, 256]");
  if (!(alpha > -1.0)) throw domain_error("gauss_laguerre: alpha must exceed -1");
  const int n = order;
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + alpha + 1.0;
  for (int i = 0; i + 1 < n; ++i) sub[i] = std::sqrt((i + 1.0) * (i + 1.0 + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.order = n;
  rule.alpha = alpha;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.log_weights.resize(n);
  const double lnorm = log_gamma(n + alpha + 1.0) - log_gamma(n + 1.0) - 2.0 * std::log(n + 1.0);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()[i];
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      const LagEval e = laguerre_scaled(n, alpha, x);
      const double den = n * e.ln - (n + alpha) * e.lnm1;
      const double dx = x * e.ln / den;
      x -= dx;
      if (std::abs(dx) <= 4e-15 * x) {
        ok = true;
        break;
      }
    }
    if (!ok) throw convergence_error("gauss_laguerre: Newton polish failed at node " + std::to_string(i));
    const LagEval e = laguerre_scaled(n, alpha, x);
    const double lnp1 = ((2.0 * n + 1.0 + alpha - x) * e.ln - (n + alpha) * e.lnm1) / (n + 1.0);
    rule.nodes[i] = x;
    rule.log_weights[i] = lnorm + std::log(x) - 2.0 * (std::log(std::abs(lnp1)) + e.logscale);
    rule.weights[i] = std::exp(rule.log_weights[i]);
  }
  return rule;
}

const QuadratureRule& gauss_laguerre_cached(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end())
    it = cache.emplace(order, std::make_unique<QuadratureRule>(gauss_laguerre(order))).first;
  return *it->second;
}

}  // namespace kms
