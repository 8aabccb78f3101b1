#pragma once

#include <cmath>
#include <vector>

namespace kms {

// Truncated Taylor polynomial c[0] + c[1] t + ... + c[n] t^n.
class Jet {
 public:
  std::vector<double> c;

  Jet() : c(1, 0.0) {}
  Jet(int order, double value) : c(order + 1, 0.0) { c[0] = value; }

  static Jet variable(int order, double x0) {
    Jet j(order, x0);
    if (order >= 1) j.c[1] = 1.0;
    return j;
  }

  int order() const { return static_cast<int>(c.size()) - 1; }
  double value() const { return c[0]; }
  double operator[](int k) const { return c[k]; }

  Jet& operator+=(const Jet& o) {
    for (size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator+=(double v) {
    c[0] += v;
    return *this;
  }
  Jet& operator-=(double v) {
    c[0] -= v;
    return *this;
  }
  Jet& operator*=(double v) {
    for (auto& x : c) x *= v;
    return *this;
  }
  Jet& operator/=(double v) {
    for (auto& x : c) x /= v;
    return *this;
  }
};

inline Jet operator-(Jet a) {
  for (auto& x : a.c) x = -x;
  return a;
}
inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator+(Jet a, double b) { return a += b; }
inline Jet operator+(double b, Jet a) { return a += b; }
inline Jet operator-(Jet a, double b) { return a -= b; }
inline Jet operator-(double b, const Jet& a) { return -a + b; }
inline Jet operator*(Jet a, double b) { return a *= b; }
inline Jet operator*(double b, Jet a) { return a *= b; }
inline Jet operator/(Jet a, double b) { return a /= b; }

inline Jet operator*(const Jet& a, const Jet& b) {
  const int n = a.order();
  Jet r(n, 0.0);
  for (int k = 0; k <= n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
    r.c[k] = s;
  }
  return r;
}

inline Jet operator/(const Jet& a, const Jet& b) {
  const int n = a.order();
  Jet q(n, 0.0);
  for (int k = 0; k <= n; ++k) {
    double s = a.c[k];
    for (int j = 1; j <= k; ++j) s -= b.c[j] * q.c[k - j];
    q.c[k] = s / b.c[0];
  }
  return q;
}

inline Jet operator/(double v, const Jet& b) { return Jet(b.order(), v) / b; }

inline Jet exp(const Jet& a) {
  const int n = a.order();
  Jet e(n, std::exp(a.c[0]));
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a.c[j] * e.c[k - j];
    e.c[k] = s / k;
  }
  return e;
}

namespace detail {
// log of b where b0 is given separately so log1p keeps precision
inline Jet log_with(const Jet& a, double b0, double l0) {
  const int n = a.order();
  Jet l(n, l0);
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j < k; ++j) s += j * l.c[j] * a.c[k - j];
    l.c[k] = (a.c[k] - s / k) / b0;
  }
  return l;
}
}  // namespace detail

inline Jet log(const Jet& a) { return detail::log_with(a, a.c[0], std::log(a.c[0])); }
inline Jet log1p(const Jet& a) { return detail::log_with(a, 1.0 + a.c[0], std::log1p(a.c[0])); }

inline Jet expm1(const Jet& a) {
  Jet e = exp(a);
  e.c[0] = std::expm1(a.c[0]);
  return e;
}

inline Jet pow(const Jet& a, double p) {
  const int n = a.order();
  Jet y(n, std::pow(a.c[0], p));
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * a.c[j] * y.c[k - j];
    y.c[k] = s / (k * a.c[0]);
  }
  return y;
}

inline Jet sqrt(const Jet& a) {
  const int n = a.order();
  Jet s(n, std::sqrt(a.c[0]));
  for (int k = 1; k <= n; ++k) {
    double acc = a.c[k];
    for (int j = 1; j < k; ++j) acc -= s.c[j] * s.c[k - j];
    s.c[k] = acc / (2.0 * s.c[0]);
  }
  return s;
}

double erfcx(double x);

// erfcx along the jet from f' = 2 x f - 2/sqrt(pi)
inline Jet erfcx(const Jet& x) {
  const int n = x.order();
  const double two_over_sqrt_pi = 1.12837916709551257390;
  Jet g(n, erfcx(x.c[0]));
  std::vector<double> u(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    const int i = k - 1;
    double s = 0.0;
    for (int l = 0; l <= i; ++l) s += x.c[l] * g.c[i - l];
    u[i] = 2.0 * s - (i == 0 ? two_over_sqrt_pi : 0.0);
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * x.c[j] * u[k - j];
    g.c[k] = acc / k;
  }
  return g;
}

// scalar helpers so templates read the same for double and Jet
inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace kms
