#include "kms/kernel.hpp"

#include <cmath>

#include "kms/quadrature.hpp"
#include "kms/specfun.hpp"

namespace kms {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool same_fading(const KappaMuShadowedParams& a, const KappaMuShadowedParams& b) {
  return a.kappa == b.kappa && a.mu == b.mu && a.m == b.m && a.mean_power == b.mean_power;
}

double vec_value(double, const std::vector<double>& v) { return v[0]; }
Jet vec_value(const Jet& like, const std::vector<double>& v) {
  Jet r(like.order(), 0.0);
  r.c = v;
  return r;
}
int dim_of(double) { return 1; }
int dim_of(const Jet& j) { return j.order() + 1; }
void put(double v, double* out) { out[0] = v; }
void put(const Jet& v, double* out) {
  for (size_t i = 0; i < v.c.size(); ++i) out[i] = v.c[i];
}

}  // namespace

std::string kernel_branch_name(KernelBranch b) {
  switch (b) {
    case KernelBranch::Alpha2:
      return "alpha2";
    case KernelBranch::Alpha4:
      return "alpha4";
    case KernelBranch::InterferenceLimited:
      return "interference_limited";
    case KernelBranch::NoiseLimited:
      return "noise_limited";
    case KernelBranch::NumericGeneral:
      return "numeric_general";
  }
  return "numeric_general";
}

RadialKernel::RadialKernel(const NetworkConfig& net, int k, const NumericSettings& ns, KernelMethod method)
    : alpha_(net.alpha), delta_(net.delta()), method_(method), ns_(ns) {
  net.validate();
  const double l0 = lambda0(net, k);
  const double pk = net.tiers.at(k).power;
  for (size_t j = 0; j < net.tiers.size(); ++j) {
    const double w = equivalent_density(net, static_cast<int>(j)) * std::pow(net.tiers[j].power / pk, delta_) / l0;
    bool merged = false;
    for (auto& g : groups_)
      if (same_fading(g.fading, net.tiers[j].fading)) {
        g.weight += w;
        merged = true;
      }
    if (!merged) groups_.push_back({net.tiers[j].fading, w});
  }
  noise_limited_ = net.regime == Regime::NoiseLimited;
  bcoef_ = noise_hat(net, k) / std::pow(kPi * l0, alpha_ / 2.0);
  if (noise_limited_ && bcoef_ == 0.0) throw domain_error("regime: noise-limited evaluation needs noise_psd > 0");
  if (alpha_ == 2.0) {
    if (!noise_limited_) throw domain_error("alpha: alpha = 2 is only supported in the noise-limited regime");
    branch_ = KernelBranch::Alpha2;
  } else if (bcoef_ == 0.0) {
    branch_ = KernelBranch::InterferenceLimited;
  } else if (method_ == KernelMethod::Numeric) {
    branch_ = KernelBranch::NumericGeneral;
  } else if (alpha_ == 4.0) {
    branch_ = noise_limited_ ? KernelBranch::NoiseLimited : KernelBranch::Alpha4;
  } else {
    branch_ = noise_limited_ ? KernelBranch::NoiseLimited : KernelBranch::NumericGeneral;
  }
}

template <class T>
T RadialKernel::eval(const T& z) const {
  using std::sqrt;
  T a = z * 0.0 + 1.0;
  if (!noise_limited_)
    for (const auto& g : groups_) a += g.weight * interference_w(g.fading, z, delta_, ns_);
  if (bcoef_ == 0.0) return 1.0 / a;
  const T b = bcoef_ * z;
  if (value_of(b) == 0.0) return 1.0 / a;
  if (alpha_ == 2.0) return 1.0 / (a + b);
  if (alpha_ == 4.0 && method_ == KernelMethod::Auto) {
    const T sb = sqrt(b);
    return (0.5 * std::sqrt(kPi)) * erfcx(a / (2.0 * sb)) / sb;
  }
  // int_0^inf exp(-a t - b t^{alpha/2}) dt with t = u / a0
  const double a0 = value_of(a);
  const double e = alpha_ / 2.0;
  QuadOptions o = quad_options(ns_);
  o.rel_tol = std::min(ns_.quad_rel_tol, 1e-12);
  o.abs_tol = 1e-300;
  const int dim = dim_of(z);
  auto r = integrate_gk_inf(
      [&](double u, double* out) {
        const double t = u / a0;
        using std::exp;
        put(exp(-(a * t) - b * std::pow(t, e)), out);
      },
      dim, 0.0, o);
  if (!r.converged) throw convergence_error("radial kernel: quadrature did not converge");
  return vec_value(z, r.value) / a0;
}

double RadialKernel::operator()(double z) const {
  if (!(z >= 0.0)) throw domain_error("radial_kernel: z must be >= 0");
  if (z == 0.0) return 1.0;
  if (std::isinf(z)) return 0.0;
  return eval(z);
}

Jet RadialKernel::operator()(const Jet& z) const {
  if (!(z.value() > 0.0)) throw domain_error("radial_kernel: jets need z > 0");
  return eval(z);
}

double radial_kernel(const NetworkConfig& net, int k, double z, const NumericSettings& ns, KernelMethod method) {
  return RadialKernel(net, k, ns, method)(z);
}

}  // namespace kms
