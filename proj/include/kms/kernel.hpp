#pragma once

#include <string>
#include <vector>

#include "kms/jet.hpp"
#include "kms/network.hpp"
#include "kms/settings.hpp"

namespace kms {

enum class KernelBranch { Alpha2, Alpha4, InterferenceLimited, NoiseLimited, NumericGeneral };
enum class KernelMethod { Auto, Numeric };

std::string kernel_branch_name(KernelBranch b);

// E_r[exp(-r^alpha Nhat z) L_I(r^alpha z)] for serving tier k
class RadialKernel {
 public:
  RadialKernel(const NetworkConfig& net, int k, const NumericSettings& ns = {},
               KernelMethod method = KernelMethod::Auto);

  double operator()(double z) const;
  Jet operator()(const Jet& z) const;

  KernelBranch branch() const { return branch_; }
  double delta() const { return delta_; }

 private:
  template <class T>
  T eval(const T& z) const;

  struct Group {
    KappaMuShadowedParams fading;
    double weight;
  };
  std::vector<Group> groups_;
  double alpha_ = 4.0, delta_ = 0.5;
  double bcoef_ = 0.0;
  bool noise_limited_ = false;
  KernelBranch branch_ = KernelBranch::NumericGeneral;
  KernelMethod method_ = KernelMethod::Auto;
  NumericSettings ns_;
};

double radial_kernel(const NetworkConfig& net, int k, double z, const NumericSettings& ns = {},
                     KernelMethod method = KernelMethod::Auto);

}  // namespace kms
