#pragma once

#include "roseland/core.hpp"

#include <functional>
#include <string>

namespace roseland {

enum class KernelShape { Gaussian, Custom };

/// Radial kernel K(t), evaluated as K(|x - y| / sqrt(epsilon)).
///
/// The Gaussian is the unnormalized K(t) = exp(-t^2), so that
/// K_eps(x, y) = exp(-|x - y|^2 / eps). Normalization constants cancel in
/// every row-stochastic operator built from it.
class Kernel {
 public:
  static Kernel gaussian();
  /// `profile` must be positive at 0, non-increasing and decay faster than
  /// any polynomial.
  static Kernel custom(std::string name, std::function<double(double)> profile);

  [[nodiscard]] KernelShape shape() const { return shape_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] double profile(double t) const;
  /// K(sqrt(sq_dist / epsilon)).
  [[nodiscard]] double operator()(double sq_dist, double epsilon) const;

 private:
  Kernel(KernelShape shape, std::string name, std::function<double(double)> profile);

  KernelShape shape_;
  std::string name_;
  std::function<double(double)> profile_;
};

double kernel_eval(const Kernel& k, double sq_dist, double epsilon);

struct KernelMoment {
  int dim = 1;
  /// int |x|^2 K(|x|) dx / int K(|x|) dx over R^dim.
  double mu_12_0 = 0.0;
};

/// Closed form d/2 for the Gaussian; adaptive radial quadrature (relative
/// error <= 1e-8) otherwise. Throws QuadratureError when quadrature fails.
KernelMoment kernel_moment(const Kernel& k, int dim);

/// Same as kernel_moment but always integrates numerically.
KernelMoment kernel_moment_quadrature(const Kernel& k, int dim);

/// Which diffusion operator a spectral value came from.
enum class OperatorKind { Roseland, DM };

/// Maps a spectral value of a row-stochastic operator to a Laplace-Beltrami
/// eigenvalue estimate:
///   Roseland: (1 - s) d / (eps mu)      with s = sigma^2
///   DM:       (1 - s) 2d / (eps mu)
double laplacian_eigenvalue_estimate(double spectral_value, double epsilon,
                                     const KernelMoment& moment, OperatorKind kind);

/// Nystrom approximates the DM operator, HKC builds a two-step kernel like
/// Roseland.
OperatorKind operator_kind(Method method);

}  // namespace roseland
