#include "roseland/kernels.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <utility>

namespace roseland {

Kernel::Kernel(KernelShape shape, std::string name, std::function<double(double)> profile)
    : shape_(shape), name_(std::move(name)), profile_(std::move(profile)) {}

Kernel Kernel::gaussian() {
  return Kernel(KernelShape::Gaussian, "gaussian", [](double t) { return std::exp(-t * t); });
}

Kernel Kernel::custom(std::string name, std::function<double(double)> profile) {
  if (!profile) throw ConfigError("custom kernel needs a profile function");
  if (!(profile(0.0) > 0.0)) throw ConfigError("kernel must be positive at 0");
  return Kernel(KernelShape::Custom, std::move(name), std::move(profile));
}

double Kernel::profile(double t) const { return profile_(t); }

double Kernel::operator()(double sq_dist, double epsilon) const {
  if (shape_ == KernelShape::Gaussian) return std::exp(-sq_dist / epsilon);
  return profile_(std::sqrt(sq_dist / epsilon));
}

double kernel_eval(const Kernel& k, double sq_dist, double epsilon) { return k(sq_dist, epsilon); }

KernelMoment kernel_moment_quadrature(const Kernel& k, int dim) {
  if (dim < 1) throw ConfigError("kernel moment needs dimension >= 1");
  // Radial form: the sphere area cancels between numerator and denominator.
  boost::math::quadrature::exp_sinh<double> integrator;
  constexpr double kTol = 1e-10;
  double err_num = 0.0;
  double err_den = 0.0;
  double l1_num = 0.0;
  double l1_den = 0.0;
  double num = 0.0;
  double den = 0.0;
  // The tail evaluates huge r where r^power overflows; a vanished profile wins.
  auto radial = [&k](double r, int power) {
    const double v = k.profile(r);
    return v == 0.0 ? 0.0 : std::pow(r, power) * v;
  };
  try {
    num = integrator.integrate([&](double r) { return radial(r, dim + 1); }, 0.0,
                               std::numeric_limits<double>::infinity(), kTol, &err_num, &l1_num);
    den = integrator.integrate([&](double r) { return radial(r, dim - 1); }, 0.0,
                               std::numeric_limits<double>::infinity(), kTol, &err_den, &l1_den);
  } catch (const std::exception& e) {
    throw QuadratureError(std::string("kernel moment quadrature failed: ") + e.what());
  }
  if (!(den > 0.0) || !(num > 0.0) || !std::isfinite(num) || !std::isfinite(den)) {
    throw QuadratureError("kernel moment quadrature produced a non-positive integral");
  }
  if (err_num > 1e-8 * num || err_den > 1e-8 * den) {
    throw QuadratureError("kernel moment quadrature did not reach relative error 1e-8");
  }
  return {dim, num / den};
}

KernelMoment kernel_moment(const Kernel& k, int dim) {
  if (dim < 1) throw ConfigError("kernel moment needs dimension >= 1");
  if (k.shape() == KernelShape::Gaussian) return {dim, 0.5 * dim};
  return kernel_moment_quadrature(k, dim);
}

double laplacian_eigenvalue_estimate(double spectral_value, double epsilon,
                                     const KernelMoment& moment, OperatorKind kind) {
  const double gap = std::max(0.0, 1.0 - spectral_value);
  const double factor = kind == OperatorKind::Roseland ? 1.0 : 2.0;
  return gap * factor * moment.dim / (epsilon * moment.mu_12_0);
}

OperatorKind operator_kind(Method method) {
  return (method == Method::DM || method == Method::Nystrom) ? OperatorKind::DM
                                                             : OperatorKind::Roseland;
}

}  // namespace roseland
