#include "roseland/kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace roseland;

TEST_CASE("gaussian kernel values") {
  const Kernel k = Kernel::gaussian();
  CHECK(k.shape() == KernelShape::Gaussian);
  CHECK(k(0.0, 0.3) == 1.0);
  CHECK(k(0.3, 0.3) == doctest::Approx(std::exp(-1.0)));
  CHECK(kernel_eval(k, 2.0, 0.5) == doctest::Approx(std::exp(-4.0)));
  CHECK(k.profile(2.0) == doctest::Approx(std::exp(-4.0)));
}

TEST_CASE("gaussian second moment is d/2 in closed form and by quadrature") {
  for (int d = 1; d <= 6; ++d) {
    CHECK(kernel_moment(Kernel::gaussian(), d).mu_12_0 == doctest::Approx(d / 2.0));
    CHECK(kernel_moment_quadrature(Kernel::gaussian(), d).mu_12_0 ==
          doctest::Approx(d / 2.0).epsilon(1e-8));
  }
}

TEST_CASE("custom kernel moment matches the gamma-function oracle") {
  // K(t) = exp(-t): ratio of radial integrals is Gamma(d+2)/Gamma(d) = d(d+1).
  const Kernel k = Kernel::custom("laplace", [](double t) { return std::exp(-t); });
  for (int d = 1; d <= 4; ++d) {
    CHECK(kernel_moment(k, d).mu_12_0 == doctest::Approx(d * (d + 1.0)).epsilon(1e-8));
  }
  // K(t) = exp(-t^4): Gamma((d+2)/4)/Gamma(d/4).
  const Kernel q = Kernel::custom("quartic", [](double t) { return std::exp(-t * t * t * t); });
  for (int d = 1; d <= 3; ++d) {
    const double oracle = std::tgamma((d + 2) / 4.0) / std::tgamma(d / 4.0);
    CHECK(kernel_moment(q, d).mu_12_0 == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("custom gaussian profile agrees with the closed form") {
  const Kernel k = Kernel::custom("g", [](double t) { return std::exp(-t * t); });
  CHECK(k.shape() == KernelShape::Custom);
  CHECK(kernel_moment(k, 3).mu_12_0 == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(k(0.2, 0.1) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("quadrature failure is reported") {
  // Not integrable: the radial integral diverges.
  const Kernel bad = Kernel::custom("flat", [](double) { return 1.0; });
  CHECK_THROWS_AS(kernel_moment(bad, 1), QuadratureError);
  CHECK_THROWS_AS(kernel_moment(Kernel::gaussian(), 0), ConfigError);
}

TEST_CASE("laplacian eigenvalue estimate") {
  const KernelMoment mu{1, 0.5};
  // (1 - 0.9) * 1 / (0.1 * 0.5) = 2, doubled for the DM operator.
  CHECK(laplacian_eigenvalue_estimate(0.9, 0.1, mu, OperatorKind::Roseland) == doctest::Approx(2.0));
  CHECK(laplacian_eigenvalue_estimate(0.9, 0.1, mu, OperatorKind::DM) == doctest::Approx(4.0));
  CHECK(laplacian_eigenvalue_estimate(1.0, 0.1, mu, OperatorKind::DM) == 0.0);
}

TEST_CASE("operator kinds per method") {
  CHECK(operator_kind(Method::Roseland) == OperatorKind::Roseland);
  CHECK(operator_kind(Method::HKC) == OperatorKind::Roseland);
  CHECK(operator_kind(Method::DM) == OperatorKind::DM);
  CHECK(operator_kind(Method::Nystrom) == OperatorKind::DM);
}

TEST_CASE("property: estimate decreases in the spectral value and scales as 1/eps") {
  const KernelMoment mu = kernel_moment(Kernel::gaussian(), 1);
  for (double eps : {0.01, 0.1, 1.0}) {
    double prev = INFINITY;
    for (double s = 0.0; s <= 1.0; s += 0.05) {
      const double v = laplacian_eigenvalue_estimate(s, eps, mu, OperatorKind::Roseland);
      CHECK(v <= prev);
      CHECK(v * eps == doctest::Approx(laplacian_eigenvalue_estimate(s, 1.0, mu, OperatorKind::Roseland)));
      prev = v;
    }
  }
}
