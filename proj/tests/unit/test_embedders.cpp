#include "roseland/embedders.hpp"
#include "roseland/rng.hpp"
#include "roseland/spectral.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace roseland;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix circle_points(Index n, double phase = 0.0) {
  Matrix x(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double a = phase + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    x(i, 0) = std::cos(a);
    x(i, 1) = std::sin(a);
  }
  return x;
}

Matrix random_points(Index n, Index p, Rng& rng) {
  Matrix x(n, p);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  return x;
}

EmbedderConfig config(double eps, std::size_t q, double t = 1.0) {
  EmbedderConfig cfg;
  cfg.epsilon = eps;
  cfg.embed_dim = q;
  cfg.diffusion_time = t;
  return cfg;
}

// Continuum spectrum of the Gaussian diffusion operator on the unit circle.
double bessel_ratio(int k, double eps) {
  return boost::math::cyl_bessel_i(k, 2.0 / eps) / boost::math::cyl_bessel_i(0, 2.0 / eps);
}

}  // namespace

TEST_CASE("roseland vectors are eigenvectors of the dense landmark transition") {
  Rng rng(1);
  const Matrix x = random_points(80, 3, rng);
  const Matrix y = random_points(12, 3, rng);
  const EmbeddingResult r = roseland_embed(x, y, config(3.0, 4));
  REQUIRE(r.vectors.rows() == 80);
  REQUIRE(r.vectors.cols() == 5);
  REQUIRE(r.coords.cols() == 4);
  REQUIRE(r.spectrum.size() == 5);
  CHECK(r.method == Method::Roseland);

  const LandmarkAffinity aff = build_landmark_affinity(x, y, Kernel::gaussian(), 3.0);
  const Matrix ww = aff.w * aff.w.transpose();
  const Vector d = ww.rowwise().sum();
  const Matrix p = d.cwiseInverse().asDiagonal() * ww;
  CHECK(r.spectrum[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (Index j = 0; j < 5; ++j) {
    const Vector v = r.vectors.col(j);
    CHECK((p * v - r.spectrum[static_cast<std::size_t>(j)] * v).norm() < 1e-9 * v.norm());
    if (j > 0) CHECK(r.spectrum[static_cast<std::size_t>(j)] <= r.spectrum[static_cast<std::size_t>(j - 1)]);
  }
  for (Index i = 0; i < 80; ++i) CHECK(r.degrees[i] == doctest::Approx(d[i]));
}

TEST_CASE("roseland on an equispaced circle reproduces the squared Bessel ratios") {
  const double eps = 0.05;
  const EmbeddingResult r = roseland_embed(circle_points(1000), circle_points(400, 0.003), config(eps, 4));
  for (int k = 1; k <= 2; ++k) {
    const double oracle = std::pow(bessel_ratio(k, eps), 2.0);
    CHECK(r.spectrum[static_cast<std::size_t>(2 * k - 1)] == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(r.spectrum[static_cast<std::size_t>(2 * k)] == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("dm on an equispaced circle reproduces the Bessel ratios") {
  const double eps = 0.02;
  const EmbeddingResult r = dm_embed(circle_points(700), config(eps, 4));
  CHECK(r.spectrum[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 1; k <= 2; ++k) {
    CHECK(r.spectrum[static_cast<std::size_t>(2 * k - 1)] == doctest::Approx(bessel_ratio(k, eps)).epsilon(1e-8));
  }
  // Eigenvalue estimates approach k^2.
  const auto lam = estimated_laplacian_eigenvalues(r, kernel_moment(Kernel::gaussian(), 1));
  REQUIRE(lam.size() == 4);
  CHECK(lam[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(lam[2] == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("dm capacity and dimension errors") {
  EmbedderConfig cfg = config(0.5, 2);
  cfg.dense_cap = 10;
  CHECK_THROWS_AS(dm_embed(circle_points(11), cfg), CapacityError);
  CHECK_NOTHROW(dm_embed(circle_points(10), cfg));
  CHECK_THROWS_AS(dm_embed(circle_points(10), config(0.5, 10)), ConfigError);
  CHECK_THROWS_AS(roseland_embed(circle_points(20), circle_points(3), config(0.5, 3)), ConfigError);
}

TEST_CASE("nystrom with every point as a landmark equals the diffusion map") {
  Rng rng(2);
  const Matrix x = random_points(60, 2, rng);
  std::vector<Index> all(60);
  for (Index i = 0; i < 60; ++i) all[static_cast<std::size_t>(i)] = i;
  const EmbeddingResult ny = nystrom_embed(x, all, config(1.0, 3));
  const EmbeddingResult dm = dm_embed(x, config(1.0, 3));
  for (std::size_t j = 0; j < 4; ++j) CHECK(ny.spectrum[j] == doctest::Approx(dm.spectrum[j]));
  CHECK((ny.vectors - dm.vectors).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("property: nystrom extension is consistent on landmark rows") {
  // Extending a landmark point through the formula reproduces its eigenvector
  // entry, so the index overload and the free-landmark overload agree.
  Rng rng(3);
  const Matrix x = random_points(90, 2, rng);
  const std::vector<Index> idx = {3, 10, 17, 22, 40, 41, 55, 60, 71, 80, 88, 5};
  Matrix lm(static_cast<Index>(idx.size()), 2);
  for (std::size_t t = 0; t < idx.size(); ++t) lm.row(static_cast<Index>(t)) = x.row(idx[t]);
  const EmbeddingResult a = nystrom_embed(x, idx, config(2.0, 3));
  const EmbeddingResult b = nystrom_embed(x, lm, config(2.0, 3));
  CHECK((a.vectors - b.vectors).cwiseAbs().maxCoeff() < 1e-9);
  // Extended rows follow the closed-form formula.
  const LandmarkAffinity e = build_landmark_affinity(x.row(0), lm, Kernel::gaussian(), 2.0);
  const Matrix wl = kernel_matrix(lm, Kernel::gaussian(), 2.0);
  const SymEig eig = sym_eig_stochastic(wl, wl.rowwise().sum(), 4);
  for (Index j = 0; j < 4; ++j) {
    const double ext = e.w.row(0).dot(eig.vectors.col(j)) / e.w.row(0).sum() / eig.values[j];
    CHECK(a.vectors(0, j) == doctest::Approx(ext).epsilon(1e-10));
  }
}

TEST_CASE("nystrom input errors") {
  const Matrix x = circle_points(30);
  const std::vector<Index> dup = {1, 2, 2, 4, 5, 6};
  const std::vector<Index> out = {1, 2, 30, 4, 5, 6};
  const std::vector<Index> few = {1, 2, 3};
  CHECK_THROWS_AS(nystrom_embed(x, dup, config(0.5, 2)), ConfigError);
  CHECK_THROWS_AS(nystrom_embed(x, out, config(0.5, 2)), IndexError);
  CHECK_THROWS_AS(nystrom_embed(x, few, config(0.5, 2)), ConfigError);
}

TEST_CASE("nystrom refuses a vanishing landmark eigenvalue") {
  // Identical landmarks give a rank-one kernel, so the second eigenvalue is 0.
  Matrix x(6, 1);
  x << 0.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  Matrix lm(6, 1);
  lm << 0.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(nystrom_embed(x, lm, config(1.0, 2)), ValueError);
}

TEST_CASE("hkc psi is orthonormal and diagonalizes A A^T") {
  Rng rng(4);
  const Matrix x = random_points(70, 2, rng);
  const Matrix y = random_points(15, 2, rng);
  const LandmarkAffinity aff = build_landmark_affinity(x, y, Kernel::gaussian(), 2.0);
  const HkcDecomposition dec = hkc_decompose(aff, 5);
  const Eigen::MatrixXd gram = dec.psi.transpose() * dec.psi;
  CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-9);
  const Matrix a = dec.row_sums.cwiseInverse().asDiagonal() * aff.w;
  const Matrix aat = a * a.transpose();
  for (Index j = 0; j < 5; ++j) {
    const Vector v = dec.psi.col(j);
    CHECK((aat * v - dec.lambda[j] * v).norm() < 1e-9);
  }
  CHECK_THROWS_AS(hkc_decompose(aff, 16), DimError);
  const EmbeddingResult r = hkc_embed(x, y, config(2.0, 4));
  CHECK(r.method == Method::HKC);
  CHECK(r.spectrum[0] == doctest::Approx(dec.lambda[0]));
}

TEST_CASE("property: diffusion coordinates scale each vector by value^t") {
  Rng rng(5);
  const Matrix x = random_points(50, 2, rng);
  const Matrix y = random_points(10, 2, rng);
  for (double t : {0.0, 0.5, 1.0, 3.0}) {
    const EmbeddingResult r = roseland_embed(x, y, config(1.0, 3, t));
    for (Index j = 0; j < 3; ++j) {
      const double w = std::pow(r.spectrum[static_cast<std::size_t>(j + 1)], t);
      CHECK((r.coords.col(j) - w * r.vectors.col(j + 1)).norm() < 1e-12 * (1.0 + r.vectors.col(j + 1).norm()));
    }
    CHECK(diffusion_distance(r, 3, 7, t) == doctest::Approx((r.coords.row(3) - r.coords.row(7)).norm()));
    const Matrix c2 = diffusion_coordinates(r, 2.0 * t + 1.0);
    CHECK(diffusion_distance(r, 3, 7, 2.0 * t + 1.0) == doctest::Approx((c2.row(3) - c2.row(7)).norm()));
    CHECK(diffusion_distance(r, 4, 4, t) == 0.0);
  }
  const EmbeddingResult r = roseland_embed(x, y, config(1.0, 3));
  CHECK_THROWS_AS(diffusion_distance(r, 0, 50, 1.0), IndexError);
}

TEST_CASE("portegies scaling is an almost isometry for the exact circle eigenfunctions") {
  // Truth eigenfunctions cos(k x), sin(k x) with eigenvalues k^2; after
  // scaling, short chords of the embedded circle match the arc length.
  const Index n = 2000;
  const int kmax = 120;
  const PortegiesOptions opts{0.01, 1, 2.0 * kPi};
  Matrix v(n, 2 * kmax);
  std::vector<double> lam;
  for (int k = 1; k <= kmax; ++k) {
    for (Index i = 0; i < n; ++i) {
      const double a = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
      v(i, 2 * (k - 1)) = std::cos(k * a);
      v(i, 2 * (k - 1) + 1) = std::sin(k * a);
    }
    lam.push_back(k * k);
    lam.push_back(k * k);
  }
  const Matrix psi = portegies_scale(v, lam, opts);
  for (Index step : {1, 5, 10}) {
    const double arc = 2.0 * kPi * static_cast<double>(step) / static_cast<double>(n);
    const double dist = (psi.row(100) - psi.row(100 + step)).norm();
    CHECK(dist / arc == doctest::Approx(1.0).epsilon(0.02));
  }
  CHECK_THROWS_AS(portegies_scale(v, std::vector<double>{1.0}, opts), DimError);
  CHECK_THROWS_AS(portegies_scale(v, lam, PortegiesOptions{0.0, 1, 1.0}), ConfigError);
}

TEST_CASE("portegies column normalization uses the volume measure") {
  Matrix v(4, 1);
  v << 1.0, -1.0, 1.0, -1.0;
  const PortegiesOptions opts{0.5, 1, 4.0};
  const Matrix psi = portegies_scale(v, std::vector<double>{0.0}, opts);
  // |v| = 2 is rescaled to sqrt(n / volume) = 1 before the factor.
  CHECK(psi.col(0).norm() == doctest::Approx(portegies_factor(0.0, opts)));
  CHECK(portegies_factor(2.0, opts) == doctest::Approx(portegies_factor(0.0, opts) * std::exp(-1.0)));
}
