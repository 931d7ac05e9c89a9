#include "roseland/affinity.hpp"
#include "roseland/rng.hpp"
#include "roseland/spectral.hpp"

#include <doctest.h>

#include <cmath>

using namespace roseland;

namespace {

Matrix random_points(Index n, Index p, Rng& rng) {
  Matrix x(n, p);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  return x;
}

// Columns must match up to sign; returns the worst column deviation.
double max_column_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    const double plus = (a.col(j) - b.col(j)).norm();
    const double minus = (a.col(j) + b.col(j)).norm();
    worst = std::max(worst, std::min(plus, minus));
  }
  return worst;
}

void check_sign_rule(const Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index arg = 0;
    v.col(j).cwiseAbs().maxCoeff(&arg);
    CHECK(v(arg, j) > 0.0);
  }
}

Matrix symmetric_kernel(Index n, Rng& rng) {
  const Matrix x = random_points(n, 3, rng);
  Matrix k = kernel_matrix(x, Kernel::gaussian(), 2.0);
  const Vector d = k.rowwise().sum();
  const Vector s = d.cwiseSqrt().cwiseInverse();
  return s.asDiagonal() * k * s.asDiagonal();
}

}  // namespace

TEST_CASE("thin svd matches a full Jacobi SVD") {
  Rng rng(1);
  const Matrix a = random_points(200, 12, rng);
  const ThinSvd svd = thin_svd(a, 5);
  Eigen::JacobiSVD<Eigen::MatrixXd> ref(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (Index j = 0; j < 5; ++j) CHECK(svd.s[j] == doctest::Approx(ref.singularValues()[j]).epsilon(1e-10));
  CHECK(max_column_gap(svd.u, ref.matrixU().leftCols(5)) < 1e-8);
  CHECK(max_column_gap(svd.v, ref.matrixV().leftCols(5)) < 1e-8);
  check_sign_rule(svd.u);
  // u s v^T reproduces the rank-5 truncation.
  const Eigen::MatrixXd recon = svd.u * svd.s.asDiagonal() * svd.v.transpose();
  const Eigen::MatrixXd ref5 =
      ref.matrixU().leftCols(5) * ref.singularValues().head(5).asDiagonal() * ref.matrixV().leftCols(5).transpose();
  CHECK((recon - ref5).norm() < 1e-8 * ref5.norm());
}

TEST_CASE("thin svd of a rank-deficient matrix stays orthonormal") {
  Rng rng(2);
  const Matrix b = random_points(50, 2, rng);
  const Matrix c = random_points(2, 6, rng);
  const Matrix a = b * c;  // rank 2
  const ThinSvd svd = thin_svd(a, 4);
  CHECK(svd.s[2] < 1e-6 * svd.s[0]);
  const Eigen::MatrixXd gram = svd.u.transpose() * svd.u;
  CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-8);
}

TEST_CASE("thin svd dimension checks") {
  const Matrix a = Matrix::Ones(5, 3);
  CHECK_THROWS_AS(thin_svd(a, 0), DimError);
  CHECK_THROWS_AS(thin_svd(a, 4), DimError);
}

TEST_CASE("dense top eigenpairs against the full solver") {
  Rng rng(3);
  const Matrix s = symmetric_kernel(120, rng);
  const SymEig eig = top_eigenpairs(s, 6);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(s);
  for (Index j = 0; j < 6; ++j) {
    CHECK(eig.values[j] == doctest::Approx(ref.eigenvalues()[119 - j]).epsilon(1e-10));
  }
  CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  check_sign_rule(eig.vectors);
  CHECK_THROWS_AS(top_eigenpairs(Matrix::Ones(3, 4), 1), DimError);
}

TEST_CASE("block Lanczos agrees with the dense oracle") {
  Rng rng(4);
  const Index n = 1500;
  const Matrix s = symmetric_kernel(n, rng);
  const SymEig eig = top_eigenpairs(s, 8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(s);
  const Eigen::VectorXd top = ref.eigenvalues().tail(8).reverse();
  const Eigen::MatrixXd vecs = ref.eigenvectors().rightCols(8).rowwise().reverse();
  for (Index j = 0; j < 8; ++j) CHECK(eig.values[j] == doctest::Approx(top[j]).epsilon(1e-9));
  // Compare eigenvectors only across well-separated eigenvalues.
  for (Index j = 0; j < 8; ++j) {
    const double gap_prev = j == 0 ? 1.0 : top[j - 1] - top[j];
    const double gap_next = j == 7 ? 1.0 : top[j] - top[j + 1];
    if (std::min(gap_prev, gap_next) < 1e-4) continue;
    CHECK(max_column_gap(eig.vectors.col(j), vecs.col(j)) < 1e-5);
  }
  check_sign_rule(eig.vectors);
}

TEST_CASE("restarted Lanczos resolves a tightly clustered top spectrum") {
  // Top gaps of 1e-4 against a spread of 1 need far more Krylov steps than
  // one basis holds, so this exercises the thick restart.
  Rng rng(6);
  const Index n = 1600;
  Eigen::MatrixXd g(n, n);
  for (Index i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd lambda(n);
  for (Index j = 0; j < n; ++j) {
    lambda[j] = j < 12 ? 1.0 - 1e-4 * static_cast<double>(j)
                       : 0.9 * static_cast<double>(n - 1 - j) / static_cast<double>(n - 13);
  }
  const Eigen::MatrixXd dense = q * lambda.asDiagonal() * q.transpose();
  const Matrix s = 0.5 * (dense + dense.transpose());
  const SymEig eig = top_eigenpairs(s, 6);
  for (Index j = 0; j < 6; ++j) {
    CHECK(eig.values[j] == doctest::Approx(lambda[j]).epsilon(1e-10));
    CHECK(max_column_gap(eig.vectors.col(j), q.col(j)) < 1e-5);
  }
}

TEST_CASE("property: stochastic eigenvectors are right eigenvectors of D^-1 W") {
  Rng rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const Index n = 40 + 30 * trial;
    const Matrix x = random_points(n, 2, rng);
    const Matrix w = kernel_matrix(x, Kernel::gaussian(), 1.0);
    const Vector d = w.rowwise().sum();
    const SymEig eig = sym_eig_stochastic(w, d, 4);
    const Matrix p = d.cwiseInverse().asDiagonal() * w;
    CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (Index j = 0; j < 4; ++j) {
      const Vector lhs = p * eig.vectors.col(j);
      const Vector rhs = eig.values[j] * eig.vectors.col(j);
      CHECK((lhs - rhs).norm() < 1e-10 * eig.vectors.col(j).norm());
      CHECK(eig.values[j] <= 1.0 + 1e-12);
    }
    // The trivial vector is constant.
    const Vector v0 = eig.vectors.col(0);
    CHECK((v0.array() - v0.mean()).abs().maxCoeff() < 1e-10 * v0.cwiseAbs().maxCoeff());
    // D-orthogonality of the vectors.
    const Eigen::MatrixXd g = eig.vectors.transpose() * d.asDiagonal() * eig.vectors;
    CHECK((g - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-10);
  }
}

TEST_CASE("stochastic eigensolver input checks") {
  const Matrix w = Matrix::Ones(3, 3);
  Vector d(3);
  d << 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(sym_eig_stochastic(w, d, 1), ValueError);
  CHECK_THROWS_AS(sym_eig_stochastic(w, Vector::Ones(2), 1), DimError);
}

TEST_CASE("sign convention flips the partner with the vectors") {
  Matrix v(3, 2);
  v << 0.1, 0.5, -0.9, 0.2, 0.3, -0.1;
  Matrix partner = Matrix::Ones(2, 2);
  apply_sign_convention(v, &partner);
  CHECK(v(1, 0) == 0.9);
  CHECK(v(0, 1) == 0.5);
  CHECK(partner(0, 0) == -1.0);
  CHECK(partner(0, 1) == 1.0);
}
