#include "roseland/spectral.hpp"

#include "roseland/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace roseland {

namespace {

using ColMatrix = Eigen::MatrixXd;

constexpr Index kDenseLimit = 1200;
constexpr Index kKrylovColumns = 480;
constexpr int kMaxRestarts = 400;
constexpr double kKrylovTolerance = 1e-11;
constexpr std::uint64_t kKrylovSeed = 0x5EEDC0DEULL;

void check_k(Index k, Index limit, const char* what) {
  if (k < 1 || k > limit) {
    throw DimError(std::string(what) + ": requested " + std::to_string(k) +
                   " components, limit is " + std::to_string(limit));
  }
}

SymEig dense_top(const Matrix& symmetric, Index k) {
  const Index n = symmetric.rows();
  // Row-major storage of a symmetric matrix read as column-major is itself.
  Eigen::SelfAdjointEigenSolver<ColMatrix> es(Eigen::Map<const ColMatrix>(symmetric.data(), n, n));
  if (es.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver failed");
  SymEig out;
  out.values = es.eigenvalues().tail(k).reverse();
  out.vectors = es.eigenvectors().rightCols(k).rowwise().reverse();
  return out;
}

// Orthonormalizes the columns of `block` against basis(:, 0:used) and among
// themselves. Returns the coefficients R with block_in = basis * C + new * R;
// the cross coefficients C are accumulated into `proj`.
// Columns that vanish are replaced by random directions with zero R diagonal.
ColMatrix orthonormalize_block(ColMatrix& block, const ColMatrix& basis, Index used,
                               ColMatrix* proj, double scale, Rng& rng) {
  const Index n = block.rows();
  const Index b = block.cols();
  if (used > 0) {
    const auto q = basis.leftCols(used);
    for (int pass = 0; pass < 2; ++pass) {
      ColMatrix c = q.transpose() * block;
      block.noalias() -= q * c;
      if (proj) *proj += c;
    }
  }
  ColMatrix r = ColMatrix::Zero(b, b);
  for (Index j = 0; j < b; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) {
        const double c = block.col(i).dot(block.col(j));
        block.col(j) -= c * block.col(i);
        r(i, j) += c;
      }
    }
    double norm = block.col(j).norm();
    if (norm > 1e-13 * scale) {
      block.col(j) /= norm;
      r(j, j) = norm;
      continue;
    }
    // Deflated direction: substitute a random vector orthogonal to everything.
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXd z(n);
      for (Index t = 0; t < n; ++t) z[t] = rng.normal();
      for (int pass = 0; pass < 2; ++pass) {
        if (used > 0) z -= basis.leftCols(used) * (basis.leftCols(used).transpose() * z);
        for (Index i = 0; i < j; ++i) z -= block.col(i).dot(z) * block.col(i);
      }
      norm = z.norm();
      if (norm > 1e-8) {
        block.col(j) = z / norm;
        break;
      }
    }
    if (!(norm > 1e-8)) throw ConvergenceError("Krylov basis exhausted");
  }
  return r;
}

SymEig krylov_top(const Matrix& m, Index k) {
  const Index n = m.rows();
  const Index b = std::min<Index>(n, std::max<Index>(k + 6, 8));
  const Index cap = std::min<Index>(n, std::max<Index>(kKrylovColumns, 4 * b));
  // Ritz vectors carried over a thick restart; a multiple of the block size.
  const Index keep = std::max<Index>(k + b, (cap / 2 / b) * b);
  Rng rng(kKrylovSeed);

  ColMatrix basis(n, cap);
  ColMatrix t = ColMatrix::Zero(cap, cap);

  ColMatrix start(n, b);
  for (Index j = 0; j < b; ++j) {
    for (Index i = 0; i < n; ++i) start(i, j) = rng.normal();
  }
  orthonormalize_block(start, basis, 0, nullptr, 1.0, rng);
  basis.leftCols(b) = start;
  Index used = b;
  Index block_start = 0;
  double scale = 1.0;
  int restarts = 0;

  while (true) {
    ColMatrix z = m * basis.middleCols(block_start, b);
    if (restarts == 0 && block_start == 0) scale = std::max(1e-300, z.colwise().norm().maxCoeff());
    ColMatrix coeffs = ColMatrix::Zero(used, b);
    const ColMatrix r = orthonormalize_block(z, basis, used, &coeffs, scale, rng);
    t.block(0, block_start, used, b) = coeffs;

    const ColMatrix tsym =
        0.5 * (t.topLeftCorner(used, used) + t.topLeftCorner(used, used).transpose());
    Eigen::SelfAdjointEigenSolver<ColMatrix> es(tsym);
    if (es.info() != Eigen::Success) throw ConvergenceError("Ritz eigensolver failed");
    const Index kk = std::min(k, used);
    const Eigen::VectorXd theta = es.eigenvalues().tail(kk).reverse();
    if (kk == k) {
      // With V spanning the basis, M V = V T + Z R E^T where E selects the
      // last block, so Ritz pair i has residual |R s_i(last block)|.
      const ColMatrix s = es.eigenvectors().rightCols(kk).rowwise().reverse();
      const double tol = kKrylovTolerance * std::max(std::abs(theta[0]), 1e-300);
      const ColMatrix rs = r * s.middleRows(block_start, b);
      if ((rs.colwise().norm().array() <= tol).all()) {
        SymEig out;
        out.values = theta;
        out.vectors = basis.leftCols(used) * s;
        return out;
      }
    }

    if (used + b > cap) {
      if (++restarts > kMaxRestarts) {
        throw ConvergenceError("block Lanczos did not converge after " +
                               std::to_string(kMaxRestarts) + " restarts");
      }
      // Thick restart: keep the leading Ritz vectors Y. Then M (V Y) =
      // (V Y) Theta + Z R (E^T Y), so T becomes diagonal plus one coupling
      // block to the new residual block Z.
      const ColMatrix y = es.eigenvectors().rightCols(keep).rowwise().reverse();
      const ColMatrix kept = basis.leftCols(used) * y;
      const ColMatrix coupling = r * y.middleRows(block_start, b);
      basis.leftCols(keep) = kept;
      t.setZero();
      t.topLeftCorner(keep, keep).diagonal() = es.eigenvalues().tail(keep).reverse();
      t.block(keep, 0, b, keep) = coupling;
      basis.middleCols(keep, b) = z;
      block_start = keep;
      used = keep + b;
      continue;
    }
    t.block(used, block_start, b, b) = r;
    basis.middleCols(used, b) = z;
    block_start = used;
    used += b;
  }
}

}  // namespace

void apply_sign_convention(Matrix& vectors, Matrix* partner) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (vectors.rows() > 0 && vectors(arg, j) < 0.0) {
      vectors.col(j) *= -1.0;
      if (partner) partner->col(j) *= -1.0;
    }
  }
}

ThinSvd thin_svd(const Matrix& a, Index k) {
  const Index n = a.rows();
  const Index m = a.cols();
  check_k(k, std::min(n, m), "thin_svd");

  ColMatrix gram = ColMatrix::Zero(m, m);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  Eigen::SelfAdjointEigenSolver<ColMatrix> es(gram);
  if (es.info() != Eigen::Success) throw ConvergenceError("Gram eigensolver failed");
  const ColMatrix vk = es.eigenvectors().rightCols(k).rowwise().reverse();

  const ColMatrix b = a * vk;
  Eigen::HouseholderQR<ColMatrix> qr(b);
  const ColMatrix q = qr.householderQ() * ColMatrix::Identity(n, k);
  const ColMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<ColMatrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw ConvergenceError("small SVD failed");

  ThinSvd out;
  out.u = q * svd.matrixU();
  out.s = svd.singularValues();
  out.v = vk * svd.matrixV();
  apply_sign_convention(out.u, &out.v);
  return out;
}

SymEig top_eigenpairs(const Matrix& symmetric, Index k) {
  const Index n = symmetric.rows();
  if (symmetric.cols() != n) throw DimError("top_eigenpairs needs a square matrix");
  check_k(k, n, "top_eigenpairs");
  SymEig out = (n <= kDenseLimit || 3 * k >= n) ? dense_top(symmetric, k) : krylov_top(symmetric, k);
  Matrix vecs = out.vectors;
  apply_sign_convention(vecs);
  out.vectors = std::move(vecs);
  return out;
}

SymEig sym_eig_stochastic(Matrix&& w, const Vector& degrees, Index k) {
  const Index n = w.rows();
  if (w.cols() != n || degrees.size() != n) throw DimError("sym_eig_stochastic: shape mismatch");
  if ((degrees.array() <= 0.0).any()) throw ValueError("degrees must be strictly positive");
  const Vector inv_sqrt = degrees.cwiseSqrt().cwiseInverse();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    w.row(i).array() *= inv_sqrt[i] * inv_sqrt.transpose().array();
  }
  SymEig eig = top_eigenpairs(w, k);
  eig.vectors = inv_sqrt.asDiagonal() * eig.vectors;
  apply_sign_convention(eig.vectors);
  return eig;
}

SymEig sym_eig_stochastic(const Matrix& w, const Vector& degrees, Index k) {
  return sym_eig_stochastic(Matrix(w), degrees, k);
}

}  // namespace roseland
