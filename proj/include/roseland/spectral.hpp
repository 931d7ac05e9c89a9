#pragma once

#include "roseland/core.hpp"

namespace roseland {

/// Top-k singular triple. Singular values are non-increasing; for each j the
/// largest-magnitude entry of u_j is positive (ties: lowest index).
struct ThinSvd {
  Matrix u;  // n x k
  Vector s;  // k
  Matrix v;  // m x k
};

/// Top-k eigenpairs, values non-increasing, same sign rule as ThinSvd.
struct SymEig {
  Vector values;
  Matrix vectors;
};

/// Thin SVD of a tall matrix without forming any n x n object.
///
/// Eigendecomposes the m x m Gram a^T a for the leading right subspace, then
/// refines with a Householder QR of a V_k and a Jacobi SVD of the k x k
/// factor. Rank-deficient inputs get an orthonormal completion of u.
ThinSvd thin_svd(const Matrix& a, Index k);

/// Top-k eigenpairs of a symmetric matrix. Dense solver for small problems,
/// block Lanczos with full reorthogonalization otherwise.
SymEig top_eigenpairs(const Matrix& symmetric, Index k);

/// Right eigenvectors of D^{-1} W via the symmetric conjugate
/// D^{-1/2} W D^{-1/2}; returned vectors are D^{-1/2} v_j.
SymEig sym_eig_stochastic(const Matrix& w, const Vector& degrees, Index k);

/// In-place variant: `w` is overwritten by its symmetric conjugate, avoiding
/// a second n x n buffer.
SymEig sym_eig_stochastic(Matrix&& w, const Vector& degrees, Index k);

/// Flips columns of `vectors` so that each column's largest-magnitude entry
/// is positive. The same flips are applied to `partner` when given.
void apply_sign_convention(Matrix& vectors, Matrix* partner = nullptr);

}  // namespace roseland
