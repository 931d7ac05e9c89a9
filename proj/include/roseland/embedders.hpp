#pragma once

#include "roseland/affinity.hpp"
#include "roseland/core.hpp"
#include "roseland/kernels.hpp"

#include <span>
#include <vector>

namespace roseland {

/// Landmark-diffusion embedding.
///
/// Builds W^(r) (n x m), the degrees d = W (W^T 1), and the thin SVD of
/// D^{-1/2} W^(r). The right eigenvectors of the n x n transition matrix
/// D^{-1} W W^T are the columns of D^{-1/2} U with eigenvalues sigma^2.
/// Coordinate j is sigma_{j+1}^{2t} (D^{-1/2} U)_{:, j+1}, skipping the trivial
/// first pair. Memory stays O(nm).
EmbeddingResult roseland_embed(const Matrix& data, const Matrix& landmarks,
                               const EmbedderConfig& cfg, const Kernel& kernel = Kernel::gaussian());

/// Classical diffusion map on the dense n x n kernel (alpha = 0).
/// Throws CapacityError when n exceeds cfg.dense_cap.
EmbeddingResult dm_embed(const Matrix& data, const EmbedderConfig& cfg,
                         const Kernel& kernel = Kernel::gaussian());

/// Nystrom extension of a diffusion map computed on the landmark rows.
/// Landmark rows keep their subset eigenvectors; the remaining rows get the
/// affinity-weighted extension D^{-1} E U_L diag(l)^{-1}.
EmbeddingResult nystrom_embed(const Matrix& data, std::span<const Index> landmark_indices,
                              const EmbedderConfig& cfg, const Kernel& kernel = Kernel::gaussian());

/// Nystrom with a landmark set that is not part of the data; every data row
/// is extended.
EmbeddingResult nystrom_embed(const Matrix& data, const Matrix& landmarks,
                              const EmbedderConfig& cfg, const Kernel& kernel = Kernel::gaussian());

struct HkcDecomposition {
  Vector lambda;  // eigenvalues of A^T A, non-increasing
  Matrix phi;     // m x k eigenvectors of A^T A
  Matrix psi;     // n x k, psi_j = lambda_j^{-1/2} A phi_j
  Vector row_sums;
};

/// HKC factorization of a landmark affinity: A = rowsum-normalized W^(r).
/// Throws ValueError when a requested lambda_j <= 1e-12.
HkcDecomposition hkc_decompose(const LandmarkAffinity& aff, Index k);

EmbeddingResult hkc_embed(const Matrix& data, const Matrix& landmarks, const EmbedderConfig& cfg,
                          const Kernel& kernel = Kernel::gaussian());

/// Diffusion coordinates at time t from stored vectors and spectrum.
/// Roseland stores sigma^2 in the spectrum, so every method uses value^t.
Matrix diffusion_coordinates(const EmbeddingResult& result, double t);

/// Euclidean distance between rows i and j of the coordinates at time t.
/// Coordinates are recomputed when t differs from the result's own time.
double diffusion_distance(const EmbeddingResult& result, Index i, Index j, double t);

struct PortegiesOptions {
  double t = 0.01;          // heat-kernel time
  int intrinsic_dim = 1;    // d
  double volume = 6.283185307179586;  // Riemannian volume of the manifold (unit circle: 2 pi)
};

/// (2t)^{(d+2)/4} sqrt(2) (4 pi)^{d/4} exp(-lambda t).
double portegies_factor(double lambda, const PortegiesOptions& opts);

/// Rescales eigenvector columns into the almost-isometric heat-kernel
/// embedding. Each column of `vectors` (non-trivial eigenvectors, one per
/// eigenvalue) is first normalized to unit L^2 norm with respect to the
/// empirical volume measure, i.e. to |v|_2 = sqrt(n / volume).
Matrix portegies_scale(const Matrix& vectors, std::span<const double> laplacian_eigenvalues,
                       const PortegiesOptions& opts);

/// Laplace-Beltrami eigenvalue estimates for the non-trivial spectrum
/// entries 1..q' of an embedding.
std::vector<double> estimated_laplacian_eigenvalues(const EmbeddingResult& result,
                                                    const KernelMoment& moment);

}  // namespace roseland
