#pragma once

#include "roseland/core.hpp"
#include "roseland/kernels.hpp"

#include <span>

namespace roseland {

/// Data-to-landmark kernel matrix W^(r), n x m, entries in (0, 1].
struct LandmarkAffinity {
  Matrix w;
  double epsilon = 0.0;
};

/// Squared Euclidean distances between rows of `a` (n x q) and `b` (m x q)
/// via |x|^2 + |y|^2 - 2<x, y>. Values below the rounding floor of the
/// expansion are clamped to exactly 0.
Matrix squared_distances(const Matrix& a, const Matrix& b);

LandmarkAffinity build_landmark_affinity(const Matrix& data, const Matrix& landmarks,
                                         const Kernel& kernel, double epsilon);

/// d_i = sum_k W_ik * colsum_k, i.e. the row sums of W W^T without forming it.
/// Throws ValueError if a point has zero degree (all its kernel values
/// underflowed; epsilon is too small for that point).
Vector landmark_degrees(const LandmarkAffinity& aff);

/// Row i is W_i / sqrt(d_i).
Matrix normalized_landmark_operator(const LandmarkAffinity& aff, const Vector& degrees);

/// Row i of the transition matrix D^{-1} W W^T in factored form.
struct TransitionRow {
  Vector weights;      // W_i / d_i  (m)
  Vector column_sums;  // 1^T W      (m)

  /// Materializes the n-vector (W_i / d_i) W^T. O(nm).
  [[nodiscard]] Vector implied_row(const LandmarkAffinity& aff) const;
};

TransitionRow landmark_transition_row(const LandmarkAffinity& aff, const Vector& degrees, Index i);

/// Dense symmetric n x n kernel matrix K_eps(x_i, x_j) with unit diagonal.
Matrix kernel_matrix(const Matrix& data, const Kernel& kernel, double epsilon);

/// Effective landmark kernel on the unit circle.
///
/// For each query angle x the row holds y -> (1/m) sum_k K(x, y_k) K(y_k, y)
/// over `grid` angles, with K evaluated on chordal distances of the embedded
/// circle.
Matrix landmark_kernel_profile(std::span<const double> landmark_angles,
                               std::span<const double> query_angles, double epsilon,
                               std::span<const double> grid);

/// `grid_size` equally spaced angles on [0, 2 pi).
Matrix landmark_kernel_profile(std::span<const double> landmark_angles,
                               std::span<const double> query_angles, double epsilon,
                               std::size_t grid_size);

/// scale * median squared distance between rows of `data` and `reference`.
/// Uses a deterministic sub-grid of at most max_rows x max_rows pairs;
/// exact zeros (self pairs) are skipped.
double median_bandwidth(const Matrix& data, const Matrix& reference, double scale,
                        Index max_rows = 400);

}  // namespace roseland
