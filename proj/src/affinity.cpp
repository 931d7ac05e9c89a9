#include "roseland/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace roseland {

namespace {

constexpr double kClampUlps = 64.0 * std::numeric_limits<double>::epsilon();

// Turns Gram entries into kernel values in place. `row_norms` and `col_norms`
// hold squared norms.
void gram_to_kernel_row(double* row, Index cols, double row_norm, const Vector& col_norms,
                        const Kernel& kernel, double epsilon) {
  const bool gaussian = kernel.shape() == KernelShape::Gaussian;
  for (Index k = 0; k < cols; ++k) {
    const double scale = row_norm + col_norms[k];
    double d2 = scale - 2.0 * row[k];
    if (d2 < kClampUlps * scale) d2 = 0.0;
    row[k] = gaussian ? std::exp(-d2 / epsilon) : kernel(d2, epsilon);
  }
}

}  // namespace

Matrix squared_distances(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DimError("dimension mismatch: " + std::to_string(a.cols()) + " vs " +
                   std::to_string(b.cols()) + " columns");
  }
  const Vector an = a.rowwise().squaredNorm();
  const Vector bn = b.rowwise().squaredNorm();
  Matrix d(a.rows(), b.rows());
  d.noalias() = a * b.transpose();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index k = 0; k < d.cols(); ++k) {
      const double scale = an[i] + bn[k];
      const double v = scale - 2.0 * d(i, k);
      d(i, k) = v < kClampUlps * scale ? 0.0 : v;
    }
  }
  return d;
}

LandmarkAffinity build_landmark_affinity(const Matrix& data, const Matrix& landmarks,
                                         const Kernel& kernel, double epsilon) {
  if (data.cols() != landmarks.cols()) {
    throw DimError("data has " + std::to_string(data.cols()) + " columns but landmarks have " +
                   std::to_string(landmarks.cols()));
  }
  if (landmarks.rows() < 1 || data.rows() < 1) throw DimError("empty data or landmark set");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  const Vector dn = data.rowwise().squaredNorm();
  const Vector ln = landmarks.rowwise().squaredNorm();
  LandmarkAffinity aff;
  aff.epsilon = epsilon;
  aff.w.resize(data.rows(), landmarks.rows());
  aff.w.noalias() = data * landmarks.transpose();
  const Index m = aff.w.cols();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < aff.w.rows(); ++i) {
    gram_to_kernel_row(aff.w.row(i).data(), m, dn[i], ln, kernel, epsilon);
  }
  return aff;
}

Vector landmark_degrees(const LandmarkAffinity& aff) {
  const Vector colsum = aff.w.colwise().sum().transpose();
  Vector d = aff.w * colsum;
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw ValueError("point " + std::to_string(i) +
                       " has zero landmark degree; increase epsilon");
    }
  }
  return d;
}

Matrix normalized_landmark_operator(const LandmarkAffinity& aff, const Vector& degrees) {
  if (degrees.size() != aff.w.rows()) throw DimError("degree vector length mismatch");
  return degrees.cwiseSqrt().cwiseInverse().asDiagonal() * aff.w;
}

Vector TransitionRow::implied_row(const LandmarkAffinity& aff) const { return aff.w * weights; }

TransitionRow landmark_transition_row(const LandmarkAffinity& aff, const Vector& degrees,
                                      Index i) {
  if (i < 0 || i >= aff.w.rows()) throw IndexError("row index out of range");
  TransitionRow row;
  row.weights = aff.w.row(i).transpose() / degrees[i];
  row.column_sums = aff.w.colwise().sum().transpose();
  return row;
}

Matrix kernel_matrix(const Matrix& data, const Kernel& kernel, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  const Index n = data.rows();
  const Vector norms = data.rowwise().squaredNorm();
  Matrix w(n, n);
  w.triangularView<Eigen::Lower>() = data * data.transpose();
#pragma omp parallel for schedule(dynamic, 64)
  for (Index i = 0; i < n; ++i) {
    double* row = w.row(i).data();
    for (Index j = 0; j < i; ++j) {
      const double scale = norms[i] + norms[j];
      double d2 = scale - 2.0 * row[j];
      if (d2 < kClampUlps * scale) d2 = 0.0;
      row[j] = kernel(d2, epsilon);
    }
    row[i] = kernel(0.0, epsilon);
  }
  w.triangularView<Eigen::StrictlyUpper>() = w.transpose();
  return w;
}

Matrix landmark_kernel_profile(std::span<const double> landmark_angles,
                               std::span<const double> query_angles, double epsilon,
                               std::span<const double> grid) {
  if (landmark_angles.empty()) throw DimError("landmark kernel profile needs landmarks");
  const auto chord2 = [](double a, double b) { return 2.0 - 2.0 * std::cos(a - b); };
  const double inv_m = 1.0 / static_cast<double>(landmark_angles.size());
  // K(y_k, grid_g), shared by every query.
  Matrix landmark_to_grid(static_cast<Index>(landmark_angles.size()),
                          static_cast<Index>(grid.size()));
  for (std::size_t k = 0; k < landmark_angles.size(); ++k) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      landmark_to_grid(static_cast<Index>(k), static_cast<Index>(g)) =
          std::exp(-chord2(landmark_angles[k], grid[g]) / epsilon);
    }
  }
  Matrix out(static_cast<Index>(query_angles.size()), static_cast<Index>(grid.size()));
  for (std::size_t q = 0; q < query_angles.size(); ++q) {
    Eigen::RowVectorXd weights(static_cast<Index>(landmark_angles.size()));
    for (std::size_t k = 0; k < landmark_angles.size(); ++k) {
      weights[static_cast<Index>(k)] = std::exp(-chord2(query_angles[q], landmark_angles[k]) / epsilon);
    }
    out.row(static_cast<Index>(q)) = inv_m * weights * landmark_to_grid;
  }
  return out;
}

Matrix landmark_kernel_profile(std::span<const double> landmark_angles,
                               std::span<const double> query_angles, double epsilon,
                               std::size_t grid_size) {
  std::vector<double> grid(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    grid[g] = 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(grid_size);
  }
  return landmark_kernel_profile(landmark_angles, query_angles, epsilon, grid);
}

double median_bandwidth(const Matrix& data, const Matrix& reference, double scale, Index max_rows) {
  if (data.cols() != reference.cols()) throw DimError("bandwidth: column mismatch");
  if (!(scale > 0.0)) throw ConfigError("bandwidth scale must be positive");
  const auto pick = [max_rows](const Matrix& m) {
    const Index rows = std::min(m.rows(), max_rows);
    Matrix sub(rows, m.cols());
    for (Index r = 0; r < rows; ++r) sub.row(r) = m.row(r * m.rows() / rows);
    return sub;
  };
  const Matrix d2 = squared_distances(pick(data), pick(reference));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(d2.size()));
  for (Index k = 0; k < d2.size(); ++k) {
    if (d2.data()[k] > 0.0) values.push_back(d2.data()[k]);
  }
  if (values.empty()) throw ValueError("bandwidth: all sampled distances are zero");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return scale * *mid;
}

}  // namespace roseland
