#pragma once

#include "roseland/core.hpp"
#include "roseland/embedders.hpp"
#include "roseland/kernels.hpp"
#include "roseland/rng.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace roseland {

/// Laplace-Beltrami eigenpairs of the unit circle sampled at given angles.
/// Column order: 1/sqrt(2 pi), then cos(k theta)/sqrt(pi), sin(k theta)/sqrt(pi)
/// for k = 1..k_max. The columns are L^2(S^1)-orthonormal; on n uniform
/// samples (2 pi / n) F^T F approaches the identity.
struct CircleGroundTruth {
  int k_max = 0;
  std::vector<double> eigenvalues;  // 0, 1, 1, 4, 4, ...
  Matrix functions;                 // n x (2 k_max + 1)

  /// Columns rescaled to unit Euclidean norm.
  [[nodiscard]] Matrix unit_columns() const;
};

CircleGroundTruth circle_ground_truth(int k_max, std::span<const double> angles);

/// Analytic eigenvalue of column `j` (0-based, trivial first): ceil(j/2)^2.
double circle_eigenvalue(Index j);

struct EigenReport {
  std::vector<double> estimated_eigenvalues;  // Laplacian estimates
  std::vector<double> true_eigenvalues;
  std::vector<double> eigenvalue_error;       // |est - true| / max(true, 1)
  std::vector<double> l2_error;               // after alignment
  std::vector<double> linf_error;
  Matrix aligned;  // unit-norm estimates rotated onto the truth, n x k
};

/// Scores estimated eigenpairs against the circle truth.
///
/// `vectors` holds the trivial column first and `spectral_values` the
/// matching operator eigenvalues (sigma^2 for Roseland). Estimated columns
/// are unit-normalized, then each analytic eigenspace {cos k, sin k} is
/// matched by a 2x2 orthogonal Procrustes fit, which also fixes signs.
EigenReport align_and_score(const Matrix& vectors, std::span<const double> spectral_values,
                            const CircleGroundTruth& truth, double epsilon,
                            const KernelMoment& moment, OperatorKind kind);

EigenReport align_and_score(const EmbeddingResult& result, const CircleGroundTruth& truth,
                            const KernelMoment& moment);

struct PhaseAmplitude {
  std::vector<double> angles;     // sorted true angles
  std::vector<double> phase;      // atan2(v1, v2) wrapped to [0, 2 pi); 0 where v1 = v2 = 0
  std::vector<double> amplitude;  // sqrt(v1^2 + v2^2)
};

PhaseAmplitude phase_amplitude(std::span<const double> v1, std::span<const double> v2,
                               std::span<const double> true_angles);

/// Population standard deviation over mean.
double coefficient_of_variation(std::span<const double> values);

/// Circular rank correlation in [0, 1]. Both samples are replaced by their
/// ranks spread uniformly around the circle; the value is the larger of
/// |mean exp(i(r_a - r_b))|^2 and |mean exp(i(r_a + r_b))|^2, so it is 1 for
/// any monotone circular relation of either orientation and any rotation.
double circular_rank_correlation(std::span<const double> a, std::span<const double> b);

enum class NeighborMode { Geodesic, Embedding };
enum class EigenvalueSource { Estimated, GroundTruth };

/// Arc-length distance on the unit circle.
double arc_distance(double a, double b);

/// Portegies-scaled non-trivial eigenvectors of an embedding, with either
/// the method's own eigenvalue estimates or the circle's k^2.
Matrix geodesic_embedding(const EmbeddingResult& result, EigenvalueSource source,
                          const KernelMoment& moment, const PortegiesOptions& opts);

/// Per-point relative error |D(x_i, x_i^K) - d(x_i, x_i^K)| / d(x_i, x_i^K)
/// where x_i^K is the K-th nearest neighbor by true geodesic distance or by
/// embedding distance. Throws ValueError when the true distance is 0.
std::vector<double> geodesic_recovery_error(const Matrix& coords, std::span<const double> angles,
                                            std::size_t k, NeighborMode mode = NeighborMode::Geodesic);

/// Errors for every K in 1..k_max, as an n x k_max matrix.
Matrix geodesic_error_table(const Matrix& coords, std::span<const double> angles,
                            std::size_t k_max, NeighborMode mode = NeighborMode::Geodesic);

double median(std::vector<double> values);
double quantile(std::vector<double> values, double q);

enum class TestFunction { Product, Bump };

std::string_view to_string(TestFunction f);
TestFunction parse_test_function(std::string_view name);

/// E f under the test function's sampling law: 9 for the product on
/// U[0,6]^2, adaptive quadrature for the bump on U[0,1]^2.
double test_function_expectation(TestFunction f);
double test_function_value(TestFunction f, double x, double y);

struct ConcentrationRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  double error_iid_m = 0.0;  // mean absolute relative error, M i.i.d. pairs
  double error_iid_n = 0.0;  // N i.i.d. pairs
  double error_grid = 0.0;   // N x M grid
  double grid_signed_mean = 0.0;  // mean signed relative error of the grid estimator
  double grid_signed_se = 0.0;    // its standard error
};

/// Grid-sampling concentration experiment: M = round(sqrt(N)) unless
/// `m_override` is nonzero.
std::vector<ConcentrationRow> grid_concentration_experiment(TestFunction f,
                                                            std::span<const std::size_t> n_values,
                                                            std::size_t trials, Rng& rng,
                                                            std::size_t m_override = 0);

nlohmann::json to_json(const EigenReport& report);
nlohmann::json to_json(const ConcentrationRow& row);

/// Numeric tables for CSV output.
Matrix eigen_report_table(const EigenReport& report);  // index, est, true, eig err, l2, linf
Matrix concentration_table(std::span<const ConcentrationRow> rows);
Matrix phase_table(const PhaseAmplitude& pa);  // angle, phase, amplitude

}  // namespace roseland
