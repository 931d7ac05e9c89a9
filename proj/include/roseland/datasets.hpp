#pragma once

#include "roseland/core.hpp"
#include "roseland/rng.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace roseland {

/// Probability density on the circle [0, 2pi).
///
/// The unnormalized pdf is tabulated on a 10^4-knot grid at construction; the
/// grid carries the normalization and the inverse CDF used for sampling.
class DensitySpec {
 public:
  enum class Kind { Uniform, Sinusoidal, Tabulated, Function };

  static constexpr std::size_t kGridKnots = 10000;

  static DensitySpec uniform();
  /// p(theta) proportional to 1 + a sin(theta), |a| < 1.
  static DensitySpec sinusoidal(double a = 0.5);
  /// Values at equally spaced angles 2 pi k / K, interpolated linearly and
  /// periodically.
  static DensitySpec tabulated(std::vector<double> values);
  static DensitySpec function(std::string name, std::function<double(double)> pdf);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  /// Sinusoidal amplitude a (0 for other kinds).
  [[nodiscard]] double parameter() const { return parameter_; }

  /// Normalized density, integrates to 1 over [0, 2pi).
  [[nodiscard]] double pdf(double theta) const;
  [[nodiscard]] double cdf(double theta) const;
  /// Smallest value of the normalized pdf over the grid.
  [[nodiscard]] double infimum() const { return infimum_; }
  [[nodiscard]] double sample(Rng& rng) const;

 private:
  DensitySpec(Kind kind, std::string name, double parameter, std::function<double(double)> raw);

  Kind kind_;
  std::string name_;
  double parameter_ = 0.0;
  std::function<double(double)> raw_;
  double norm_ = 1.0;
  double infimum_ = 0.0;
  std::shared_ptr<const std::vector<double>> cdf_;  // kGridKnots + 1 cumulative masses
};

/// q(theta) proportional to 1 / p(theta)^2. Throws DensityError when p
/// touches zero.
DensitySpec design_landmark_density(const DensitySpec& data_density);

struct CircleSample {
  std::vector<double> angles;
  Matrix points;  // n x p, first two columns (cos, sin)
  DensitySpec density = DensitySpec::uniform();
};

/// Angles i.i.d. from `density`, embedded as (cos, sin, 0, ..., 0) in R^p.
CircleSample sample_circle(std::size_t n, const DensitySpec& density, std::size_t ambient_dim,
                           Rng& rng);

/// Adds i.i.d. N(0, sigma_sq) to every entry.
Matrix add_gaussian_noise(const Matrix& points, double sigma_sq, Rng& rng);

/// Adds i.i.d. uniform noise on [-sqrt(3 sigma_sq), sqrt(3 sigma_sq)], which
/// has variance sigma_sq.
Matrix add_uniform_noise(const Matrix& points, double sigma_sq, Rng& rng);

/// Per-coordinate variance of the noisy-circle setting: 1 / sqrt(p).
double default_noise_variance(std::size_t ambient_dim);

enum class NoiseKind { None, Gaussian, Uniform };

/// Data-generating process for (possibly noisy) circle samples.
struct CircleModel {
  DensitySpec density = DensitySpec::uniform();
  std::size_t ambient_dim = 2;
  NoiseKind noise = NoiseKind::None;
  double noise_variance = 0.0;
};

CircleSample draw_circle(const CircleModel& model, std::size_t n, Rng& rng);

struct Ellipse {
  double x0 = 0.0;
  double y0 = 0.0;
  double a = 1.0;    // semi-axis along the rotated x direction
  double b = 1.0;
  double phi = 0.0;  // rotation, radians
  double rho = 1.0;  // additive intensity
};

struct PhantomSpec {
  std::vector<Ellipse> ellipses;
  std::size_t p = 128;  // offsets per projection, equally spaced in [-1, 1]
};

/// Ten-ellipse Shepp-Logan phantom with the original intensities.
PhantomSpec shepp_logan(std::size_t p = 128);

/// Reads an ellipse table with columns x0, y0, a, b, phi_degrees, rho.
PhantomSpec load_phantom_table(const std::filesystem::path& path, std::size_t p = 128);

/// Path of the bundled Shepp-Logan table.
std::filesystem::path shepp_logan_table_path();

std::vector<double> projection_offsets(std::size_t p);

/// Radon transform along lines {x : <x, (cos theta, sin theta)> = s}.
Vector radon_projection(const PhantomSpec& spec, double theta);

struct PhantomDataset {
  std::vector<double> angles;
  Matrix projections;  // n x p
};

/// n projection angles uniform on [0, 2pi) and their analytic projections.
PhantomDataset phantom_radon_dataset(std::size_t n, const PhantomSpec& spec, Rng& rng);

enum class LandmarkMode { RandomSubset, IidFromDensity, IndependentSample };

std::string_view to_string(LandmarkMode mode);
LandmarkMode parse_landmark_mode(std::string_view name);

struct LandmarkSelection {
  Matrix points;               // m x q
  std::vector<Index> indices;  // data rows, subset mode only
  std::vector<double> angles;  // circle modes only
};

/// m distinct data rows, uniformly without replacement.
LandmarkSelection pick_landmark_subset(const Matrix& data, std::size_t m, Rng& rng);

/// m clean circle points with angles i.i.d. from `density`.
LandmarkSelection pick_landmarks_from_density(const DensitySpec& density, std::size_t m,
                                              std::size_t ambient_dim, Rng& rng);

/// m fresh draws from the data-generating process, noise included.
LandmarkSelection pick_independent_landmarks(const CircleModel& model, std::size_t m, Rng& rng);

}  // namespace roseland
