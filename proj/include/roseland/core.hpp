#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace roseland {

/// Dense row-major storage; points are rows.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error hierarchy. Each class maps to one failure family so the CLI can
// translate it into a stable exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class IoError : public Error {
 public:
  using Error::Error;
};
class FormatError : public Error {
 public:
  using Error::Error;
};
class ValueError : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class DimError : public Error {
 public:
  using Error::Error;
};
class ConvergenceError : public Error {
 public:
  using Error::Error;
};
class CapacityError : public Error {
 public:
  using Error::Error;
};
class QuadratureError : public Error {
 public:
  using Error::Error;
};
class DensityError : public Error {
 public:
  using Error::Error;
};
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Throws ValueError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

struct LandmarkCount {
  std::size_t m = 0;
};
struct LandmarkExponent {
  double beta = 0.5;
};
/// Either an explicit landmark count or an exponent with m = round(n^beta).
using LandmarkSpec = std::variant<LandmarkCount, LandmarkExponent>;

/// Resolves the landmark count for n points. Rounds half away from zero.
std::size_t resolve_landmark_count(std::size_t n, const LandmarkSpec& spec);

enum class Method { Roseland, DM, Nystrom, HKC };

std::string_view to_string(Method method);
/// Accepts "roseland", "dm", "nystrom", "hkc" (case-insensitive).
Method parse_method(std::string_view name);

struct EmbedderConfig {
  double epsilon = 0.0;        // kernel bandwidth, squared-distance units
  double diffusion_time = 1.0; // t
  std::size_t embed_dim = 2;   // q'
  LandmarkSpec landmarks = LandmarkExponent{0.5};
  std::size_t dense_cap = 20000;  // DM refuses above this many points

  /// Checks the scalar invariants (epsilon, t, q', beta range).
  void validate() const;
};

struct EmbeddingResult {
  Matrix coords;                  // n x q', diffusion-weighted
  std::vector<double> spectrum;   // q'+1 values, trivial one first
  Vector degrees;                 // n
  Matrix vectors;                 // n x (q'+1) unweighted eigenvectors, trivial first
  Method method = Method::Roseland;
  double epsilon = 0.0;
  double diffusion_time = 0.0;
  double elapsed_seconds = 0.0;
};

}  // namespace roseland
