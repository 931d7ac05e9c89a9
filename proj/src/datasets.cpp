#include "roseland/datasets.hpp"

#include "roseland/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace roseland {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w >= kTwoPi ? 0.0 : w;
}

void check_sizes(std::size_t n, std::size_t ambient_dim) {
  if (n < 1) throw ConfigError("sample size must be at least 1");
  if (ambient_dim < 2) throw ConfigError("ambient dimension must be at least 2");
}

}  // namespace

DensitySpec::DensitySpec(Kind kind, std::string name, double parameter,
                         std::function<double(double)> raw)
    : kind_(kind), name_(std::move(name)), parameter_(parameter), raw_(std::move(raw)) {
  const std::size_t g = kGridKnots;
  const double h = kTwoPi / static_cast<double>(g);
  std::vector<double> values(g + 1);
  for (std::size_t k = 0; k <= g; ++k) {
    const double v = raw_(h * static_cast<double>(k));
    if (!std::isfinite(v) || v < 0.0) {
      throw DensityError("density '" + name_ + "' is negative or non-finite at theta = " +
                         std::to_string(h * static_cast<double>(k)));
    }
    values[k] = v;
  }
  auto cdf = std::make_shared<std::vector<double>>(g + 1, 0.0);
  for (std::size_t k = 0; k < g; ++k) (*cdf)[k + 1] = (*cdf)[k] + 0.5 * h * (values[k] + values[k + 1]);
  norm_ = cdf->back();
  if (!(norm_ > 0.0)) throw DensityError("density '" + name_ + "' has zero-measure support");
  for (double& c : *cdf) c /= norm_;
  cdf->back() = 1.0;
  infimum_ = *std::min_element(values.begin(), values.end()) / norm_;
  cdf_ = std::move(cdf);
}

DensitySpec DensitySpec::uniform() {
  return DensitySpec(Kind::Uniform, "uniform", 0.0, [](double) { return 1.0; });
}

DensitySpec DensitySpec::sinusoidal(double a) {
  if (!(std::abs(a) < 1.0)) throw DensityError("sinusoidal density needs |a| < 1");
  return DensitySpec(Kind::Sinusoidal, "sinusoidal", a,
                     [a](double theta) { return 1.0 + a * std::sin(theta); });
}

DensitySpec DensitySpec::tabulated(std::vector<double> values) {
  if (values.empty()) throw DensityError("tabulated density needs at least one value");
  auto table = std::make_shared<const std::vector<double>>(std::move(values));
  return DensitySpec(Kind::Tabulated, "tabulated", 0.0, [table](double theta) {
    const std::size_t k = table->size();
    const double x = wrap_angle(theta) / kTwoPi * static_cast<double>(k);
    const auto lo = std::min(static_cast<std::size_t>(x), k - 1);
    const double frac = x - static_cast<double>(lo);
    return (1.0 - frac) * (*table)[lo] + frac * (*table)[(lo + 1) % k];
  });
}

DensitySpec DensitySpec::function(std::string name, std::function<double(double)> pdf) {
  return DensitySpec(Kind::Function, std::move(name), 0.0,
                     [pdf = std::move(pdf)](double theta) { return pdf(wrap_angle(theta)); });
}

double DensitySpec::pdf(double theta) const { return raw_(wrap_angle(theta)) / norm_; }

double DensitySpec::cdf(double theta) const {
  if (theta >= kTwoPi) return 1.0;
  if (theta <= 0.0) return 0.0;
  const double x = theta / kTwoPi * static_cast<double>(kGridKnots);
  const auto k = std::min(static_cast<std::size_t>(x), kGridKnots - 1);
  const double frac = x - static_cast<double>(k);
  return (*cdf_)[k] + frac * ((*cdf_)[k + 1] - (*cdf_)[k]);
}

double DensitySpec::sample(Rng& rng) const {
  const double u = rng.uniform();
  if (kind_ == Kind::Uniform) return kTwoPi * u;
  const auto& c = *cdf_;
  auto it = std::upper_bound(c.begin(), c.end(), u);
  auto k = static_cast<std::size_t>(it - c.begin());
  k = std::clamp<std::size_t>(k, 1, kGridKnots) - 1;
  // Skip zero-mass cells so the interpolation never divides by zero.
  while (c[k + 1] <= c[k] && k + 1 < kGridKnots) ++k;
  const double width = c[k + 1] - c[k];
  const double frac = width > 0.0 ? (u - c[k]) / width : 0.0;
  const double h = kTwoPi / static_cast<double>(kGridKnots);
  return wrap_angle(h * (static_cast<double>(k) + std::clamp(frac, 0.0, 1.0)));
}

DensitySpec design_landmark_density(const DensitySpec& data_density) {
  if (!(data_density.infimum() > 0.0)) {
    throw DensityError("design density needs a data density bounded away from zero");
  }
  if (data_density.kind() == DensitySpec::Kind::Uniform) return DensitySpec::uniform();
  return DensitySpec::function("designed(" + data_density.name() + ")",
                               [base = data_density](double theta) {
                                 const double p = base.pdf(theta);
                                 if (!(p > 0.0)) throw DensityError("data density touches zero");
                                 return 1.0 / (p * p);
                               });
}

CircleSample sample_circle(std::size_t n, const DensitySpec& density, std::size_t ambient_dim,
                           Rng& rng) {
  check_sizes(n, ambient_dim);
  CircleSample s;
  s.density = density;
  s.angles.resize(n);
  s.points = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(ambient_dim));
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = density.sample(rng);
    s.angles[i] = theta;
    s.points(static_cast<Index>(i), 0) = std::cos(theta);
    s.points(static_cast<Index>(i), 1) = std::sin(theta);
  }
  return s;
}

Matrix add_gaussian_noise(const Matrix& points, double sigma_sq, Rng& rng) {
  if (!(sigma_sq >= 0.0)) throw ConfigError("noise variance must be non-negative");
  Matrix out = points;
  if (sigma_sq == 0.0) return out;
  const double sigma = std::sqrt(sigma_sq);
  for (Index k = 0; k < out.size(); ++k) out.data()[k] += sigma * rng.normal();
  return out;
}

Matrix add_uniform_noise(const Matrix& points, double sigma_sq, Rng& rng) {
  if (!(sigma_sq >= 0.0)) throw ConfigError("noise variance must be non-negative");
  Matrix out = points;
  if (sigma_sq == 0.0) return out;
  const double half = std::sqrt(3.0 * sigma_sq);
  for (Index k = 0; k < out.size(); ++k) out.data()[k] += rng.uniform(-half, half);
  return out;
}

double default_noise_variance(std::size_t ambient_dim) {
  return 1.0 / std::sqrt(static_cast<double>(ambient_dim));
}

CircleSample draw_circle(const CircleModel& model, std::size_t n, Rng& rng) {
  CircleSample s = sample_circle(n, model.density, model.ambient_dim, rng);
  switch (model.noise) {
    case NoiseKind::None:
      break;
    case NoiseKind::Gaussian:
      s.points = add_gaussian_noise(s.points, model.noise_variance, rng);
      break;
    case NoiseKind::Uniform:
      s.points = add_uniform_noise(s.points, model.noise_variance, rng);
      break;
  }
  return s;
}

PhantomSpec shepp_logan(std::size_t p) {
  const double deg = std::numbers::pi / 180.0;
  PhantomSpec spec;
  spec.p = p;
  spec.ellipses = {
      {0.0, 0.0, 0.69, 0.92, 0.0, 2.0},
      {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98},
      {0.22, 0.0, 0.11, 0.31, -18.0 * deg, -0.02},
      {-0.22, 0.0, 0.16, 0.41, 18.0 * deg, -0.02},
      {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
      {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
      {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
      {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
      {0.0, -0.605, 0.023, 0.023, 0.0, 0.01},
      {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
  };
  return spec;
}

PhantomSpec load_phantom_table(const std::filesystem::path& path, std::size_t p) {
  const Matrix table = matrix_read(path);
  if (table.cols() != 6) {
    throw FormatError("phantom table needs 6 columns (x0, y0, a, b, phi_deg, rho), got " +
                      std::to_string(table.cols()));
  }
  PhantomSpec spec;
  spec.p = p;
  for (Index r = 0; r < table.rows(); ++r) {
    if (!(table(r, 2) > 0.0) || !(table(r, 3) > 0.0)) {
      throw FormatError("phantom table row " + std::to_string(r) + " has a non-positive semi-axis");
    }
    spec.ellipses.push_back({table(r, 0), table(r, 1), table(r, 2), table(r, 3),
                             table(r, 4) * std::numbers::pi / 180.0, table(r, 5)});
  }
  return spec;
}

std::filesystem::path shepp_logan_table_path() {
  return std::filesystem::path(ROSELAND_DATA_DIR) / "shepp_logan_v1.csv";
}

std::vector<double> projection_offsets(std::size_t p) {
  if (p < 2) throw ConfigError("projection needs at least 2 offsets");
  std::vector<double> s(p);
  for (std::size_t k = 0; k < p; ++k) {
    s[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(p - 1);
  }
  return s;
}

Vector radon_projection(const PhantomSpec& spec, double theta) {
  const std::vector<double> offsets = projection_offsets(spec.p);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Vector out = Vector::Zero(static_cast<Index>(spec.p));
  for (const Ellipse& e : spec.ellipses) {
    const double shift = e.x0 * c + e.y0 * s;
    const double gc = std::cos(theta - e.phi);
    const double gs = std::sin(theta - e.phi);
    const double alpha2 = e.a * e.a * gc * gc + e.b * e.b * gs * gs;
    const double scale = 2.0 * e.rho * e.a * e.b / alpha2;
    for (std::size_t k = 0; k < spec.p; ++k) {
      const double t = offsets[k] - shift;
      const double under = alpha2 - t * t;
      if (under > 0.0) out[static_cast<Index>(k)] += scale * std::sqrt(under);
    }
  }
  return out;
}

PhantomDataset phantom_radon_dataset(std::size_t n, const PhantomSpec& spec, Rng& rng) {
  if (n < 1) throw ConfigError("phantom dataset needs n >= 1");
  if (spec.p < 2) throw ConfigError("phantom dataset needs p >= 2");
  PhantomDataset out;
  out.angles.resize(n);
  for (auto& a : out.angles) a = kTwoPi * rng.uniform();
  out.projections.resize(static_cast<Index>(n), static_cast<Index>(spec.p));
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(n); ++i) {
    out.projections.row(i) = radon_projection(spec, out.angles[static_cast<std::size_t>(i)]).transpose();
  }
  return out;
}

std::string_view to_string(LandmarkMode mode) {
  switch (mode) {
    case LandmarkMode::RandomSubset:
      return "random_subset";
    case LandmarkMode::IidFromDensity:
      return "iid_from_density";
    case LandmarkMode::IndependentSample:
      return "independent_sample";
  }
  return "unknown";
}

LandmarkMode parse_landmark_mode(std::string_view name) {
  std::string key(name);
  for (char& ch : key) ch = ch == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (key == "random_subset" || key == "subset") return LandmarkMode::RandomSubset;
  if (key == "iid_from_density" || key == "density" || key == "designed") return LandmarkMode::IidFromDensity;
  if (key == "independent_sample" || key == "independent") return LandmarkMode::IndependentSample;
  throw ConfigError("unknown landmark mode '" + std::string(name) + "'");
}

LandmarkSelection pick_landmark_subset(const Matrix& data, std::size_t m, Rng& rng) {
  const auto n = static_cast<std::size_t>(data.rows());
  if (m < 1 || m > n) {
    throw ConfigError("subset landmarks need 1 <= m <= n (m = " + std::to_string(m) +
                      ", n = " + std::to_string(n) + ")");
  }
  std::vector<Index> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<Index>(i);
  // Partial Fisher-Yates: the first m slots are a uniform m-subset in random order.
  for (std::size_t i = 0; i < m; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
  LandmarkSelection sel;
  sel.indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m));
  sel.points.resize(static_cast<Index>(m), data.cols());
  for (std::size_t k = 0; k < m; ++k) sel.points.row(static_cast<Index>(k)) = data.row(sel.indices[k]);
  return sel;
}

LandmarkSelection pick_landmarks_from_density(const DensitySpec& density, std::size_t m,
                                              std::size_t ambient_dim, Rng& rng) {
  CircleSample s = sample_circle(m, density, ambient_dim, rng);
  LandmarkSelection sel;
  sel.points = std::move(s.points);
  sel.angles = std::move(s.angles);
  return sel;
}

LandmarkSelection pick_independent_landmarks(const CircleModel& model, std::size_t m, Rng& rng) {
  CircleSample s = draw_circle(model, m, rng);
  LandmarkSelection sel;
  sel.points = std::move(s.points);
  sel.angles = std::move(s.angles);
  return sel;
}

}  // namespace roseland
