#include "roseland/embedders.hpp"

#include "roseland/spectral.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

namespace roseland {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void weight_coordinates(EmbeddingResult& r) {
  r.coords = diffusion_coordinates(r, r.diffusion_time);
}

void check_embed_dim(const EmbedderConfig& cfg, Index limit, const char* what) {
  if (static_cast<Index>(cfg.embed_dim) > limit) {
    throw ConfigError(std::string(what) + ": embedding dimension " + std::to_string(cfg.embed_dim) +
                      " exceeds " + std::to_string(limit));
  }
}

Vector positive_row_sums(const Matrix& w, const char* what) {
  Vector d = w.rowwise().sum();
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw ValueError(std::string(what) + ": point " + std::to_string(i) +
                       " has zero degree; increase epsilon");
    }
  }
  return d;
}

EmbeddingResult nystrom_impl(const Matrix& data, const Matrix& landmarks,
                             std::span<const Index> landmark_rows, const EmbedderConfig& cfg,
                             const Kernel& kernel) {
  const auto start = Clock::now();
  cfg.validate();
  if (data.cols() != landmarks.cols()) throw DimError("nystrom: data/landmark column mismatch");
  const Index n = data.rows();
  const Index l = landmarks.rows();
  const Index k = static_cast<Index>(cfg.embed_dim) + 1;
  if (l < k + 1) {
    throw ConfigError("nystrom: need at least embed_dim + 2 landmarks, got " + std::to_string(l));
  }

  Matrix w_l = kernel_matrix(landmarks, kernel, cfg.epsilon);
  const Vector d_l = positive_row_sums(w_l, "nystrom landmarks");
  const SymEig eig = sym_eig_stochastic(std::move(w_l), d_l, k);
  for (Index j = 0; j < k; ++j) {
    if (!(eig.values[j] > 1e-12)) {
      throw ValueError("nystrom: landmark eigenvalue " + std::to_string(j) + " is " +
                       std::to_string(eig.values[j]) + "; extension would be ill-conditioned");
    }
  }

  // Rows that are not landmarks get extended.
  std::vector<Index> landmark_of(static_cast<std::size_t>(n), -1);
  for (Index pos = 0; pos < static_cast<Index>(landmark_rows.size()); ++pos) {
    landmark_of[static_cast<std::size_t>(landmark_rows[static_cast<std::size_t>(pos)])] = pos;
  }
  std::vector<Index> rest;
  rest.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (landmark_of[static_cast<std::size_t>(i)] < 0) rest.push_back(i);
  }

  EmbeddingResult r;
  r.method = Method::Nystrom;
  r.epsilon = cfg.epsilon;
  r.diffusion_time = cfg.diffusion_time;
  r.vectors.resize(n, k);
  r.degrees.resize(n);
  for (Index i = 0; i < n; ++i) {
    const Index pos = landmark_of[static_cast<std::size_t>(i)];
    if (pos >= 0) {
      r.vectors.row(i) = eig.vectors.row(pos);
      r.degrees[i] = d_l[pos];
    }
  }
  if (!rest.empty()) {
    Matrix rest_points(static_cast<Index>(rest.size()), data.cols());
    for (std::size_t t = 0; t < rest.size(); ++t) rest_points.row(static_cast<Index>(t)) = data.row(rest[t]);
    const LandmarkAffinity e = build_landmark_affinity(rest_points, landmarks, kernel, cfg.epsilon);
    const Vector d_e = positive_row_sums(e.w, "nystrom extension");
    const Matrix ext = d_e.cwiseInverse().asDiagonal() * (e.w * eig.vectors) *
                       eig.values.cwiseInverse().asDiagonal();
    for (std::size_t t = 0; t < rest.size(); ++t) {
      r.vectors.row(rest[t]) = ext.row(static_cast<Index>(t));
      r.degrees[rest[t]] = d_e[static_cast<Index>(t)];
    }
  }
  r.spectrum.assign(eig.values.data(), eig.values.data() + k);
  weight_coordinates(r);
  r.elapsed_seconds = seconds_since(start);
  return r;
}

}  // namespace

EmbeddingResult roseland_embed(const Matrix& data, const Matrix& landmarks,
                               const EmbedderConfig& cfg, const Kernel& kernel) {
  const auto start = Clock::now();
  cfg.validate();
  check_embed_dim(cfg, landmarks.rows() - 1, "roseland");
  const Index k = static_cast<Index>(cfg.embed_dim) + 1;

  Matrix op;
  Vector degrees;
  {
    LandmarkAffinity aff = build_landmark_affinity(data, landmarks, kernel, cfg.epsilon);
    degrees = landmark_degrees(aff);
    // Scale W^(r) in place into D^{-1/2} W^(r).
    op = std::move(aff.w);
    op = degrees.cwiseSqrt().cwiseInverse().asDiagonal() * op;
  }
  const ThinSvd svd = thin_svd(op, k);

  EmbeddingResult r;
  r.method = Method::Roseland;
  r.epsilon = cfg.epsilon;
  r.diffusion_time = cfg.diffusion_time;
  r.vectors = degrees.cwiseSqrt().cwiseInverse().asDiagonal() * svd.u;
  r.spectrum.resize(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) r.spectrum[static_cast<std::size_t>(j)] = svd.s[j] * svd.s[j];
  r.degrees = std::move(degrees);
  weight_coordinates(r);
  r.elapsed_seconds = seconds_since(start);
  return r;
}

EmbeddingResult dm_embed(const Matrix& data, const EmbedderConfig& cfg, const Kernel& kernel) {
  const auto start = Clock::now();
  cfg.validate();
  const Index n = data.rows();
  if (static_cast<std::size_t>(n) > cfg.dense_cap) {
    throw CapacityError("diffusion map refuses n = " + std::to_string(n) +
                        " (dense cap " + std::to_string(cfg.dense_cap) + ")");
  }
  check_embed_dim(cfg, n - 1, "dm");
  const Index k = static_cast<Index>(cfg.embed_dim) + 1;

  Matrix w = kernel_matrix(data, kernel, cfg.epsilon);
  Vector degrees = positive_row_sums(w, "dm");
  const SymEig eig = sym_eig_stochastic(std::move(w), degrees, k);

  EmbeddingResult r;
  r.method = Method::DM;
  r.epsilon = cfg.epsilon;
  r.diffusion_time = cfg.diffusion_time;
  r.vectors = eig.vectors;
  r.spectrum.resize(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) r.spectrum[static_cast<std::size_t>(j)] = std::max(0.0, eig.values[j]);
  r.degrees = std::move(degrees);
  weight_coordinates(r);
  r.elapsed_seconds = seconds_since(start);
  return r;
}

EmbeddingResult nystrom_embed(const Matrix& data, std::span<const Index> landmark_indices,
                              const EmbedderConfig& cfg, const Kernel& kernel) {
  const Index n = data.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Matrix landmarks(static_cast<Index>(landmark_indices.size()), data.cols());
  for (std::size_t t = 0; t < landmark_indices.size(); ++t) {
    const Index i = landmark_indices[t];
    if (i < 0 || i >= n) throw IndexError("nystrom: landmark index out of range");
    if (seen[static_cast<std::size_t>(i)]++) throw ConfigError("nystrom: duplicate landmark index");
    landmarks.row(static_cast<Index>(t)) = data.row(i);
  }
  return nystrom_impl(data, landmarks, landmark_indices, cfg, kernel);
}

EmbeddingResult nystrom_embed(const Matrix& data, const Matrix& landmarks,
                              const EmbedderConfig& cfg, const Kernel& kernel) {
  return nystrom_impl(data, landmarks, {}, cfg, kernel);
}

HkcDecomposition hkc_decompose(const LandmarkAffinity& aff, Index k) {
  const Index m = aff.w.cols();
  if (k < 1 || k > m) throw DimError("hkc: requested components exceed landmark count");
  HkcDecomposition out;
  out.row_sums = positive_row_sums(aff.w, "hkc");
  const Matrix a = out.row_sums.cwiseInverse().asDiagonal() * aff.w;
  Matrix ata = Matrix::Zero(m, m);
  ata.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  ata.triangularView<Eigen::StrictlyUpper>() = ata.transpose();
  const SymEig eig = top_eigenpairs(ata, k);
  for (Index j = 0; j < k; ++j) {
    if (!(eig.values[j] > 1e-12)) {
      throw ValueError("hkc: eigenvalue " + std::to_string(j) + " is " +
                       std::to_string(eig.values[j]) + "; cannot normalize psi");
    }
  }
  out.lambda = eig.values;
  out.phi = eig.vectors;
  out.psi = a * eig.vectors * eig.values.cwiseSqrt().cwiseInverse().asDiagonal();
  return out;
}

EmbeddingResult hkc_embed(const Matrix& data, const Matrix& landmarks, const EmbedderConfig& cfg,
                          const Kernel& kernel) {
  const auto start = Clock::now();
  cfg.validate();
  check_embed_dim(cfg, landmarks.rows() - 1, "hkc");
  const Index k = static_cast<Index>(cfg.embed_dim) + 1;
  const LandmarkAffinity aff = build_landmark_affinity(data, landmarks, kernel, cfg.epsilon);
  HkcDecomposition dec = hkc_decompose(aff, k);

  EmbeddingResult r;
  r.method = Method::HKC;
  r.epsilon = cfg.epsilon;
  r.diffusion_time = cfg.diffusion_time;
  r.vectors = std::move(dec.psi);
  r.spectrum.assign(dec.lambda.data(), dec.lambda.data() + k);
  r.degrees = std::move(dec.row_sums);
  weight_coordinates(r);
  r.elapsed_seconds = seconds_since(start);
  return r;
}

Matrix diffusion_coordinates(const EmbeddingResult& result, double t) {
  const Index q = result.vectors.cols() - 1;
  if (q < 0 || static_cast<Index>(result.spectrum.size()) != q + 1) {
    throw DimError("embedding result has inconsistent vectors/spectrum");
  }
  Vector weights(q);
  for (Index j = 0; j < q; ++j) {
    weights[j] = std::pow(std::max(0.0, result.spectrum[static_cast<std::size_t>(j + 1)]), t);
  }
  return result.vectors.rightCols(q) * weights.asDiagonal();
}

double diffusion_distance(const EmbeddingResult& result, Index i, Index j, double t) {
  const Index n = result.vectors.rows();
  if (i < 0 || j < 0 || i >= n || j >= n) throw IndexError("diffusion_distance: index out of range");
  if (t == result.diffusion_time && result.coords.rows() == n) {
    return (result.coords.row(i) - result.coords.row(j)).norm();
  }
  const Index q = result.vectors.cols() - 1;
  double sum = 0.0;
  for (Index c = 0; c < q; ++c) {
    const double w = std::pow(std::max(0.0, result.spectrum[static_cast<std::size_t>(c + 1)]), t);
    const double diff = w * (result.vectors(i, c + 1) - result.vectors(j, c + 1));
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double portegies_factor(double lambda, const PortegiesOptions& opts) {
  const double d = opts.intrinsic_dim;
  return std::pow(2.0 * opts.t, (d + 2.0) / 4.0) * std::numbers::sqrt2 *
         std::pow(4.0 * std::numbers::pi, d / 4.0) * std::exp(-lambda * opts.t);
}

Matrix portegies_scale(const Matrix& vectors, std::span<const double> laplacian_eigenvalues,
                       const PortegiesOptions& opts) {
  if (static_cast<std::size_t>(vectors.cols()) != laplacian_eigenvalues.size()) {
    throw DimError("portegies_scale: one eigenvalue per column required");
  }
  if (!(opts.t > 0.0) || !(opts.volume > 0.0) || opts.intrinsic_dim < 1) {
    throw ConfigError("portegies_scale: t, volume and dimension must be positive");
  }
  const double unit = std::sqrt(static_cast<double>(vectors.rows()) / opts.volume);
  Matrix out(vectors.rows(), vectors.cols());
  for (Index j = 0; j < vectors.cols(); ++j) {
    const double norm = vectors.col(j).norm();
    const double scale = norm > 0.0 ? unit / norm : 0.0;
    out.col(j) = vectors.col(j) *
                 (scale * portegies_factor(laplacian_eigenvalues[static_cast<std::size_t>(j)], opts));
  }
  return out;
}

std::vector<double> estimated_laplacian_eigenvalues(const EmbeddingResult& result,
                                                    const KernelMoment& moment) {
  std::vector<double> out;
  for (std::size_t j = 1; j < result.spectrum.size(); ++j) {
    out.push_back(laplacian_eigenvalue_estimate(result.spectrum[j], result.epsilon, moment,
                                                operator_kind(result.method)));
  }
  return out;
}

}  // namespace roseland
