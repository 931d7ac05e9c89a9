#include "roseland/eval.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace roseland {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> ranks_on_circle(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    out[order[r]] = kTwoPi * static_cast<double>(r) / static_cast<double>(n);
  }
  return out;
}

// Column indices of the analytic eigenspace containing column j.
std::pair<Index, Index> eigenspace_of(Index j) {
  if (j == 0) return {0, 1};
  const Index first = 2 * ((j + 1) / 2) - 1;
  return {first, first + 2};
}

}  // namespace

Matrix CircleGroundTruth::unit_columns() const {
  Matrix out = functions;
  for (Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm > 0.0) out.col(j) /= norm;
  }
  return out;
}

double circle_eigenvalue(Index j) {
  const double k = static_cast<double>((j + 1) / 2);
  return k * k;
}

CircleGroundTruth circle_ground_truth(int k_max, std::span<const double> angles) {
  if (k_max < 1) throw ConfigError("circle ground truth needs k_max >= 1");
  CircleGroundTruth gt;
  gt.k_max = k_max;
  const Index cols = 2 * k_max + 1;
  for (Index j = 0; j < cols; ++j) gt.eigenvalues.push_back(circle_eigenvalue(j));
  const double c0 = 1.0 / std::sqrt(kTwoPi);
  const double ck = 1.0 / std::sqrt(std::numbers::pi);
  gt.functions.resize(static_cast<Index>(angles.size()), cols);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const auto r = static_cast<Index>(i);
    gt.functions(r, 0) = c0;
    for (int k = 1; k <= k_max; ++k) {
      gt.functions(r, 2 * k - 1) = ck * std::cos(k * angles[i]);
      gt.functions(r, 2 * k) = ck * std::sin(k * angles[i]);
    }
  }
  return gt;
}

EigenReport align_and_score(const Matrix& vectors, std::span<const double> spectral_values,
                            const CircleGroundTruth& truth, double epsilon,
                            const KernelMoment& moment, OperatorKind kind) {
  if (vectors.rows() != truth.functions.rows()) {
    throw DimError("estimated vectors and ground truth have different point counts");
  }
  if (static_cast<std::size_t>(vectors.cols()) != spectral_values.size()) {
    throw DimError("one spectral value per estimated vector required");
  }
  const Index k = std::min(vectors.cols(), truth.functions.cols());
  const Matrix t_unit = truth.unit_columns();

  EigenReport rep;
  rep.aligned.resize(vectors.rows(), k);
  for (Index j = 0; j < k; ++j) {
    const double norm = vectors.col(j).norm();
    if (!(norm > 0.0)) throw ValueError("estimated eigenvector " + std::to_string(j) + " is zero");
    rep.aligned.col(j) = vectors.col(j) / norm;
  }

  for (Index start = 0; start < k;) {
    auto [lo, hi] = eigenspace_of(start);
    const Index est_hi = std::min(hi, k);
    const Index g = est_hi - lo;
    const auto t_block = t_unit.middleCols(lo, hi - lo);
    if (g == hi - lo) {
      // Orthogonal Procrustes: rotate estimates onto the truth block.
      const Eigen::MatrixXd cross = rep.aligned.middleCols(lo, g).transpose() * t_block;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::MatrixXd q = svd.matrixU() * svd.matrixV().transpose();
      const Matrix rotated = rep.aligned.middleCols(lo, g) * q;
      rep.aligned.middleCols(lo, g) = rotated;
    }
    start = hi;
  }

  for (Index j = 0; j < k; ++j) {
    auto [lo, hi] = eigenspace_of(j);
    Vector target;
    if (hi <= k) {
      target = t_unit.col(j);
    } else {
      // Only part of the eigenspace was estimated: compare with the closest
      // unit vector in the analytic span.
      const Vector c = t_unit.middleCols(lo, hi - lo).transpose() * rep.aligned.col(j);
      target = t_unit.middleCols(lo, hi - lo) * c;
      const double tn = target.norm();
      if (tn > 0.0) target /= tn;
    }
    if (target.dot(rep.aligned.col(j)) < 0.0) rep.aligned.col(j) *= -1.0;
    const Vector diff = rep.aligned.col(j) - target;
    rep.l2_error.push_back(diff.norm() / target.norm());
    rep.linf_error.push_back(diff.cwiseAbs().maxCoeff() / target.cwiseAbs().maxCoeff());

    const double est = laplacian_eigenvalue_estimate(spectral_values[static_cast<std::size_t>(j)],
                                                     epsilon, moment, kind);
    const double tru = truth.eigenvalues[static_cast<std::size_t>(j)];
    rep.estimated_eigenvalues.push_back(est);
    rep.true_eigenvalues.push_back(tru);
    rep.eigenvalue_error.push_back(std::abs(est - tru) / std::max(tru, 1.0));
  }
  return rep;
}

EigenReport align_and_score(const EmbeddingResult& result, const CircleGroundTruth& truth,
                            const KernelMoment& moment) {
  return align_and_score(result.vectors, result.spectrum, truth, result.epsilon, moment,
                         operator_kind(result.method));
}

PhaseAmplitude phase_amplitude(std::span<const double> v1, std::span<const double> v2,
                               std::span<const double> true_angles) {
  const std::size_t n = true_angles.size();
  if (v1.size() != n || v2.size() != n) throw DimError("phase_amplitude: length mismatch");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return true_angles[a] < true_angles[b]; });
  PhaseAmplitude pa;
  pa.angles.reserve(n);
  pa.phase.reserve(n);
  pa.amplitude.reserve(n);
  for (std::size_t i : order) {
    double phase = 0.0;
    if (v1[i] != 0.0 || v2[i] != 0.0) {
      phase = std::atan2(v1[i], v2[i]);
      if (phase < 0.0) phase += kTwoPi;
      if (phase >= kTwoPi) phase = 0.0;
    }
    pa.angles.push_back(true_angles[i]);
    pa.phase.push_back(phase);
    pa.amplitude.push_back(std::hypot(v1[i], v2[i]));
  }
  return pa;
}

double coefficient_of_variation(std::span<const double> values) {
  if (values.empty()) throw DimError("coefficient of variation of an empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  if (mean == 0.0) throw ValueError("coefficient of variation with zero mean");
  return std::sqrt(ss / n) / std::abs(mean);
}

double circular_rank_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimError("circular_rank_correlation: length mismatch");
  if (a.size() < 2) throw DimError("circular_rank_correlation needs at least two points");
  const std::vector<double> ra = ranks_on_circle(a);
  const std::vector<double> rb = ranks_on_circle(b);
  std::complex<double> same{0.0, 0.0};
  std::complex<double> flip{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    same += std::polar(1.0, ra[i] - rb[i]);
    flip += std::polar(1.0, ra[i] + rb[i]);
  }
  const double n = static_cast<double>(a.size());
  return std::max(std::norm(same), std::norm(flip)) / (n * n);
}

double arc_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

Matrix geodesic_embedding(const EmbeddingResult& result, EigenvalueSource source,
                          const KernelMoment& moment, const PortegiesOptions& opts) {
  const Index q = result.vectors.cols() - 1;
  if (q < 1) throw DimError("geodesic embedding needs at least one non-trivial vector");
  std::vector<double> lambdas;
  if (source == EigenvalueSource::Estimated) {
    lambdas = estimated_laplacian_eigenvalues(result, moment);
  } else {
    for (Index j = 1; j <= q; ++j) lambdas.push_back(circle_eigenvalue(j));
  }
  return portegies_scale(result.vectors.rightCols(q), lambdas, opts);
}

Matrix geodesic_error_table(const Matrix& coords, std::span<const double> angles,
                            std::size_t k_max, NeighborMode mode) {
  const std::size_t n = angles.size();
  if (static_cast<std::size_t>(coords.rows()) != n) throw DimError("geodesic: coords/angles mismatch");
  if (k_max < 1 || k_max >= n) throw ConfigError("neighbor rank K must satisfy 1 <= K < n");
  Matrix errors(static_cast<Index>(n), static_cast<Index>(k_max));

  std::vector<std::size_t> order(n);
  std::vector<std::size_t> pos(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return angles[a] < angles[b]; });
  for (std::size_t r = 0; r < n; ++r) pos[order[r]] = r;

  bool zero_distance = false;
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : zero_distance)
  for (Index ii = 0; ii < static_cast<Index>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    std::vector<std::size_t> neighbors;
    neighbors.reserve(k_max);
    if (mode == NeighborMode::Geodesic) {
      // Merge the two directions around the sorted circle.
      std::size_t left = 1;
      std::size_t right = 1;
      while (neighbors.size() < k_max) {
        const std::size_t l = order[(pos[i] + n - left % n) % n];
        const std::size_t r = order[(pos[i] + right) % n];
        if (arc_distance(angles[i], angles[r]) <= arc_distance(angles[i], angles[l])) {
          neighbors.push_back(r);
          ++right;
        } else {
          neighbors.push_back(l);
          ++left;
        }
      }
    } else {
      std::vector<std::pair<double, std::size_t>> dist;
      dist.reserve(n - 1);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) dist.emplace_back((coords.row(ii) - coords.row(static_cast<Index>(j))).squaredNorm(), j);
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_max), dist.end());
      for (std::size_t k = 0; k < k_max; ++k) neighbors.push_back(dist[k].second);
    }
    for (std::size_t k = 0; k < k_max; ++k) {
      const std::size_t j = neighbors[k];
      const double truth = arc_distance(angles[i], angles[j]);
      const double est = (coords.row(ii) - coords.row(static_cast<Index>(j))).norm();
      if (!(truth > 0.0)) zero_distance = true;
      errors(ii, static_cast<Index>(k)) = truth > 0.0 ? std::abs(est - truth) / truth : 0.0;
    }
  }
  if (zero_distance) throw ValueError("duplicate angles: a K-th neighbor has zero geodesic distance");
  return errors;
}

std::vector<double> geodesic_recovery_error(const Matrix& coords, std::span<const double> angles,
                                            std::size_t k, NeighborMode mode) {
  const Matrix table = geodesic_error_table(coords, angles, k, mode);
  std::vector<double> out(static_cast<std::size_t>(table.rows()));
  for (Index i = 0; i < table.rows(); ++i) out[static_cast<std::size_t>(i)] = table(i, table.cols() - 1);
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DimError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("quantile level must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

std::string_view to_string(TestFunction f) {
  return f == TestFunction::Product ? "product" : "bump";
}

TestFunction parse_test_function(std::string_view name) {
  std::string key(name);
  for (char& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (key == "product" || key == "xy") return TestFunction::Product;
  if (key == "bump") return TestFunction::Bump;
  throw ConfigError("unknown test function '" + std::string(name) + "'");
}

double test_function_value(TestFunction f, double x, double y) {
  if (f == TestFunction::Product) return x * y;
  const double a = y - 0.5;
  const double b = x - y;
  return 100.0 * std::exp(-100.0 * (a * a + b * b));
}

double test_function_expectation(TestFunction f) {
  if (f == TestFunction::Product) return 9.0;
  // The x-integral of the bump over [0, 1] has a closed form in erf.
  const double c = std::sqrt(std::numbers::pi) / 20.0;
  auto inner = [c](double y) {
    const double a = y - 0.5;
    return 100.0 * std::exp(-100.0 * a * a) * c * (std::erf(10.0 * (1.0 - y)) + std::erf(10.0 * y));
  };
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(inner, 0.0, 1.0, 20, 1e-13, &err);
  if (!(err <= 1e-8 * std::abs(value))) throw QuadratureError("bump expectation did not converge");
  return value;
}

std::vector<ConcentrationRow> grid_concentration_experiment(TestFunction f,
                                                            std::span<const std::size_t> n_values,
                                                            std::size_t trials, Rng& rng,
                                                            std::size_t m_override) {
  if (trials < 2) throw ConfigError("concentration experiment needs at least 2 trials");
  const double truth = test_function_expectation(f);
  const double hi = f == TestFunction::Product ? 6.0 : 1.0;
  std::vector<ConcentrationRow> rows;
  for (std::size_t vi = 0; vi < n_values.size(); ++vi) {
    const std::size_t n = n_values[vi];
    const std::size_t m = m_override > 0 ? m_override
                                         : static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (n < 1 || m < 1 || m > n) throw ConfigError("concentration experiment needs 1 <= M <= N");
    std::vector<double> e_m(trials), e_n(trials), e_g(trials), signed_g(trials);
#pragma omp parallel for schedule(dynamic, 1)
    for (Index tt = 0; tt < static_cast<Index>(trials); ++tt) {
      const auto t = static_cast<std::size_t>(tt);
      Rng local = rng.split(vi * 0x100000000ULL + t);
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = local.uniform(0.0, hi);
        y[i] = local.uniform(0.0, hi);
      }
      double sum_n = 0.0;
      double sum_m = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = test_function_value(f, x[i], y[i]);
        sum_n += v;
        if (i < m) sum_m += v;
      }
      double sum_g = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) sum_g += test_function_value(f, x[i], y[j]);
      }
      const double grid = sum_g / (static_cast<double>(n) * static_cast<double>(m));
      e_m[t] = std::abs(sum_m / static_cast<double>(m) - truth) / std::abs(truth);
      e_n[t] = std::abs(sum_n / static_cast<double>(n) - truth) / std::abs(truth);
      signed_g[t] = (grid - truth) / std::abs(truth);
      e_g[t] = std::abs(signed_g[t]);
    }
    const double tr = static_cast<double>(trials);
    ConcentrationRow row;
    row.n = n;
    row.m = m;
    row.trials = trials;
    row.error_iid_m = std::accumulate(e_m.begin(), e_m.end(), 0.0) / tr;
    row.error_iid_n = std::accumulate(e_n.begin(), e_n.end(), 0.0) / tr;
    row.error_grid = std::accumulate(e_g.begin(), e_g.end(), 0.0) / tr;
    row.grid_signed_mean = std::accumulate(signed_g.begin(), signed_g.end(), 0.0) / tr;
    double ss = 0.0;
    for (double v : signed_g) ss += (v - row.grid_signed_mean) * (v - row.grid_signed_mean);
    row.grid_signed_se = std::sqrt(ss / (tr - 1.0) / tr);
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json to_json(const EigenReport& report) {
  return {{"estimated_eigenvalues", report.estimated_eigenvalues},
          {"true_eigenvalues", report.true_eigenvalues},
          {"eigenvalue_relative_error", report.eigenvalue_error},
          {"eigenvector_l2_relative_error", report.l2_error},
          {"eigenvector_linf_relative_error", report.linf_error}};
}

nlohmann::json to_json(const ConcentrationRow& row) {
  return {{"N", row.n},
          {"M", row.m},
          {"trials", row.trials},
          {"error_iid_M", row.error_iid_m},
          {"error_iid_N", row.error_iid_n},
          {"error_grid", row.error_grid},
          {"grid_signed_mean", row.grid_signed_mean},
          {"grid_signed_se", row.grid_signed_se}};
}

Matrix eigen_report_table(const EigenReport& report) {
  const auto k = static_cast<Index>(report.l2_error.size());
  Matrix t(k, 6);
  for (Index j = 0; j < k; ++j) {
    const auto u = static_cast<std::size_t>(j);
    t.row(j) << static_cast<double>(j), report.estimated_eigenvalues[u], report.true_eigenvalues[u],
        report.eigenvalue_error[u], report.l2_error[u], report.linf_error[u];
  }
  return t;
}

Matrix concentration_table(std::span<const ConcentrationRow> rows) {
  Matrix t(static_cast<Index>(rows.size()), 7);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& c = rows[r];
    t.row(static_cast<Index>(r)) << static_cast<double>(c.n), static_cast<double>(c.m), c.error_iid_m,
        c.error_iid_n, c.error_grid, c.grid_signed_mean, c.grid_signed_se;
  }
  return t;
}

Matrix phase_table(const PhaseAmplitude& pa) {
  Matrix t(static_cast<Index>(pa.angles.size()), 3);
  for (std::size_t i = 0; i < pa.angles.size(); ++i) {
    t.row(static_cast<Index>(i)) << pa.angles[i], pa.phase[i], pa.amplitude[i];
  }
  return t;
}

}  // namespace roseland
