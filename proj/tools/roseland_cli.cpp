// Command-line front end: generate, embed, eval, bench and landmark.
//
// Exit codes: 0 success, 2 usage/configuration, 3 numeric failure,
// 4 capacity refusal, 5 missing or unreadable input.

#include "roseland/affinity.hpp"
#include "roseland/bench.hpp"
#include "roseland/datasets.hpp"
#include "roseland/embedders.hpp"
#include "roseland/eval.hpp"
#include "roseland/matrix_io.hpp"
#include "roseland/plot.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace roseland;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kNumeric = 3, kCapacity = 4, kInput = 5 };

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
  return fs::path(prefix + suffix);
}

void write_json(const json& j, const fs::path& path) { write_text_file(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("'" + path.string() + "': " + e.what());
  }
}

Matrix column(std::span<const double> v) {
  Matrix m(static_cast<Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Index>(i), 0) = v[i];
  return m;
}

std::vector<double> column_values(const Matrix& m, Index c) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, c);
  return out;
}

std::vector<double> read_angles(const std::string& path) {
  if (path.empty()) throw IoError("ground-truth angles are required (--angles)");
  if (!fs::exists(path)) throw IoError("angles file '" + path + "' does not exist");
  const Matrix a = matrix_read(path);
  if (a.cols() != 1) throw FormatError("angles file must have one column");
  return column_values(a, 0);
}

// ---------------------------------------------------------------- generate

struct DensityArgs {
  std::string kind = "uniform";
  double a = 0.5;
  std::string table;

  [[nodiscard]] DensitySpec build() const {
    if (kind == "uniform") return DensitySpec::uniform();
    if (kind == "sinusoidal") return DensitySpec::sinusoidal(a);
    if (kind == "tabulated") {
      if (table.empty()) throw ConfigError("--density tabulated needs --density-table");
      const Matrix t = matrix_read(table);
      std::vector<double> values(t.data(), t.data() + t.size());
      return DensitySpec::tabulated(std::move(values));
    }
    throw ConfigError("unknown density '" + kind + "'");
  }
};

void add_density_options(CLI::App* sub, DensityArgs& d) {
  sub->add_option("--density", d.kind, "uniform | sinusoidal | tabulated")
      ->check(CLI::IsMember({"uniform", "sinusoidal", "tabulated"}));
  sub->add_option("--density-a", d.a, "amplitude a of p ~ 1 + a sin(theta)");
  sub->add_option("--density-table", d.table, "single-column CSV of pdf values on an even grid");
}

struct GenerateArgs {
  std::string kind;
  std::size_t n = 0;
  std::optional<std::size_t> p;
  std::uint64_t seed = 0;
  DensityArgs density;
  std::optional<double> noise_variance;
  std::string noise = "gaussian";
  std::string out;
  std::string angles_out;
};

int cmd_generate(const GenerateArgs& g) {
  if (g.n < 1) throw ConfigError("--n must be at least 1");
  Rng rng(g.seed);
  Matrix points;
  std::vector<double> angles;
  if (g.kind == "phantom") {
    const std::size_t p = g.p.value_or(128);
    PhantomSpec spec = load_phantom_table(shepp_logan_table_path(), p);
    PhantomDataset ds = phantom_radon_dataset(g.n, spec, rng);
    points = std::move(ds.projections);
    angles = std::move(ds.angles);
  } else {
    CircleModel model;
    model.density = g.density.build();
    model.ambient_dim = g.p.value_or(g.kind == "circle-noisy" ? 100 : 2);
    if (g.kind == "circle-noisy") {
      model.noise = g.noise == "uniform" ? NoiseKind::Uniform : NoiseKind::Gaussian;
      model.noise_variance = g.noise_variance.value_or(default_noise_variance(model.ambient_dim));
    } else if (g.noise_variance && *g.noise_variance > 0.0) {
      throw ConfigError("noise options apply to circle-noisy only");
    }
    CircleSample s = draw_circle(model, g.n, rng);
    points = std::move(s.points);
    angles = std::move(s.angles);
  }
  matrix_write(points, g.out, format_for_path(g.out));
  fs::path angles_path = g.angles_out;
  if (angles_path.empty()) {
    angles_path = fs::path(g.out).replace_extension("").string() + ".angles.csv";
  }
  matrix_write(column(angles), angles_path, format_for_path(angles_path));
  std::cout << "wrote " << points.rows() << "x" << points.cols() << " matrix to " << g.out
            << " and angles to " << angles_path.string() << "\n";
  return kOk;
}

// ------------------------------------------------------------------- embed

struct EmbedArgs {
  std::string method = "roseland";
  std::string data;
  std::size_t n = 0;
  std::size_t p = 2;
  std::string landmarks;
  std::optional<std::size_t> m;
  double beta = 0.5;
  std::optional<double> epsilon;
  double epsilon_scale = 0.05;
  double t = 1.0;
  std::size_t qprime = 2;
  std::uint64_t seed = 0;
  std::size_t dense_cap = 20000;
  std::string out;
  bool plot = false;
  std::string labels;
};

int cmd_embed(const EmbedArgs& e) {
  const Method method = parse_method(e.method);
  EmbedderConfig cfg;
  cfg.diffusion_time = e.t;
  cfg.embed_dim = e.qprime;
  cfg.dense_cap = e.dense_cap;
  if (e.m) {
    cfg.landmarks = LandmarkCount{*e.m};
  } else {
    cfg.landmarks = LandmarkExponent{e.beta};
  }

  Rng rng(e.seed);
  Matrix data;
  std::vector<double> generated_angles;
  if (!e.data.empty()) {
    if (!fs::exists(e.data)) throw IoError("data file '" + e.data + "' does not exist");
    data = matrix_read(e.data);
  } else {
    if (e.n < 2) throw ConfigError("give --data or --n >= 2");
    if (method == Method::DM && e.n > e.dense_cap) {
      throw CapacityError("diffusion map refuses n = " + std::to_string(e.n) + " (dense cap " +
                          std::to_string(e.dense_cap) + ")");
    }
    CircleSample s = sample_circle(e.n, DensitySpec::uniform(), e.p, rng);
    data = std::move(s.points);
    generated_angles = std::move(s.angles);
  }
  const auto n = static_cast<std::size_t>(data.rows());
  if (method == Method::DM && n > e.dense_cap) {
    throw CapacityError("diffusion map refuses n = " + std::to_string(n) + " (dense cap " +
                        std::to_string(e.dense_cap) + ")");
  }

  LandmarkSelection sel;
  std::string landmark_source;
  if (!e.landmarks.empty()) {
    if (!fs::exists(e.landmarks)) throw IoError("landmark file '" + e.landmarks + "' does not exist");
    sel.points = matrix_read(e.landmarks);
    landmark_source = e.landmarks;
  } else if (method != Method::DM) {
    Rng pick = rng.split(17);
    sel = pick_landmark_subset(data, resolve_landmark_count(n, cfg.landmarks), pick);
    landmark_source = "random_subset";
  }

  double epsilon_scale = e.epsilon_scale;
  if (e.epsilon) {
    cfg.epsilon = *e.epsilon;
    epsilon_scale = 0.0;
  } else {
    cfg.epsilon = median_bandwidth(data, method == Method::DM ? data : sel.points, e.epsilon_scale);
  }
  cfg.validate();

  EmbeddingResult r;
  switch (method) {
    case Method::Roseland:
      r = roseland_embed(data, sel.points, cfg);
      break;
    case Method::DM:
      r = dm_embed(data, cfg);
      break;
    case Method::Nystrom:
      r = sel.indices.empty() ? nystrom_embed(data, sel.points, cfg)
                              : nystrom_embed(data, std::span<const Index>(sel.indices), cfg);
      break;
    case Method::HKC:
      r = hkc_embed(data, sel.points, cfg);
      break;
  }

  matrix_write(r.coords, with_suffix(e.out, ".coords.csv"), MatrixFormat::Csv);
  matrix_write(column(r.spectrum), with_suffix(e.out, ".spectrum.csv"), MatrixFormat::Csv);
  matrix_write(r.vectors, with_suffix(e.out, ".vectors.csv"), MatrixFormat::Csv);
  if (!generated_angles.empty()) {
    matrix_write(column(generated_angles), with_suffix(e.out, ".angles.csv"), MatrixFormat::Csv);
  }
  json meta = {{"method", std::string(to_string(method))},
               {"n", n},
               {"m", sel.points.rows()},
               {"landmarks", landmark_source},
               {"epsilon", r.epsilon},
               {"epsilon_scale", epsilon_scale},
               {"diffusion_time", r.diffusion_time},
               {"qprime", cfg.embed_dim},
               {"seed", e.seed},
               {"elapsed_seconds", r.elapsed_seconds},
               {"spectrum", r.spectrum},
               {"threads", omp_get_max_threads()}};
  if (!e.data.empty()) meta["data"] = e.data;
  write_json(meta, with_suffix(e.out, ".meta.json"));

  if (e.plot && r.coords.cols() >= 2) {
    PlotSeries s;
    s.label = std::string(to_string(method));
    s.x = column_values(r.coords, 0);
    s.y = column_values(r.coords, 1);
    if (!e.labels.empty()) {
      s.color_values = column_values(matrix_read(e.labels), 0);
    } else if (!generated_angles.empty()) {
      s.color_values = generated_angles;
    }
    PlotOptions opts;
    opts.title = std::string(to_string(method)) + " embedding";
    opts.x_label = "coordinate 1";
    opts.y_label = "coordinate 2";
    write_text_file(with_suffix(e.out, ".svg"), svg_plot(std::span<const PlotSeries>(&s, 1), opts));
  }
  std::cout << to_string(method) << ": n=" << n << " m=" << sel.points.rows() << " eps=" << r.epsilon
            << " elapsed=" << r.elapsed_seconds << "s -> " << e.out << ".*\n";
  return kOk;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string kind;
  std::string embedding;
  std::string angles;
  int kmax = 9;
  int dim = 1;
  std::size_t neighbors = 50;
  std::string eigenvalues = "estimated";
  std::string neighbor_mode = "geodesic";
  double portegies_t = 0.01;
  double volume = 2.0 * std::numbers::pi;
  std::string function = "product";
  std::vector<std::size_t> n_values{10000};
  std::size_t m = 0;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string out;
};

EmbeddingResult load_embedding(const std::string& prefix) {
  if (prefix.empty()) throw IoError("--embedding PREFIX is required");
  const fs::path vectors = with_suffix(prefix, ".vectors.csv");
  const fs::path meta_path = with_suffix(prefix, ".meta.json");
  if (!fs::exists(vectors) || !fs::exists(meta_path)) {
    throw IoError("embedding files '" + prefix + ".vectors.csv' / '.meta.json' not found");
  }
  const json meta = read_json(meta_path);
  EmbeddingResult r;
  r.vectors = matrix_read(vectors);
  try {
    r.method = parse_method(meta.at("method").get<std::string>());
    r.epsilon = meta.at("epsilon").get<double>();
    r.diffusion_time = meta.at("diffusion_time").get<double>();
    r.spectrum = meta.at("spectrum").get<std::vector<double>>();
  } catch (const json::exception& ex) {
    throw FormatError("'" + meta_path.string() + "': " + ex.what());
  }
  if (r.spectrum.size() != static_cast<std::size_t>(r.vectors.cols())) {
    throw FormatError("spectrum length does not match the vectors file");
  }
  r.coords = diffusion_coordinates(r, r.diffusion_time);
  return r;
}

int cmd_eval(const EvalArgs& a) {
  const KernelMoment moment = kernel_moment(Kernel::gaussian(), a.dim);
  if (a.kind == "gridconc") {
    Rng rng(a.seed);
    const TestFunction f = parse_test_function(a.function);
    const auto rows = grid_concentration_experiment(f, a.n_values, a.trials, rng, a.m);
    json j = {{"function", std::string(to_string(f))},
              {"expectation", test_function_expectation(f)},
              {"seed", a.seed}};
    json table = json::array();
    for (const auto& r : rows) table.push_back(to_json(r));
    j["rows"] = table;
    write_json(j, with_suffix(a.out, ".json"));
    matrix_write(concentration_table(rows), with_suffix(a.out, ".csv"), MatrixFormat::Csv);
    for (const auto& r : rows) {
      std::cout << "N=" << r.n << " M=" << r.m << " iid-M=" << r.error_iid_m << " iid-N=" << r.error_iid_n
                << " grid=" << r.error_grid << "\n";
    }
    return kOk;
  }

  const std::vector<double> angles = read_angles(a.angles);
  const EmbeddingResult r = load_embedding(a.embedding);
  if (static_cast<std::size_t>(r.vectors.rows()) != angles.size()) {
    throw DimError("embedding has " + std::to_string(r.vectors.rows()) + " rows but " +
                   std::to_string(angles.size()) + " angles were given");
  }

  if (a.kind == "eigen") {
    const CircleGroundTruth truth = circle_ground_truth(a.kmax, angles);
    const EigenReport rep = align_and_score(r, truth, moment);
    json j = to_json(rep);
    j["method"] = std::string(to_string(r.method));
    j["k_max"] = a.kmax;
    write_json(j, with_suffix(a.out, ".json"));
    matrix_write(eigen_report_table(rep), with_suffix(a.out, ".csv"), MatrixFormat::Csv);
    std::cout << rep.eigenvalue_error.size() << " eigenpairs scored\n";
    return kOk;
  }
  if (a.kind == "phase") {
    if (r.vectors.cols() < 3) throw DimError("phase needs two non-trivial eigenvectors");
    const auto v1 = column_values(r.vectors, 1);
    const auto v2 = column_values(r.vectors, 2);
    const PhaseAmplitude pa = phase_amplitude(v1, v2, angles);
    const double rho = circular_rank_correlation(pa.phase, pa.angles);
    const double cv = coefficient_of_variation(pa.amplitude);
    write_json({{"method", std::string(to_string(r.method))},
                {"circular_rank_correlation", rho},
                {"amplitude_cv", cv}},
               with_suffix(a.out, ".json"));
    matrix_write(phase_table(pa), with_suffix(a.out, ".csv"), MatrixFormat::Csv);
    std::cout << "circular rank correlation " << rho << ", amplitude CV " << cv << "\n";
    return kOk;
  }
  if (a.kind == "geodesic") {
    PortegiesOptions opts;
    opts.t = a.portegies_t;
    opts.intrinsic_dim = a.dim;
    opts.volume = a.volume;
    const EigenvalueSource source =
        a.eigenvalues == "truth" ? EigenvalueSource::GroundTruth : EigenvalueSource::Estimated;
    const NeighborMode mode = a.neighbor_mode == "embedding" ? NeighborMode::Embedding : NeighborMode::Geodesic;
    const Matrix coords = geodesic_embedding(r, source, moment, opts);
    const Matrix table = geodesic_error_table(coords, angles, a.neighbors, mode);
    Matrix summary(table.cols(), 5);
    json rows = json::array();
    std::vector<double> all(table.data(), table.data() + table.size());
    for (Index k = 0; k < table.cols(); ++k) {
      const auto errs = column_values(table, k);
      const double q25 = quantile(errs, 0.25), q50 = quantile(errs, 0.5), q75 = quantile(errs, 0.75);
      const double mean = table.col(k).mean();
      summary.row(k) << static_cast<double>(k + 1), q25, q50, q75, mean;
      rows.push_back({{"K", k + 1}, {"q25", q25}, {"median", q50}, {"q75", q75}, {"mean", mean}});
    }
    const double overall = median(all);
    write_json({{"method", std::string(to_string(r.method))},
                {"eigenvalues", a.eigenvalues},
                {"neighbor_mode", a.neighbor_mode},
                {"portegies_t", a.portegies_t},
                {"median_over_all_K", overall},
                {"per_K", rows}},
               with_suffix(a.out, ".json"));
    matrix_write(summary, with_suffix(a.out, ".csv"), MatrixFormat::Csv);
    std::cout << "median relative geodesic error " << overall << "\n";
    return kOk;
  }
  throw ConfigError("unknown eval kind '" + a.kind + "'");
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::string> methods{"roseland"};
  std::vector<std::size_t> n_grid{10000, 20000, 40000, 80000, 160000, 320000};
  std::optional<std::size_t> m;
  double beta = 0.3;
  std::string dataset = "circle";
  std::size_t p = 2;
  std::size_t repeats = 3;
  std::size_t qprime = 2;
  double epsilon_scale = 0.05;
  std::size_t dense_cap = 20000;
  std::uint64_t seed = 1;
  std::string out;
  bool plot = false;
};

int cmd_bench(const BenchArgs& b) {
  BenchOptions o;
  o.methods.clear();
  for (const auto& m : b.methods) o.methods.push_back(parse_method(m));
  o.n_grid = b.n_grid;
  o.landmarks = b.m ? LandmarkSpec{LandmarkCount{*b.m}} : LandmarkSpec{LandmarkExponent{b.beta}};
  o.dataset = parse_bench_dataset(b.dataset);
  o.ambient_dim = b.p;
  o.repeats = b.repeats;
  o.embed_dim = b.qprime;
  o.epsilon_scale = b.epsilon_scale;
  o.dense_cap = b.dense_cap;
  o.seed = b.seed;
  const BenchReport rep = run_scaling_bench(o);
  write_json(to_json(rep), with_suffix(b.out, ".json"));
  matrix_write(bench_table(rep), with_suffix(b.out, ".csv"), MatrixFormat::Csv);
  if (b.plot) write_text_file(with_suffix(b.out, ".svg"), bench_svg(rep));
  for (const auto& e : rep.entries) {
    std::cout << to_string(e.method) << " n=" << e.n << " m=" << e.m << " " << e.status;
    if (e.status == "ok") std::cout << " " << e.seconds << "s";
    std::cout << "\n";
  }
  for (const auto& f : rep.fits) {
    if (f.points >= 2) std::cout << to_string(f.method) << " log-log slope " << f.time_slope << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- landmark

struct LandmarkArgs {
  std::string mode = "subset";
  std::string data;
  std::size_t m = 0;
  std::size_t p = 2;
  DensityArgs density;
  std::optional<double> noise_variance;
  std::uint64_t seed = 0;
  std::string out;
  std::string profile;
  double epsilon = 0.01;
  std::size_t grid = 720;
};

int cmd_landmark(const LandmarkArgs& l) {
  if (l.m < 1) throw ConfigError("--m must be at least 1");
  Rng rng(l.seed);
  LandmarkSelection sel;
  if (l.mode == "subset") {
    if (l.data.empty() || !fs::exists(l.data)) throw IoError("subset mode needs an existing --data file");
    sel = pick_landmark_subset(matrix_read(l.data), l.m, rng);
  } else if (l.mode == "density") {
    sel = pick_landmarks_from_density(l.density.build(), l.m, l.p, rng);
  } else if (l.mode == "designed") {
    sel = pick_landmarks_from_density(design_landmark_density(l.density.build()), l.m, l.p, rng);
  } else if (l.mode == "equispaced") {
    sel.points = Matrix::Zero(static_cast<Index>(l.m), static_cast<Index>(l.p));
    for (std::size_t k = 0; k < l.m; ++k) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(l.m);
      sel.angles.push_back(th);
      sel.points(static_cast<Index>(k), 0) = std::cos(th);
      sel.points(static_cast<Index>(k), 1) = std::sin(th);
    }
  } else {
    CircleModel model;
    model.density = l.density.build();
    model.ambient_dim = l.p;
    model.noise = l.noise_variance && *l.noise_variance > 0.0 ? NoiseKind::Gaussian : NoiseKind::None;
    model.noise_variance = l.noise_variance.value_or(0.0);
    sel = pick_independent_landmarks(model, l.m, rng);
  }
  matrix_write(sel.points, l.out, format_for_path(l.out));
  const std::string stem = fs::path(l.out).replace_extension("").string();
  if (!sel.indices.empty()) {
    std::vector<double> idx(sel.indices.begin(), sel.indices.end());
    matrix_write(column(idx), stem + ".indices.csv", MatrixFormat::Csv);
  }
  if (!sel.angles.empty()) matrix_write(column(sel.angles), stem + ".angles.csv", MatrixFormat::Csv);

  if (!l.profile.empty()) {
    if (sel.angles.empty()) throw ConfigError("--profile needs a circle landmark mode");
    // One query halfway between each pair of consecutive landmarks.
    std::vector<double> sorted = sel.angles;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> queries;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      const double next = k + 1 < sorted.size() ? sorted[k + 1] : sorted[0] + 2.0 * std::numbers::pi;
      queries.push_back(std::fmod(0.5 * (sorted[k] + next), 2.0 * std::numbers::pi));
    }
    const Matrix prof = landmark_kernel_profile(sel.angles, queries, l.epsilon, l.grid);
    matrix_write(prof, l.profile + ".profile.csv", MatrixFormat::Csv);
    std::vector<PlotSeries> series;
    for (Index q = 0; q < prof.rows(); ++q) {
      PlotSeries s;
      s.line = true;
      s.label = q < 6 ? "query " + std::to_string(q) : "";
      for (Index g = 0; g < prof.cols(); ++g) {
        s.x.push_back(2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(prof.cols()));
        s.y.push_back(prof(q, g));
      }
      series.push_back(std::move(s));
    }
    PlotOptions opts;
    opts.title = "landmark kernel profiles";
    opts.x_label = "angle";
    opts.y_label = "effective kernel";
    write_text_file(l.profile + ".profile.svg", svg_plot(series, opts));
  }
  std::cout << "wrote " << sel.points.rows() << " landmarks to " << l.out << "\n";
  return kOk;
}

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landmark diffusion embeddings and baselines"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value / TOML config file; flags override it");
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = runtime default)")->envname("LMDF_THREADS");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "synthetic datasets");
  g->add_option("kind", gen.kind, "circle | circle-noisy | phantom")
      ->required()
      ->check(CLI::IsMember({"circle", "circle-noisy", "phantom"}));
  g->add_option("--n", gen.n, "number of points")->required();
  g->add_option("--p", gen.p, "ambient dimension / offsets per projection");
  g->add_option("--seed", gen.seed);
  add_density_options(g, gen.density);
  g->add_option("--noise-variance", gen.noise_variance, "per-coordinate variance (default 1/sqrt(p))");
  g->add_option("--noise", gen.noise, "gaussian | uniform")->check(CLI::IsMember({"gaussian", "uniform"}));
  g->add_option("--out", gen.out, "points file (.csv or .bin)")->required();
  g->add_option("--angles-out", gen.angles_out, "angles sidecar (default <out>.angles.csv)");

  EmbedArgs emb;
  auto* e = app.add_subcommand("embed", "compute an embedding");
  e->add_option("--method", emb.method, "roseland | dm | nystrom | hkc")
      ->check(CLI::IsMember({"roseland", "dm", "nystrom", "hkc"}, CLI::ignore_case));
  e->add_option("--data", emb.data, "points matrix");
  e->add_option("--n", emb.n, "generate a uniform circle of n points instead of --data");
  e->add_option("--p", emb.p, "ambient dimension for --n");
  e->add_option("--landmarks", emb.landmarks, "landmark matrix (default: random subset of the data)");
  e->add_option("--m", emb.m, "landmark count");
  e->add_option("--beta", emb.beta, "landmark exponent, m = round(n^beta)");
  e->add_option("--epsilon", emb.epsilon, "kernel bandwidth");
  e->add_option("--epsilon-scale", emb.epsilon_scale, "bandwidth = scale x median squared distance");
  e->add_option("--t", emb.t, "diffusion time");
  e->add_option("--qprime", emb.qprime, "embedding dimension");
  e->add_option("--seed", emb.seed);
  e->add_option("--dense-cap", emb.dense_cap, "largest n accepted by the dense diffusion map");
  e->add_option("--out", emb.out, "output prefix")->required();
  e->add_flag("--plot", emb.plot, "write <out>.svg");
  e->add_option("--labels", emb.labels, "single-column file used to color the plot");

  EvalArgs ev;
  auto* v = app.add_subcommand("eval", "evaluation reports");
  v->add_option("kind", ev.kind, "eigen | phase | geodesic | gridconc")
      ->required()
      ->check(CLI::IsMember({"eigen", "phase", "geodesic", "gridconc"}));
  v->add_option("--embedding", ev.embedding, "prefix written by embed");
  v->add_option("--angles", ev.angles, "ground-truth angles");
  v->add_option("--kmax", ev.kmax, "highest circle frequency scored");
  v->add_option("--dim", ev.dim, "intrinsic dimension");
  v->add_option("--neighbors", ev.neighbors, "largest neighbor rank K");
  v->add_option("--eigenvalues", ev.eigenvalues, "estimated | truth")
      ->check(CLI::IsMember({"estimated", "truth"}));
  v->add_option("--neighbor-mode", ev.neighbor_mode, "geodesic | embedding")
      ->check(CLI::IsMember({"geodesic", "embedding"}));
  v->add_option("--portegies-t", ev.portegies_t, "heat time of the isometric scaling");
  v->add_option("--volume", ev.volume, "manifold volume");
  v->add_option("--function", ev.function, "product | bump")->check(CLI::IsMember({"product", "bump"}));
  v->add_option("--N", ev.n_values, "sample sizes N")->delimiter(',');
  v->add_option("--M", ev.m, "grid size M (default round(sqrt(N)))");
  v->add_option("--trials", ev.trials);
  v->add_option("--seed", ev.seed);
  v->add_option("--out", ev.out, "output prefix")->required();

  BenchArgs bn;
  auto* b = app.add_subcommand("bench", "runtime and memory scaling");
  b->add_option("--methods", bn.methods, "methods to time")->delimiter(',');
  b->add_option("--n", bn.n_grid, "ascending sample sizes")->delimiter(',');
  b->add_option("--m", bn.m, "fixed landmark count");
  b->add_option("--beta", bn.beta, "landmark exponent");
  b->add_option("--dataset", bn.dataset, "circle | phantom")->check(CLI::IsMember({"circle", "phantom"}));
  b->add_option("--p", bn.p, "circle ambient dimension");
  b->add_option("--repeats", bn.repeats);
  b->add_option("--qprime", bn.qprime);
  b->add_option("--epsilon-scale", bn.epsilon_scale);
  b->add_option("--dense-cap", bn.dense_cap);
  b->add_option("--seed", bn.seed);
  b->add_option("--out", bn.out, "output prefix")->required();
  b->add_flag("--plot", bn.plot, "write <out>.svg");

  LandmarkArgs lm;
  auto* l = app.add_subcommand("landmark", "landmark sets and kernel profiles");
  l->add_option("--mode", lm.mode, "subset | density | designed | independent | equispaced")
      ->check(CLI::IsMember({"subset", "density", "designed", "independent", "equispaced"}));
  l->add_option("--data", lm.data, "data matrix for subset mode");
  l->add_option("--m", lm.m, "landmark count")->required();
  l->add_option("--p", lm.p, "ambient dimension");
  add_density_options(l, lm.density);
  l->add_option("--noise-variance", lm.noise_variance, "noise for independent mode");
  l->add_option("--seed", lm.seed);
  l->add_option("--out", lm.out, "landmark matrix file")->required();
  l->add_option("--profile", lm.profile, "prefix for landmark-kernel profiles");
  l->add_option("--epsilon", lm.epsilon, "bandwidth for profiles");
  l->add_option("--grid", lm.grid, "profile grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    apply_threads(threads);
    if (*g) return cmd_generate(gen);
    if (*e) return cmd_embed(emb);
    if (*v) return cmd_eval(ev);
    if (*b) return cmd_bench(bn);
    if (*l) return cmd_landmark(lm);
  } catch (const CapacityError& err) {
    std::cerr << "refused: " << err.what() << "\n";
    return kCapacity;
  } catch (const IoError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kInput;
  } catch (const FormatError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kInput;
  } catch (const ConfigError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kUsage;
  } catch (const DimError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kUsage;
  } catch (const IndexError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kUsage;
  } catch (const Error& err) {
    std::cerr << "numeric error: " << err.what() << "\n";
    return kNumeric;
  } catch (const std::bad_alloc&) {
    std::cerr << "numeric error: out of memory\n";
    return kNumeric;
  }
  return kUsage;
}
