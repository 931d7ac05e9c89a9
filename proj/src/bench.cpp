#include "roseland/bench.hpp"

#include "roseland/affinity.hpp"
#include "roseland/datasets.hpp"
#include "roseland/embedders.hpp"
#include "roseland/plot.hpp"

#include <omp.h>
#ifdef __GLIBC__
#include <malloc.h>
#endif
#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <string>

namespace roseland {

namespace {

std::size_t status_field_kb(const std::string& key) {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key, 0) == 0) {
      std::size_t pos = key.size();
      while (pos < line.size() && !std::isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
      return static_cast<std::size_t>(std::stoull(line.substr(pos)));
    }
  }
  return 0;
}

std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) return line.substr(colon + 2);
    }
  }
  return "unknown";
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct BenchData {
  Matrix points;
  LandmarkSelection landmarks;
  double epsilon = 0.0;
};

BenchData make_data(const BenchOptions& o, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  BenchData d;
  if (o.dataset == BenchDataset::Circle) {
    d.points = sample_circle(n, DensitySpec::uniform(), o.ambient_dim, rng).points;
  } else {
    d.points = phantom_radon_dataset(n, shepp_logan(128), rng).projections;
  }
  const std::size_t m = resolve_landmark_count(n, o.landmarks);
  Rng pick = rng.split(1);
  d.landmarks = pick_landmark_subset(d.points, m, pick);
  d.epsilon = median_bandwidth(d.points, d.landmarks.points, o.epsilon_scale);
  return d;
}

EmbeddingResult run_method(Method method, const BenchData& d, const EmbedderConfig& cfg) {
  switch (method) {
    case Method::Roseland:
      return roseland_embed(d.points, d.landmarks.points, cfg);
    case Method::DM:
      return dm_embed(d.points, cfg);
    case Method::Nystrom:
      return nystrom_embed(d.points, std::span<const Index>(d.landmarks.indices), cfg);
    case Method::HKC:
      return hkc_embed(d.points, d.landmarks.points, cfg);
  }
  throw ConfigError("unknown method");
}

}  // namespace

std::string_view to_string(BenchDataset d) { return d == BenchDataset::Circle ? "circle" : "phantom"; }

BenchDataset parse_bench_dataset(std::string_view name) {
  if (name == "circle") return BenchDataset::Circle;
  if (name == "phantom") return BenchDataset::Phantom;
  throw ConfigError("unknown bench dataset '" + std::string(name) + "'");
}

bool reset_peak_memory() {
#ifdef __GLIBC__
  // Hand free heap pages back first; otherwise a later call can reuse memory
  // freed by earlier work without raising the resident set at all.
  malloc_trim(0);
#endif
  std::ofstream out("/proc/self/clear_refs");
  if (!out) return false;
  out << "5";
  out.flush();
  return static_cast<bool>(out);
}

std::size_t peak_memory_bytes() {
  const std::size_t kb = status_field_kb("VmHWM:");
  if (kb > 0) return kb * 1024;
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<std::size_t>(usage.ru_maxrss) * 1024;
}

std::size_t current_memory_bytes() { return status_field_kb("VmRSS:") * 1024; }

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DimError("slope fit needs two or more points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValueError("log-log fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return linear_fit(lx, ly).slope;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DimError("linear fit needs two or more points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValueError("linear fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.max_ratio = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    if (pred > 0.0 && y[i] > 0.0) {
      fit.max_ratio = std::max({fit.max_ratio, y[i] / pred, pred / y[i]});
    } else {
      fit.max_ratio = std::numeric_limits<double>::infinity();
    }
  }
  return fit;
}

BenchReport run_scaling_bench(const BenchOptions& options) {
  if (options.n_grid.empty()) throw ConfigError("bench needs at least one n");
  if (!std::is_sorted(options.n_grid.begin(), options.n_grid.end()) ||
      std::adjacent_find(options.n_grid.begin(), options.n_grid.end()) != options.n_grid.end()) {
    throw ConfigError("bench n grid must be strictly ascending");
  }
  if (options.repeats < 1) throw ConfigError("bench needs at least one repeat");
  BenchReport report;
  report.options = options;
  report.cpu = cpu_model();
  report.threads = omp_get_max_threads();
  const bool memory = options.measure_memory && reset_peak_memory();

  for (std::size_t n : options.n_grid) {
    const std::uint64_t seed = options.seed * 1000003ULL + n;
    const BenchData data = make_data(options, n, seed);
    EmbedderConfig cfg;
    cfg.epsilon = data.epsilon;
    cfg.embed_dim = options.embed_dim;
    cfg.dense_cap = options.dense_cap;
    for (Method method : options.methods) {
      BenchEntry e;
      e.method = method;
      e.n = n;
      e.m = static_cast<std::size_t>(data.landmarks.points.rows());
      e.epsilon = data.epsilon;
      e.seed = seed;
      std::vector<double> peaks;
      try {
        for (std::size_t r = 0; r < options.repeats; ++r) {
          if (memory) reset_peak_memory();
          const std::size_t before = current_memory_bytes();
          const auto t0 = std::chrono::steady_clock::now();
          {
            const EmbeddingResult res = run_method(method, data, cfg);
            (void)res;
          }
          const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          e.samples.push_back(std::max(secs, 1e-9));
          if (memory) {
            const std::size_t peak = peak_memory_bytes();
            peaks.push_back(static_cast<double>(peak > before ? peak - before : 0));
          }
        }
        e.status = "ok";
        e.seconds = median_of(e.samples);
        if (!peaks.empty()) e.peak_bytes = static_cast<std::size_t>(median_of(peaks));
      } catch (const CapacityError& err) {
        e.status = "capacity";
        e.message = err.what();
      }
      report.entries.push_back(std::move(e));
    }
  }

  for (Method method : options.methods) {
    std::vector<double> ns, ts, ms;
    bool have_memory = true;
    for (const auto& e : report.entries) {
      if (e.method != method || e.status != "ok") continue;
      ns.push_back(static_cast<double>(e.n));
      ts.push_back(e.seconds);
      if (e.peak_bytes) {
        ms.push_back(static_cast<double>(*e.peak_bytes));
      } else {
        have_memory = false;
      }
    }
    MethodFit fit;
    fit.method = method;
    fit.points = ns.size();
    if (ns.size() >= 2) {
      fit.time_slope = loglog_slope(ns, ts);
      if (have_memory) {
        const LinearFit lf = linear_fit(ns, ms);
        fit.memory_slope = lf.slope;
        fit.memory_intercept = lf.intercept;
        fit.memory_max_ratio = lf.max_ratio;
      }
    }
    report.fits.push_back(fit);
  }
  return report;
}

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json j;
  j["environment"] = {{"cpu", report.cpu}, {"threads", report.threads}};
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : report.options.methods) methods.push_back(std::string(to_string(m)));
  j["options"] = {{"methods", methods},
                  {"n_grid", report.options.n_grid},
                  {"dataset", std::string(to_string(report.options.dataset))},
                  {"repeats", report.options.repeats},
                  {"embed_dim", report.options.embed_dim},
                  {"epsilon_scale", report.options.epsilon_scale},
                  {"dense_cap", report.options.dense_cap},
                  {"seed", report.options.seed}};
  if (const auto* b = std::get_if<LandmarkExponent>(&report.options.landmarks)) {
    j["options"]["beta"] = b->beta;
  } else {
    j["options"]["m"] = std::get<LandmarkCount>(report.options.landmarks).m;
  }
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json row = {{"method", std::string(to_string(e.method))},
                          {"n", e.n},
                          {"m", e.m},
                          {"epsilon", e.epsilon},
                          {"seed", e.seed},
                          {"status", e.status}};
    if (e.status == "ok") {
      row["seconds"] = e.seconds;
      row["samples"] = e.samples;
      row["peak_bytes"] = e.peak_bytes ? nlohmann::json(*e.peak_bytes) : nlohmann::json(nullptr);
    } else {
      row["message"] = e.message;
    }
    entries.push_back(row);
  }
  j["entries"] = entries;
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : report.fits) {
    fits.push_back({{"method", std::string(to_string(f.method))},
                    {"points", f.points},
                    {"time_loglog_slope", f.time_slope},
                    {"memory_bytes_per_point", f.memory_slope},
                    {"memory_intercept_bytes", f.memory_intercept},
                    {"memory_max_fit_ratio", f.memory_max_ratio}});
  }
  j["fits"] = fits;
  return j;
}

Matrix bench_table(const BenchReport& report) {
  Matrix t(static_cast<Index>(report.entries.size()), 7);
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    t.row(static_cast<Index>(i)) << static_cast<double>(static_cast<int>(e.method)),
        static_cast<double>(e.n), static_cast<double>(e.m), e.epsilon, e.status == "ok" ? e.seconds : 0.0,
        e.peak_bytes ? static_cast<double>(*e.peak_bytes) : -1.0, e.status == "ok" ? 1.0 : 0.0;
  }
  return t;
}

std::string bench_svg(const BenchReport& report) {
  std::vector<PlotSeries> series;
  for (Method m : report.options.methods) {
    PlotSeries s;
    s.label = std::string(to_string(m));
    s.line = true;
    for (const auto& e : report.entries) {
      if (e.method == m && e.status == "ok") {
        s.x.push_back(static_cast<double>(e.n));
        s.y.push_back(e.seconds);
      }
    }
    series.push_back(std::move(s));
  }
  PlotOptions opts;
  opts.title = "embedding time";
  opts.x_label = "n";
  opts.y_label = "seconds";
  opts.log_x = true;
  opts.log_y = true;
  return svg_plot(series, opts);
}

}  // namespace roseland
