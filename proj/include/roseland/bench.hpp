#pragma once

#include "roseland/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace roseland {

enum class BenchDataset { Circle, Phantom };

std::string_view to_string(BenchDataset d);
BenchDataset parse_bench_dataset(std::string_view name);

struct BenchOptions {
  std::vector<Method> methods{Method::Roseland};
  std::vector<std::size_t> n_grid{10000, 20000, 40000, 80000, 160000, 320000};
  LandmarkSpec landmarks = LandmarkExponent{0.3};
  BenchDataset dataset = BenchDataset::Circle;
  std::size_t ambient_dim = 2;  // circle only; phantom uses 128 offsets
  std::size_t repeats = 3;
  std::size_t embed_dim = 2;
  double epsilon_scale = 0.05;
  std::size_t dense_cap = 20000;
  std::uint64_t seed = 1;
  bool measure_memory = true;
};

struct BenchEntry {
  Method method = Method::Roseland;
  std::size_t n = 0;
  std::size_t m = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string status;          // "ok" or "capacity"
  std::string message;
  double seconds = 0.0;        // median over repeats
  std::vector<double> samples;
  std::optional<std::size_t> peak_bytes;  // growth of the resident high-water mark during the call
};

struct MethodFit {
  Method method = Method::Roseland;
  double time_slope = 0.0;      // least-squares slope of log(seconds) vs log(n)
  double memory_slope = 0.0;    // bytes per point of the linear memory fit
  double memory_intercept = 0.0;
  double memory_max_ratio = 0.0;  // max over points of max(measured/fit, fit/measured)
  std::size_t points = 0;
};

struct BenchReport {
  std::vector<BenchEntry> entries;
  std::vector<MethodFit> fits;
  std::string cpu;
  int threads = 1;
  BenchOptions options;
};

BenchReport run_scaling_bench(const BenchOptions& options);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double max_ratio = 0.0;  // worst multiplicative deviation of a point from the fit
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Resets the kernel's resident-set high-water mark for this process. With
/// glibc, free heap pages are returned to the system first, so memory reused
/// from earlier frees still counts toward the next peak. Returns false where
/// unsupported.
bool reset_peak_memory();
/// Current high-water mark in bytes (VmHWM), or ru_maxrss as a fallback.
std::size_t peak_memory_bytes();
std::size_t current_memory_bytes();

nlohmann::json to_json(const BenchReport& report);
/// method, n, m, epsilon, seconds, peak bytes (-1 when unmeasured), ok flag.
Matrix bench_table(const BenchReport& report);
std::string bench_svg(const BenchReport& report);

}  // namespace roseland
