#include "roseland/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace roseland {

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw ValueError(std::string(what) + ": matrix contains NaN or Inf");
  }
}

std::size_t resolve_landmark_count(std::size_t n, const LandmarkSpec& spec) {
  if (n < 2) throw ConfigError("landmark count needs at least 2 data points");
  std::size_t m = 0;
  if (const auto* count = std::get_if<LandmarkCount>(&spec)) {
    m = count->m;
  } else {
    const double beta = std::get<LandmarkExponent>(spec).beta;
    if (!(beta > 0.0 && beta <= 1.0)) {
      throw ConfigError("landmark exponent beta must lie in (0, 1]");
    }
    // std::round is half-away-from-zero.
    m = static_cast<std::size_t>(std::round(std::pow(static_cast<double>(n), beta)));
  }
  if (m < 1) throw ConfigError("landmark count must be at least 1");
  if (m > n) {
    throw ConfigError("landmark count " + std::to_string(m) + " exceeds n = " + std::to_string(n));
  }
  return m;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Roseland:
      return "roseland";
    case Method::DM:
      return "dm";
    case Method::Nystrom:
      return "nystrom";
    case Method::HKC:
      return "hkc";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "roseland") return Method::Roseland;
  if (lower == "dm") return Method::DM;
  if (lower == "nystrom") return Method::Nystrom;
  if (lower == "hkc") return Method::HKC;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

void EmbedderConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
  if (!(diffusion_time >= 0.0) || !std::isfinite(diffusion_time)) {
    throw ConfigError("diffusion time must be non-negative");
  }
  if (embed_dim < 1) throw ConfigError("embedding dimension must be at least 1");
  if (const auto* e = std::get_if<LandmarkExponent>(&landmarks)) {
    if (!(e->beta > 0.0 && e->beta <= 1.0)) throw ConfigError("beta must lie in (0, 1]");
  }
}

}  // namespace roseland
