#pragma once

// Domain types shared by every part of the engine. Bandwidths are carried as
// bits/second in double precision throughout; times are seconds.

#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hercules {

inline constexpr double kKbps = 1e3;
inline constexpr double kMbps = 1e6;
inline constexpr double kMs = 1e-3;

enum class ErrorKind {
  DegenerateRequirement,
  NonPositiveMin,
  InvalidCoefficients,
  InvalidConfig,
  StaleStats,
  EmptyWindow,
  GridTooLarge,
  LengthMismatch,
  InvalidScenario,
  ParseError,
  ValidationError,
  IoError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateRequirement: return "DegenerateRequirement";
    case ErrorKind::NonPositiveMin: return "NonPositiveMin";
    case ErrorKind::InvalidCoefficients: return "InvalidCoefficients";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::StaleStats: return "StaleStats";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::GridTooLarge: return "GridTooLarge";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InvalidScenario: return "InvalidScenario";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Per-connection bandwidth band. Below `min_rate` the application degrades
/// significantly; above `max_rate` it gains nothing. A bounded application
/// never sends above `max_rate`.
struct Requirement {
  double min_rate = 0.0;
  double max_rate = 0.0;
  bool bounded = false;

  bool operator==(const Requirement&) const = default;
};

inline Requirement validate_requirement(const Requirement& req) {
  if (!(req.min_rate > 0.0)) {
    throw Error(ErrorKind::NonPositiveMin,
                "min_rate must be positive, got " + std::to_string(req.min_rate));
  }
  if (!(req.max_rate > req.min_rate)) {
    throw Error(ErrorKind::DegenerateRequirement,
                "max_rate (" + std::to_string(req.max_rate) + ") must exceed min_rate (" +
                    std::to_string(req.min_rate) + ")");
  }
  return req;
}

/// Utility-function constants. `d_scale` controls the steepness of the
/// requirement penalty.
struct CoefficientSet {
  double t = 0.9;
  double beta = 11.35;
  double gamma = 25.0;
  double phi = 750.0;
  double d_scale = 2.0;

  bool operator==(const CoefficientSet&) const = default;
};

inline CoefficientSet validate_coefficients(const CoefficientSet& c) {
  if (!(c.t > 0.0 && c.t <= 1.0)) throw Error(ErrorKind::InvalidCoefficients, "t must lie in (0,1]");
  if (!(c.beta >= 0.0)) throw Error(ErrorKind::InvalidCoefficients, "beta must be >= 0");
  if (!(c.gamma > 0.0)) throw Error(ErrorKind::InvalidCoefficients, "gamma must be > 0");
  if (!(c.phi >= 0.0)) throw Error(ErrorKind::InvalidCoefficients, "phi must be >= 0");
  if (!(c.d_scale >= 1.0)) throw Error(ErrorKind::InvalidCoefficients, "d_scale must be >= 1");
  return c;
}

struct RttSample {
  double time = 0.0;
  double rtt = 0.0;
};

/// Least-squares slope of rtt against time. Zero for fewer than two samples or
/// when all samples share one timestamp.
inline double least_squares_slope(std::span<const RttSample> samples) {
  const auto n = static_cast<double>(samples.size());
  if (samples.size() < 2) return 0.0;
  double mean_t = 0.0, mean_r = 0.0;
  for (const auto& s : samples) {
    mean_t += s.time;
    mean_r += s.rtt;
  }
  mean_t /= n;
  mean_r /= n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& s : samples) {
    sxy += (s.time - mean_t) * (s.rtt - mean_r);
    sxx += (s.time - mean_t) * (s.time - mean_t);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

/// Standard error of the least-squares slope, from the fit residuals.
inline double slope_standard_error(std::span<const RttSample> samples) {
  if (samples.size() < 3) return 0.0;
  const auto n = static_cast<double>(samples.size());
  double mean_t = 0.0, mean_r = 0.0;
  for (const auto& s : samples) {
    mean_t += s.time;
    mean_r += s.rtt;
  }
  mean_t /= n;
  mean_r /= n;
  double sxx = 0.0;
  for (const auto& s : samples) sxx += (s.time - mean_t) * (s.time - mean_t);
  if (sxx <= 0.0) return 0.0;
  const double slope = least_squares_slope(samples);
  double rss = 0.0;
  for (const auto& s : samples) {
    const double fit = mean_r + slope * (s.time - mean_t);
    rss += (s.rtt - fit) * (s.rtt - fit);
  }
  return std::sqrt(rss / (n - 2.0) / sxx);
}

inline double population_stddev(std::span<const RttSample> samples) {
  if (samples.empty()) return 0.0;
  const auto n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (const auto& s : samples) mean += s.rtt;
  mean /= n;
  double var = 0.0;
  for (const auto& s : samples) var += (s.rtt - mean) * (s.rtt - mean);
  return std::sqrt(var / n);
}

/// Feedback gathered over one update interval.
struct IntervalStats {
  double avg_rate = 0.0;
  double loss_ratio = 0.0;
  std::vector<RttSample> rtt_samples;
  double rtt_gradient = 0.0;
  double rtt_stddev = 0.0;
  double duration = 0.0;

  double mean_rtt() const {
    if (rtt_samples.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& s : rtt_samples) sum += s.rtt;
    return sum / static_cast<double>(rtt_samples.size());
  }
};

/// Builds stats whose gradient and deviation are derived from the samples.
inline IntervalStats make_interval_stats(double avg_rate, double loss_ratio,
                                         std::vector<RttSample> samples, double duration) {
  IntervalStats s;
  s.avg_rate = avg_rate;
  s.loss_ratio = loss_ratio;
  s.rtt_gradient = least_squares_slope(samples);
  s.rtt_stddev = population_stddev(samples);
  s.rtt_samples = std::move(samples);
  s.duration = duration;
  return s;
}

inline void validate_stats(const IntervalStats& s) {
  if (!(s.loss_ratio >= 0.0 && s.loss_ratio <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "loss_ratio outside [0,1]");
  if (!(s.duration > 0.0)) throw Error(ErrorKind::InvalidConfig, "stats duration must be > 0");
  if (!(s.rtt_stddev >= 0.0)) throw Error(ErrorKind::InvalidConfig, "rtt_stddev must be >= 0");
}

/// Connection rates indexed by connection id.
using RateVector = std::vector<double>;

}  // namespace hercules
