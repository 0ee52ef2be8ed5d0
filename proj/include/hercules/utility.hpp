#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hercules/core.hpp"

namespace hercules {

/// Position of a rate inside its requirement band: 0 at the minimum, 1 at the
/// maximum, unbounded outside.
struct NormalizedRate {
  double value = 0.0;
};

inline NormalizedRate normalized_rate(double rate, const Requirement& req) {
  return {(rate - req.min_rate) / (req.max_rate - req.min_rate)};
}

/// arctan-shaped requirement penalty in (0,1). Centered at the middle of the
/// band; `d_scale` sets the steepness.
inline double requirement_penalty(NormalizedRate xbar, double d_scale) {
  return std::atan(d_scale * (xbar.value - 0.5)) / std::numbers::pi + 0.5;
}

/// Sign applied to each congestion term. Every term is a penalty by default;
/// flipping a sign reproduces alternative readings of the bracket.
struct PenaltySigns {
  double loss = 1.0;
  double gradient = 1.0;
  double stddev = 1.0;

  bool operator==(const PenaltySigns&) const = default;
};

/// The bracketed congestion term, clamped at zero from below so a congestion
/// free interval leaves utility at rate^t exactly.
inline double congestion_penalty(const IntervalStats& stats, const CoefficientSet& coeffs,
                                 const PenaltySigns& signs = {}) {
  const double value = signs.loss * coeffs.beta * stats.loss_ratio +
                       signs.gradient * coeffs.gamma * std::max(0.0, stats.rtt_gradient) +
                       signs.stddev * coeffs.phi * stats.rtt_stddev;
  return std::max(0.0, value);
}

struct UtilityValue {
  double value = 0.0;
  double rate = 0.0;
  double penalty = 0.0;
};

/// rate^t - rate * H * penalty, with the penalty already evaluated.
inline double utility_from_penalty(double rate, double requirement_weight, double penalty,
                                   double t) {
  return std::pow(rate, t) - rate * requirement_weight * penalty;
}

/// Utility of sending at `rate` given the interval's congestion feedback.
/// `rate` is used numerically as given; callers pick the unit.
inline UtilityValue utility(double rate, const Requirement& req, const IntervalStats& stats,
                            const CoefficientSet& coeffs, const PenaltySigns& signs = {}) {
  const double penalty = congestion_penalty(stats, coeffs, signs);
  const double h = requirement_penalty(normalized_rate(rate, req), coeffs.d_scale);
  return {utility_from_penalty(rate, h, penalty, coeffs.t), rate, penalty};
}

}  // namespace hercules
