#pragma once

// Competitor controllers for comparative runs: a fair-share online learner that
// shares the probing machinery, and a rate-based AIMD stand-in for loss-based
// TCP.

#include <algorithm>
#include <optional>
#include <utility>

#include "hercules/core.hpp"
#include "hercules/ratecontrol.hpp"

namespace hercules {

/// Fair-share utility: same coefficients, no requirement penalty and no RTT
/// deviation term.
inline UtilityModel vivace_like_model(CoefficientSet coeffs) {
  coeffs.phi = 0.0;
  return UtilityModel{coeffs, /*requirement_aware=*/false, PenaltySigns{}};
}

inline std::pair<ControllerState, RateDecision> vivace_like_decision(
    ControllerState state, const Requirement& req, const CoefficientSet& coeffs,
    const ControllerConfig& cfg, const IntervalStats& stats) {
  return on_interval_end(std::move(state), req, vivace_like_model(coeffs), cfg, stats);
}

struct AimdConfig {
  double additive_increase = 500 * kKbps;  // per RTT
  double multiplicative_decrease = 0.5;
  double loss_threshold = 0.0;
  double initial_rate = 1 * kMbps;
  double rate_floor = 1 * kKbps;
  IntervalPolicy interval_policy;

  bool operator==(const AimdConfig&) const = default;
};

inline AimdConfig validate_aimd_config(const AimdConfig& c) {
  if (!(c.multiplicative_decrease > 0.0 && c.multiplicative_decrease < 1.0))
    throw Error(ErrorKind::InvalidConfig, "multiplicative_decrease must lie in (0,1)");
  if (!(c.additive_increase >= 0.0)) throw Error(ErrorKind::InvalidConfig, "additive_increase must be >= 0");
  if (!(c.loss_threshold >= 0.0 && c.loss_threshold < 1.0))
    throw Error(ErrorKind::InvalidConfig, "loss_threshold must lie in [0,1)");
  if (!(c.initial_rate > 0.0 && c.rate_floor > 0.0))
    throw Error(ErrorKind::InvalidConfig, "AIMD rates must be positive");
  return c;
}

struct AimdState {
  double rate = 0.0;
  double scheduled_interval = 0.0;
  std::optional<double> smoothed_rtt;
};

inline AimdState new_aimd(const Requirement& req, const AimdConfig& cfg) {
  AimdState s;
  s.rate = std::max(cfg.initial_rate, cfg.rate_floor);
  if (req.bounded) s.rate = std::min(s.rate, req.max_rate);
  s.scheduled_interval = cfg.interval_policy(std::nullopt);
  return s;
}

inline std::pair<AimdState, RateDecision> aimd_decision(AimdState state, const Requirement& req,
                                                        const AimdConfig& cfg,
                                                        const IntervalStats& stats) {
  double rtt = stats.rtt_samples.empty() ? 0.0 : stats.mean_rtt();
  if (rtt > 0.0) state.smoothed_rtt = state.smoothed_rtt ? 0.875 * *state.smoothed_rtt + 0.125 * rtt : rtt;
  if (rtt <= 0.0) rtt = state.smoothed_rtt.value_or(stats.duration);

  if (stats.loss_ratio > cfg.loss_threshold) {
    state.rate *= cfg.multiplicative_decrease;
  } else {
    state.rate += cfg.additive_increase * (stats.duration / rtt);
  }
  state.rate = std::max(state.rate, cfg.rate_floor);
  if (req.bounded) state.rate = std::min(state.rate, req.max_rate);
  state.scheduled_interval = cfg.interval_policy(state.smoothed_rtt);
  return {state, RateDecision{state.rate, Mode::Moving, state.scheduled_interval}};
}

}  // namespace hercules
