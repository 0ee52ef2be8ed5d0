#pragma once

// Online-learning rate control: slow start, two-sided probing and directional
// moving, driven by the utility observed over consecutive update intervals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hercules/core.hpp"
#include "hercules/utility.hpp"

namespace hercules {

enum class Mode { SlowStart, Probing, Moving };
enum class Direction { Up, Down };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::SlowStart: return "slow_start";
    case Mode::Probing: return "probing";
    case Mode::Moving: return "moving";
  }
  return "unknown";
}

/// Interval length policy: max(rtt_multiple * smoothed RTT, floor).
struct IntervalPolicy {
  double rtt_multiple = 1.0;
  double floor = 10 * kMs;

  double operator()(std::optional<double> smoothed_rtt) const {
    if (!smoothed_rtt) return floor;
    return std::max(rtt_multiple * *smoothed_rtt, floor);
  }

  bool operator==(const IntervalPolicy&) const = default;
};

struct ControllerConfig {
  double initial_rate_cap = 5 * kKbps;
  double delta = 0.05;
  double step_fraction = 0.05;
  // Probe pairs per decision. With more than one pair the controller only
  // moves when every pair points the same way, and probes again otherwise.
  int probe_pairs = 4;
  double rate_floor = 1 * kKbps;
  IntervalPolicy interval_policy;
  // Utility is evaluated on rate / utility_rate_unit (Mbps by default).
  double utility_rate_unit = kMbps;
  // Relative utility difference below which a probe counts as a tie.
  double tie_tolerance = 1e-12;
  // RTT gradients are treated as zero when their magnitude is below
  // `gradient_deadband` or below `gradient_significance` standard errors of
  // the slope fit.
  double gradient_deadband = 0.0;
  double gradient_significance = 4.0;
  // Allowed relative mismatch between scheduled and reported interval length.
  double stale_tolerance = 0.5;

  bool operator==(const ControllerConfig&) const = default;
};

inline ControllerConfig validate_controller_config(const ControllerConfig& c) {
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw Error(ErrorKind::InvalidConfig, "delta must lie in (0,1)");
  if (!(c.step_fraction > 0.0 && c.step_fraction < 1.0))
    throw Error(ErrorKind::InvalidConfig, "step_fraction must lie in (0,1)");
  if (c.probe_pairs < 1) throw Error(ErrorKind::InvalidConfig, "probe_pairs must be >= 1");
  if (!(c.gradient_deadband >= 0.0 && c.gradient_significance >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "gradient filters must be >= 0");
  if (!(c.initial_rate_cap > 0.0)) throw Error(ErrorKind::InvalidConfig, "initial_rate_cap must be > 0");
  if (!(c.rate_floor > 0.0)) throw Error(ErrorKind::InvalidConfig, "rate_floor must be > 0");
  if (!(c.utility_rate_unit > 0.0)) throw Error(ErrorKind::InvalidConfig, "utility_rate_unit must be > 0");
  if (!(c.interval_policy.floor > 0.0 && c.interval_policy.rtt_multiple > 0.0))
    throw Error(ErrorKind::InvalidConfig, "interval policy must be positive");
  return c;
}

/// Which utility the state machine climbs. The requirement-aware form scales
/// the congestion penalty by the requirement penalty; the fair-share form
/// fixes that factor at one.
struct UtilityModel {
  CoefficientSet coeffs;
  bool requirement_aware = true;
  PenaltySigns signs;

  double evaluate(double rate, const Requirement& req, const IntervalStats& stats,
                  double rate_unit) const {
    const double penalty = congestion_penalty(stats, coeffs, signs);
    const double h =
        requirement_aware ? requirement_penalty(normalized_rate(rate, req), coeffs.d_scale) : 1.0;
    return utility_from_penalty(rate / rate_unit, h, penalty, coeffs.t);
  }
};

struct ProbeResult {
  double rate = 0.0;
  double utility = 0.0;
};

struct ControllerState {
  Mode mode = Mode::SlowStart;
  double current_rate = 0.0;
  Direction direction = Direction::Up;
  std::optional<double> last_utility;
  // Probe rates in send order, two per pair, consumed in turn.
  std::vector<double> probe_plan;
  std::vector<ProbeResult> probe_results;
  // Rate actually scheduled for the interval in flight.
  double scheduled_rate = 0.0;
  double scheduled_interval = 0.0;
  std::optional<double> smoothed_rtt;
  std::uint64_t rng = 0;
};

struct RateDecision {
  double next_rate = 0.0;
  Mode next_mode = Mode::SlowStart;
  double interval_length = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double clamp_rate(double rate, const Requirement& req, const ControllerConfig& cfg) {
  rate = std::max(rate, cfg.rate_floor);
  if (req.bounded) rate = std::min(rate, req.max_rate);
  return rate;
}

}  // namespace detail

inline double plan_interval(const ControllerState& state, const ControllerConfig& cfg) {
  return cfg.interval_policy(state.smoothed_rtt);
}

/// Fresh controller in slow start at min(initial cap, minimum requirement).
inline ControllerState new_controller(const Requirement& req, const ControllerConfig& cfg,
                                      std::uint64_t seed = 0) {
  ControllerState s;
  s.mode = Mode::SlowStart;
  s.current_rate = detail::clamp_rate(std::min(cfg.initial_rate_cap, req.min_rate), req, cfg);
  s.scheduled_rate = s.current_rate;
  s.scheduled_interval = plan_interval(s, cfg);
  s.rng = seed;
  return s;
}

namespace detail {

inline RateDecision begin_probe(ControllerState& s, double center, const Requirement& req,
                                const ControllerConfig& cfg) {
  s.mode = Mode::Probing;
  s.current_rate = center;
  const double up = clamp_rate(center * (1.0 + cfg.delta), req, cfg);
  const double down = clamp_rate(center * (1.0 - cfg.delta), req, cfg);
  s.probe_plan.clear();
  s.probe_results.clear();
  for (int pair = 0; pair < cfg.probe_pairs; ++pair) {
    const bool up_first = (splitmix64(s.rng) & 1U) != 0;
    s.probe_plan.push_back(up_first ? up : down);
    s.probe_plan.push_back(up_first ? down : up);
  }
  s.scheduled_rate = s.probe_plan.front();
  s.scheduled_interval = plan_interval(s, cfg);
  return {s.scheduled_rate, Mode::Probing, s.scheduled_interval};
}

inline RateDecision schedule(ControllerState& s, double rate, const ControllerConfig& cfg) {
  s.scheduled_rate = rate;
  s.scheduled_interval = plan_interval(s, cfg);
  return {rate, s.mode, s.scheduled_interval};
}

}  // namespace detail

/// Advances the state machine with the feedback of the interval that was just
/// sent at `state.scheduled_rate`.
inline std::pair<ControllerState, RateDecision> on_interval_end(
    ControllerState state, const Requirement& req, const UtilityModel& model,
    const ControllerConfig& cfg, const IntervalStats& stats) {
  if (state.scheduled_interval > 0.0 &&
      std::abs(stats.duration - state.scheduled_interval) >
          cfg.stale_tolerance * state.scheduled_interval) {
    throw Error(ErrorKind::StaleStats, "interval lasted " + std::to_string(stats.duration) +
                                           " s, scheduled " +
                                           std::to_string(state.scheduled_interval) + " s");
  }

  if (!stats.rtt_samples.empty()) {
    const double rtt = stats.mean_rtt();
    state.smoothed_rtt = state.smoothed_rtt ? 0.875 * *state.smoothed_rtt + 0.125 * rtt : rtt;
  }

  IntervalStats filtered_storage;
  const IntervalStats* used = &stats;
  if (cfg.gradient_deadband > 0.0 || cfg.gradient_significance > 0.0) {
    const double g = stats.rtt_gradient;
    const double se = cfg.gradient_significance > 0.0 ? slope_standard_error(stats.rtt_samples) : 0.0;
    if (std::abs(g) < cfg.gradient_deadband || std::abs(g) < cfg.gradient_significance * se) {
      filtered_storage = stats;
      filtered_storage.rtt_gradient = 0.0;
      used = &filtered_storage;
    }
  }
  const double sent = stats.avg_rate > 0.0 ? stats.avg_rate : state.scheduled_rate;
  const double u = model.evaluate(sent, req, *used, cfg.utility_rate_unit);

  RateDecision decision;
  switch (state.mode) {
    case Mode::SlowStart: {
      const bool dropped = state.last_utility && u < *state.last_utility;
      // A fair-share model has no notion of the requirement band, so only a
      // hard cap ends its slow start.
      const bool over_max = (model.requirement_aware || req.bounded) &&
                            state.current_rate >= req.max_rate;
      if (dropped) {
        // Fall back to the last rate that still improved utility.
        decision = detail::begin_probe(state, detail::clamp_rate(state.current_rate / 2.0, req, cfg),
                                       req, cfg);
        state.last_utility.reset();
      } else if (over_max) {
        decision = detail::begin_probe(state, state.current_rate, req, cfg);
        state.last_utility.reset();
      } else {
        state.last_utility = u;
        state.current_rate = detail::clamp_rate(state.current_rate * 2.0, req, cfg);
        decision = detail::schedule(state, state.current_rate, cfg);
      }
      break;
    }
    case Mode::Probing: {
      state.probe_results.push_back({state.scheduled_rate, u});
      if (state.probe_results.size() < state.probe_plan.size()) {
        decision = detail::schedule(state, state.probe_plan[state.probe_results.size()], cfg);
        break;
      }
      int up_votes = 0;
      double mean_up = 0.0, mean_down = 0.0;
      for (std::size_t k = 0; k + 1 < state.probe_results.size(); k += 2) {
        const auto& a = state.probe_results[k];
        const auto& b = state.probe_results[k + 1];
        const ProbeResult& hi = a.rate >= b.rate ? a : b;
        const ProbeResult& lo = a.rate >= b.rate ? b : a;
        const double scale = std::max({std::abs(hi.utility), std::abs(lo.utility), 1e-300});
        if ((hi.utility - lo.utility) > cfg.tie_tolerance * scale) ++up_votes;
        mean_up += hi.utility;
        mean_down += lo.utility;
      }
      const int pairs = static_cast<int>(state.probe_results.size() / 2);
      mean_up /= pairs;
      mean_down /= pairs;
      if (up_votes != 0 && up_votes != pairs) {
        decision = detail::begin_probe(state, state.current_rate, req, cfg);
        break;
      }
      const bool go_up = up_votes == pairs;
      state.mode = Mode::Moving;
      state.direction = go_up ? Direction::Up : Direction::Down;
      state.last_utility = go_up ? mean_up : mean_down;
      state.probe_plan.clear();
      state.probe_results.clear();
      const double factor = go_up ? 1.0 + cfg.step_fraction : 1.0 - cfg.step_fraction;
      state.current_rate = detail::clamp_rate(state.current_rate * factor, req, cfg);
      decision = detail::schedule(state, state.current_rate, cfg);
      break;
    }
    case Mode::Moving: {
      if (state.last_utility && u < *state.last_utility) {
        state.last_utility.reset();
        decision = detail::begin_probe(state, state.current_rate, req, cfg);
        break;
      }
      state.last_utility = u;
      const double factor = state.direction == Direction::Up ? 1.0 + cfg.step_fraction
                                                             : 1.0 - cfg.step_fraction;
      state.current_rate = detail::clamp_rate(state.current_rate * factor, req, cfg);
      decision = detail::schedule(state, state.current_rate, cfg);
      break;
    }
  }
  decision.next_mode = state.mode;
  return {std::move(state), decision};
}

}  // namespace hercules
