#pragma once

// Deterministic fluid model of a single shared bottleneck. Senders offer bits
// each tick; a drop-tail FIFO integrates the excess over capacity, and every
// sender learns its RTT and losses one RTT after sending.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hercules/baselines.hpp"
#include "hercules/core.hpp"
#include "hercules/ratecontrol.hpp"
#include "hercules/utility.hpp"

namespace hercules {

struct CapacitySegment {
  double start_time = 0.0;
  double capacity = 0.0;

  bool operator==(const CapacitySegment&) const = default;
};

struct BufferSpec {
  enum class Unit { Bytes, Bdp };
  Unit unit = Unit::Bdp;
  double value = 1.0;

  bool operator==(const BufferSpec&) const = default;
};

struct LinkModel {
  std::vector<CapacitySegment> capacity_schedule;
  double base_rtt = 0.0;
  BufferSpec buffer;
  double random_loss = 0.0;
  double packet_size_bytes = 1500.0;
  // Standard deviation of zero-mean noise added to each measured RTT sample.
  double rtt_jitter = 0.0;

  bool operator==(const LinkModel&) const = default;

  double capacity_at(double time) const {
    double c = capacity_schedule.front().capacity;
    for (const auto& seg : capacity_schedule) {
      if (seg.start_time <= time) c = seg.capacity;
      else break;
    }
    return c;
  }

  /// Buffer in bits. BDP multiples resolve against the first capacity segment.
  double buffer_bits() const {
    if (buffer.unit == BufferSpec::Unit::Bytes) return buffer.value * 8.0;
    return buffer.value * capacity_schedule.front().capacity * base_rtt;
  }
};

inline std::vector<std::string> link_violations(const LinkModel& link) {
  std::vector<std::string> out;
  if (link.capacity_schedule.empty()) {
    out.emplace_back("link.capacity_schedule must not be empty");
    return out;
  }
  if (link.capacity_schedule.front().start_time != 0.0)
    out.emplace_back("link.capacity_schedule must start at time 0");
  for (std::size_t i = 0; i < link.capacity_schedule.size(); ++i) {
    const auto& seg = link.capacity_schedule[i];
    if (!(seg.capacity > 0.0))
      out.push_back("link.capacity_schedule[" + std::to_string(i) + "].capacity must be > 0");
    if (i > 0 && !(seg.start_time > link.capacity_schedule[i - 1].start_time))
      out.push_back("link.capacity_schedule times must be strictly increasing");
  }
  if (!(link.base_rtt > 0.0)) out.emplace_back("link.base_rtt must be > 0");
  if (!(link.buffer.value >= 0.0)) out.emplace_back("link.buffer must be >= 0");
  if (!(link.random_loss >= 0.0 && link.random_loss <= 1.0))
    out.emplace_back("link.random_loss must lie in [0,1]");
  if (!(link.packet_size_bytes > 0.0)) out.emplace_back("link.packet_size_bytes must be > 0");
  if (!(link.rtt_jitter >= 0.0)) out.emplace_back("link.rtt_jitter must be >= 0");
  return out;
}

/// Outcome of one tick at the bottleneck for a vector of per-sender inflows.
struct TickOutcome {
  double queue = 0.0;
  double rtt = 0.0;
  double delivered = 0.0;
  double overflow = 0.0;
  std::vector<double> delivered_per_sender;
  std::vector<double> overflow_per_sender;
};

/// Advances the drop-tail queue by `dt`. `inflow_bits` are the bits each
/// sender pushes into the queue during the tick. Overflow is shared in
/// proportion to inflow; delivered bits likewise.
inline TickOutcome advance_queue(double queue, std::span<const double> inflow_bits,
                                 double capacity, double buffer, double base_rtt, double dt) {
  TickOutcome out;
  double inflow = 0.0;
  for (double b : inflow_bits) inflow += b;
  const double service = capacity * dt;
  const double unclamped = queue + inflow - service;
  out.overflow = std::max(0.0, unclamped - buffer);
  out.queue = std::clamp(unclamped, 0.0, buffer);
  out.delivered = queue + inflow - out.overflow - out.queue;
  out.rtt = base_rtt + out.queue / capacity;
  out.delivered_per_sender.resize(inflow_bits.size(), 0.0);
  out.overflow_per_sender.resize(inflow_bits.size(), 0.0);
  if (inflow > 0.0) {
    for (std::size_t i = 0; i < inflow_bits.size(); ++i) {
      const double share = inflow_bits[i] / inflow;
      out.overflow_per_sender[i] = out.overflow * share;
      out.delivered_per_sender[i] = out.delivered * share;
    }
  }
  return out;
}

enum class Protocol { Hercules, VivaceLike, Aimd };

inline const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Hercules: return "hercules";
    case Protocol::VivaceLike: return "vivace_like";
    case Protocol::Aimd: return "aimd";
  }
  return "unknown";
}

struct ConnectionSpec {
  std::string id;
  Requirement requirement;
  Protocol protocol = Protocol::Hercules;
  double start_time = 0.0;
  std::optional<double> stop_time;

  bool operator==(const ConnectionSpec&) const = default;
};

struct SimConfig {
  LinkModel link;
  std::vector<ConnectionSpec> connections;
  CoefficientSet coefficients;
  PenaltySigns signs;
  ControllerConfig controller;
  AimdConfig aimd;
  double duration = 0.0;
  double tick = 1 * kMs;
  double record_interval = 10 * kMs;
  std::uint64_t seed = 1;

  bool operator==(const SimConfig&) const = default;
};

inline std::vector<std::string> sim_config_violations(const SimConfig& cfg) {
  auto out = link_violations(cfg.link);
  if (!(cfg.duration > 0.0)) out.emplace_back("duration must be > 0");
  if (!(cfg.tick > 0.0)) out.emplace_back("tick must be > 0");
  if (cfg.link.base_rtt > 0.0 && cfg.tick > cfg.link.base_rtt / 4.0 + 1e-15)
    out.emplace_back("tick must be <= base_rtt / 4");
  if (!(cfg.record_interval >= cfg.tick)) out.emplace_back("record_interval must be >= tick");
  if (cfg.connections.empty()) out.emplace_back("connections must not be empty");
  for (const auto& c : cfg.connections) {
    try {
      validate_requirement(c.requirement);
    } catch (const Error& e) {
      out.push_back("connection '" + c.id + "': " + e.what());
    }
    if (!(c.start_time >= 0.0)) out.push_back("connection '" + c.id + "': start_time must be >= 0");
    if (c.stop_time && !(*c.stop_time > c.start_time))
      out.push_back("connection '" + c.id + "': stop_time must exceed start_time");
  }
  try {
    validate_coefficients(cfg.coefficients);
    validate_controller_config(cfg.controller);
    validate_aimd_config(cfg.aimd);
  } catch (const Error& e) {
    out.emplace_back(e.what());
  }
  return out;
}

inline void validate_sim_config(const SimConfig& cfg) {
  const auto v = sim_config_violations(cfg);
  if (v.empty()) return;
  std::string msg;
  for (const auto& s : v) msg += (msg.empty() ? "" : "; ") + s;
  throw Error(ErrorKind::InvalidScenario, msg);
}

/// One tick of feedback as seen by the sender.
struct FeedbackSample {
  double send_time = 0.0;
  double rtt = 0.0;
  double offered = 0.0;
  double lost = 0.0;
  double feedback_time = 0.0;
};

/// Builds interval stats from the samples of one measurement window.
inline IntervalStats collect_interval_stats(std::span<const FeedbackSample> window,
                                            double duration) {
  if (window.empty()) throw Error(ErrorKind::EmptyWindow, "no feedback samples in window");
  double offered = 0.0, lost = 0.0;
  std::vector<RttSample> rtts;
  rtts.reserve(window.size());
  for (const auto& s : window) {
    offered += s.offered;
    lost += s.lost;
    rtts.push_back({s.send_time, s.rtt});
  }
  const double loss = offered > 0.0 ? std::clamp(lost / offered, 0.0, 1.0) : 0.0;
  return make_interval_stats(offered / duration, loss, std::move(rtts), duration);
}

struct SeriesRecord {
  double time = 0.0;
  std::size_t conn = 0;
  std::string state;
  double send_rate = 0.0;
  double throughput = 0.0;
  double utility = 0.0;
  double rtt = 0.0;
  double loss_ratio = 0.0;
};

struct ConnectionSummary {
  std::string id;
  double avg_rate = 0.0;
  double satisfaction = 0.0;
};

struct SimResult {
  std::vector<SeriesRecord> time_series;
  std::vector<ConnectionSummary> connections;
  double utilization = 0.0;
  std::optional<double> convergence_time;
};

/// Per-connection rate traces on the record grid, for convergence analysis.
struct RateTrace {
  std::vector<double> times;
  std::vector<double> rates;
};

/// Averages a trace over consecutive `width`-second bins (bin end time kept).
inline RateTrace smooth_trace(const RateTrace& trace, double width) {
  RateTrace out;
  if (trace.times.empty() || width <= 0.0) return trace;
  const double origin = trace.times.front();
  std::size_t i = 0;
  while (i < trace.times.size()) {
    const auto bin = std::floor((trace.times[i] - origin) / width + 1e-9);
    double sum = 0.0;
    std::size_t n = 0;
    double last_t = trace.times[i];
    while (i < trace.times.size() && std::floor((trace.times[i] - origin) / width + 1e-9) == bin) {
      sum += trace.rates[i];
      last_t = trace.times[i];
      ++n;
      ++i;
    }
    out.times.push_back(last_t);
    out.rates.push_back(sum / static_cast<double>(n));
  }
  return out;
}

struct ConvergenceOptions {
  double band = 0.10;
  double hold = 5.0;
  // Rates are averaged over bins of this width before the band check.
  double smoothing = 1.0;
  double from = 0.0;
  double until = std::numeric_limits<double>::infinity();
};

/// Earliest time t >= from such that, over [t, t + hold], every trace stays
/// within +-band of its own mean over that window. Traces with no samples in
/// the window are ignored. Returns nullopt if no such t exists before `until`.
inline std::optional<double> convergence_time(const std::vector<RateTrace>& traces,
                                              const ConvergenceOptions& opt = {}) {
  std::vector<RateTrace> smoothed;
  smoothed.reserve(traces.size());
  for (const auto& tr : traces) {
    RateTrace clipped;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      if (tr.times[i] >= opt.from && tr.times[i] <= opt.until) {
        clipped.times.push_back(tr.times[i]);
        clipped.rates.push_back(tr.rates[i]);
      }
    }
    smoothed.push_back(opt.smoothing > 0.0 ? smooth_trace(clipped, opt.smoothing) : clipped);
  }

  std::vector<double> candidates;
  for (const auto& tr : smoothed) candidates.insert(candidates.end(), tr.times.begin(), tr.times.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const double eps = 1e-9;
  for (double start : candidates) {
    const double end = start + opt.hold;
    if (end > opt.until + eps) break;
    bool ok = true;
    bool any = false;
    for (const auto& tr : smoothed) {
      if (tr.times.empty() || tr.times.back() < end - eps) {
        // Trace ends before the window closes: only acceptable if it also
        // has no samples inside it.
        bool inside = false;
        for (double t : tr.times) inside |= (t >= start - eps);
        if (inside) { ok = false; break; }
        continue;
      }
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        if (tr.times[i] >= start - eps && tr.times[i] <= end + eps) {
          sum += tr.rates[i];
          ++n;
        }
      }
      if (n == 0) continue;
      any = true;
      const double mean = sum / static_cast<double>(n);
      for (std::size_t i = 0; i < tr.times.size() && ok; ++i) {
        if (tr.times[i] >= start - eps && tr.times[i] <= end + eps &&
            std::abs(tr.rates[i] - mean) > opt.band * std::abs(mean) + 1e-12) {
          ok = false;
        }
      }
      if (!ok) break;
    }
    if (ok && any) {
      // Report the start of the smoothing bin the window begins in.
      return std::max(opt.from, start - (opt.smoothing > 0.0 ? opt.smoothing : 0.0));
    }
  }
  return std::nullopt;
}

/// Splits a series into one send-rate trace per connection.
inline std::vector<RateTrace> rate_traces(const std::vector<SeriesRecord>& series,
                                          std::size_t connections) {
  std::vector<RateTrace> out(connections);
  for (const auto& r : series) {
    out[r.conn].times.push_back(r.time);
    out[r.conn].rates.push_back(r.send_rate);
  }
  return out;
}

/// Single-bottleneck fluid simulator. Strictly single threaded; two runs with
/// equal configuration produce identical results.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg) : cfg_(std::move(cfg)) {
    validate_sim_config(cfg_);
    buffer_ = cfg_.link.buffer_bits();
    packet_bits_ = cfg_.link.packet_size_bytes * 8.0;
    senders_.resize(cfg_.connections.size());
    for (std::size_t i = 0; i < senders_.size(); ++i) {
      senders_[i].spec = &cfg_.connections[i];
      senders_[i].rng = cfg_.seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL * (i + 1);
    }
    ticks_per_record_ =
        std::max<std::int64_t>(1, std::llround(cfg_.record_interval / cfg_.tick));
    total_ticks_ = std::llround(cfg_.duration / cfg_.tick);
  }

  double clock() const { return static_cast<double>(tick_index_) * cfg_.tick; }
  double queue() const { return queue_; }
  double buffer() const { return buffer_; }
  bool finished() const { return tick_index_ >= total_ticks_; }
  const SimConfig& config() const { return cfg_; }

  /// Totals since the start of the run, for conservation checks.
  struct Ledger {
    double offered = 0.0;
    double delivered = 0.0;
    double lost = 0.0;
  };
  const Ledger& ledger() const { return ledger_; }

  struct TickTrace {
    double time = 0.0;
    double capacity = 0.0;
    double queue_before = 0.0;
    double queue_after = 0.0;
    double offered = 0.0;
    double delivered = 0.0;
    double lost = 0.0;
    double rtt = 0.0;
  };
  const TickTrace& last_tick() const { return last_tick_; }

  double sending_rate(std::size_t i) const { return senders_[i].active ? senders_[i].rate : 0.0; }
  const std::vector<SeriesRecord>& series() const { return series_; }

  /// Decision log entry, used to check feedback causality.
  struct DecisionEvent {
    std::size_t conn = 0;
    double time = 0.0;
    double newest_send_time = 0.0;
    double newest_feedback_time = 0.0;
  };
  const std::vector<DecisionEvent>& decisions() const { return decisions_; }

  void step() {
    const double now = clock();
    const double dt = cfg_.tick;
    const double capacity = cfg_.link.capacity_at(now);

    for (std::size_t i = 0; i < senders_.size(); ++i) update_activity(i, now);
    for (std::size_t i = 0; i < senders_.size(); ++i) maybe_decide(i, now);

    std::vector<double> offered(senders_.size(), 0.0);
    std::vector<double> random_lost(senders_.size(), 0.0);
    std::vector<double> inflow(senders_.size(), 0.0);
    for (std::size_t i = 0; i < senders_.size(); ++i) {
      if (!senders_[i].active) continue;
      offered[i] = senders_[i].rate * dt;
      random_lost[i] = thin(senders_[i], offered[i]);
      inflow[i] = offered[i] - random_lost[i];
    }

    const double queue_before = queue_;
    auto tick = advance_queue(queue_, inflow, capacity, buffer_, cfg_.link.base_rtt, dt);
    queue_ = tick.queue;

    TickTrace trace{now, capacity, queue_before, queue_, 0.0, tick.delivered, 0.0, tick.rtt};
    for (std::size_t i = 0; i < senders_.size(); ++i) {
      auto& s = senders_[i];
      if (!s.active) continue;
      const double lost = random_lost[i] + tick.overflow_per_sender[i];
      trace.offered += offered[i];
      trace.lost += lost;
      if (s.window_open) {
        const double measured = std::max(cfg_.link.base_rtt * 0.5, tick.rtt + jitter(s));
        s.window.push_back({now, measured, offered[i], lost, now + tick.rtt});
        if (static_cast<double>(s.window.size()) * dt >= s.window_length - 1e-12) s.window_open = false;
      }
      s.bucket.send += offered[i];
      s.bucket.delivered += tick.delivered_per_sender[i];
      s.bucket.lost += lost;
      s.bucket.rtt += tick.rtt;
      s.bucket.ticks += 1;
    }
    ledger_.offered += trace.offered;
    ledger_.delivered += trace.delivered;
    ledger_.lost += trace.lost;
    last_tick_ = trace;

    ++tick_index_;
    if (tick_index_ % ticks_per_record_ == 0 || tick_index_ == total_ticks_) flush_records();
  }

  SimResult run() {
    while (!finished()) step();
    return summarize_run();
  }

  /// Summary over the recorded series. Satisfaction averages the send rate over
  /// each connection's active lifetime; utilization averages aggregate send
  /// rate over capacity from `warmup` on.
  SimResult summarize_run(double warmup = 0.0) const {
    SimResult out;
    out.time_series = series_;
    out.connections = summarize_connections(series_, cfg_);
    out.utilization = utilization(series_, cfg_, warmup);
    out.convergence_time =
        convergence_time(rate_traces(series_, cfg_.connections.size()), ConvergenceOptions{});
    return out;
  }

  static std::vector<ConnectionSummary> summarize_connections(
      const std::vector<SeriesRecord>& series, const SimConfig& cfg) {
    std::vector<double> sum(cfg.connections.size(), 0.0);
    std::vector<std::size_t> n(cfg.connections.size(), 0);
    for (const auto& r : series) {
      sum[r.conn] += r.send_rate;
      ++n[r.conn];
    }
    std::vector<ConnectionSummary> out;
    for (std::size_t i = 0; i < cfg.connections.size(); ++i) {
      const double avg = n[i] ? sum[i] / static_cast<double>(n[i]) : 0.0;
      out.push_back({cfg.connections[i].id, avg, avg / cfg.connections[i].requirement.min_rate});
    }
    return out;
  }

  static double utilization(const std::vector<SeriesRecord>& series, const SimConfig& cfg,
                            double warmup) {
    // Records sharing a timestamp are summed, then divided by capacity.
    double total = 0.0;
    std::size_t buckets = 0;
    std::size_t i = 0;
    while (i < series.size()) {
      const double t = series[i].time;
      double agg = 0.0;
      while (i < series.size() && series[i].time == t) agg += series[i++].send_rate;
      if (t <= warmup) continue;
      total += agg / cfg.link.capacity_at(t - cfg.record_interval * 0.5);
      ++buckets;
    }
    return buckets ? total / static_cast<double>(buckets) : 0.0;
  }

 private:
  struct Bucket {
    double send = 0.0;
    double delivered = 0.0;
    double lost = 0.0;
    double rtt = 0.0;
    std::int64_t ticks = 0;
  };

  struct Sender {
    const ConnectionSpec* spec = nullptr;
    bool active = false;
    bool started = false;
    double rate = 0.0;
    ControllerState hercules;
    AimdState aimd;
    double window_start = 0.0;
    double window_length = 0.0;
    bool window_open = false;
    std::vector<FeedbackSample> window;
    double last_utility = 0.0;
    Bucket bucket;
    std::uint64_t rng = 0;
  };

  UtilityModel model_for(Protocol p) const {
    if (p == Protocol::VivaceLike) return vivace_like_model(cfg_.coefficients);
    return UtilityModel{cfg_.coefficients, true, cfg_.signs};
  }

  void update_activity(std::size_t i, double now) {
    auto& s = senders_[i];
    const auto& spec = *s.spec;
    if (!s.started && now >= spec.start_time - 1e-12) {
      s.started = true;
      s.active = true;
      if (spec.protocol == Protocol::Aimd) {
        s.aimd = new_aimd(spec.requirement, cfg_.aimd);
        s.rate = s.aimd.rate;
        open_window(s, now, s.aimd.scheduled_interval);
      } else {
        s.hercules = new_controller(spec.requirement, cfg_.controller, s.rng ^ 0xa5a5a5a5ULL);
        s.rate = s.hercules.scheduled_rate;
        open_window(s, now, s.hercules.scheduled_interval);
      }
    }
    if (s.active && spec.stop_time && now >= *spec.stop_time - 1e-12) {
      s.active = false;
      s.rate = 0.0;
      s.window.clear();
      s.window_open = false;
    }
  }

  void open_window(Sender& s, double now, double length) {
    s.window.clear();
    s.window_start = now;
    // Whole ticks only, so reported durations match the schedule.
    const double ticks = std::max(1.0, std::round(length / cfg_.tick));
    s.window_length = ticks * cfg_.tick;
    s.window_open = true;
  }

  void maybe_decide(std::size_t i, double now) {
    auto& s = senders_[i];
    if (!s.active || s.window_open || s.window.empty()) return;
    if (s.window.back().feedback_time > now + 1e-12) return;

    const auto stats = collect_interval_stats(s.window, s.window_length);
    decisions_.push_back({i, now, s.window.back().send_time, s.window.back().feedback_time});
    const auto& spec = *s.spec;
    RateDecision d;
    if (spec.protocol == Protocol::Aimd) {
      auto [next, dec] = aimd_decision(s.aimd, spec.requirement, cfg_.aimd, stats);
      s.aimd = next;
      d = dec;
      s.last_utility = UtilityModel{cfg_.coefficients, true, cfg_.signs}.evaluate(
          stats.avg_rate, spec.requirement, stats, cfg_.controller.utility_rate_unit);
    } else {
      const auto model = model_for(spec.protocol);
      s.last_utility =
          model.evaluate(stats.avg_rate > 0.0 ? stats.avg_rate : s.hercules.scheduled_rate,
                         spec.requirement, stats, cfg_.controller.utility_rate_unit);
      auto [next, dec] = on_interval_end(s.hercules, spec.requirement, model, cfg_.controller, stats);
      s.hercules = std::move(next);
      d = dec;
    }
    s.rate = d.next_rate;
    open_window(s, now, d.interval_length);
  }

  double thin(Sender& s, double offered) {
    const double p = cfg_.link.random_loss;
    if (p <= 0.0 || offered <= 0.0) return 0.0;
    const auto packets = std::max<std::int64_t>(1, std::llround(offered / packet_bits_));
    std::int64_t lost = 0;
    for (std::int64_t k = 0; k < packets; ++k) {
      const double u = static_cast<double>(detail::splitmix64(s.rng) >> 11) * 0x1.0p-53;
      if (u < p) ++lost;
    }
    return offered * static_cast<double>(lost) / static_cast<double>(packets);
  }

  double jitter(Sender& s) {
    if (cfg_.link.rtt_jitter <= 0.0) return 0.0;
    const double u1 = (static_cast<double>(detail::splitmix64(s.rng) >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(detail::splitmix64(s.rng) >> 11) * 0x1.0p-53;
    return cfg_.link.rtt_jitter * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  void flush_records() {
    const double now = clock();
    for (std::size_t i = 0; i < senders_.size(); ++i) {
      auto& s = senders_[i];
      if (s.bucket.ticks == 0) continue;
      const double span = static_cast<double>(s.bucket.ticks) * cfg_.tick;
      SeriesRecord r;
      r.time = now;
      r.conn = i;
      r.state = s.spec->protocol == Protocol::Aimd ? "aimd" : to_string(s.hercules.mode);
      r.send_rate = s.bucket.send / span;
      r.throughput = s.bucket.delivered / span;
      r.utility = s.last_utility;
      r.rtt = s.bucket.rtt / static_cast<double>(s.bucket.ticks);
      r.loss_ratio = s.bucket.send > 0.0 ? s.bucket.lost / s.bucket.send : 0.0;
      series_.push_back(std::move(r));
      s.bucket = Bucket{};
    }
  }

  SimConfig cfg_;
  double buffer_ = 0.0;
  double queue_ = 0.0;
  double packet_bits_ = 12000.0;
  std::int64_t tick_index_ = 0;
  std::int64_t total_ticks_ = 0;
  std::int64_t ticks_per_record_ = 1;
  std::vector<Sender> senders_;
  std::vector<SeriesRecord> series_;
  std::vector<DecisionEvent> decisions_;
  Ledger ledger_;
  TickTrace last_tick_;
};

inline SimResult run(const SimConfig& cfg) { return Simulator(cfg).run(); }

}  // namespace hercules
