#pragma once

// Declarative experiment files: JSON scenarios in SI units (bits/s and
// seconds), trial execution across threads, summary reports, CSV time series
// and sweeps over capacity, random loss, buffer size or the steepness D.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hercules/fairness.hpp"
#include "hercules/sim.hpp"

namespace hercules {

using Json = nlohmann::json;

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : Error(ErrorKind::ParseError, describe(line, field, what)),
        line_(line),
        field_(std::move(field)) {}

  /// 1-based line of a syntax error, 0 when the problem is structural.
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string describe(std::size_t line, const std::string& field, const std::string& what) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + what;
  }

  std::size_t line_;
  std::string field_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(ErrorKind::ValidationError, join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
    return out;
  }

  std::vector<std::string> violations_;
};

enum class SweepParam { Capacity, Loss, Buffer, D };

inline const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Capacity: return "capacity";
    case SweepParam::Loss: return "loss";
    case SweepParam::Buffer: return "buffer";
    case SweepParam::D: return "d";
  }
  return "unknown";
}

inline std::optional<SweepParam> parse_sweep_param(const std::string& s) {
  if (s == "capacity") return SweepParam::Capacity;
  if (s == "loss") return SweepParam::Loss;
  if (s == "buffer") return SweepParam::Buffer;
  if (s == "d") return SweepParam::D;
  return std::nullopt;
}

struct SweepSpec {
  SweepParam param = SweepParam::Capacity;
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

struct OutputSpec {
  std::string directory;
  bool time_series_csv = true;

  bool operator==(const OutputSpec&) const = default;
};

struct ScenarioConfig {
  std::string name;
  SimConfig sim;
  int trials = 1;
  // Utilization ignores the first `warmup` seconds of each trial.
  double warmup = 5.0;
  OutputSpec output;
  std::optional<SweepSpec> sweep;

  bool operator==(const ScenarioConfig&) const = default;
};

inline std::optional<Protocol> parse_protocol(const std::string& s) {
  if (s == "hercules") return Protocol::Hercules;
  if (s == "vivace_like") return Protocol::VivaceLike;
  if (s == "aimd") return Protocol::Aimd;
  return std::nullopt;
}

inline std::vector<std::string> scenario_violations(const ScenarioConfig& cfg) {
  auto out = sim_config_violations(cfg.sim);
  if (cfg.trials < 1) out.emplace_back("trials must be >= 1");
  if (!(cfg.warmup >= 0.0)) out.emplace_back("warmup_s must be >= 0");
  if (cfg.sim.duration > 0.0 && !(cfg.warmup < cfg.sim.duration))
    out.emplace_back("warmup_s must be shorter than duration_s");
  std::set<std::string> ids;
  for (const auto& c : cfg.sim.connections) {
    if (c.id.empty()) out.emplace_back("connection ids must not be empty");
    if (!ids.insert(c.id).second) out.push_back("duplicate connection id '" + c.id + "'");
  }
  if (cfg.sweep && cfg.sweep->values.empty()) out.emplace_back("sweep.values must not be empty");
  return out;
}

inline void validate_scenario(const ScenarioConfig& cfg) {
  auto v = scenario_violations(cfg);
  if (!v.empty()) throw ValidationError(std::move(v));
}

namespace detail {

/// Walks one JSON object, remembering which keys were consumed so that
/// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(0, path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& raw(const std::string& key) {
    if (!j_.contains(key)) throw ParseError(0, field(key), "required field is missing");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number()) throw ParseError(0, field(key), "expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number_integer()) throw ParseError(0, field(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number_unsigned()) throw ParseError(0, field(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_boolean()) throw ParseError(0, field(key), "expected true or false");
    return v.get<bool>();
  }

  bool boolean_or(const std::string& key, bool fallback) { return has(key) ? boolean(key) : fallback; }

  std::string string(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_string()) throw ParseError(0, field(key), "expected a string");
    return v.get<std::string>();
  }

  const Json& array(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array()) throw ParseError(0, field(key), "expected an array");
    return v;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ParseError(0, field(key), "unknown field");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline LinkModel read_link(ObjectReader& root) {
  ObjectReader r(root.raw("link"), "link");
  LinkModel link;
  const auto& schedule = r.array("capacity_schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    ObjectReader seg(schedule[i], "link.capacity_schedule[" + std::to_string(i) + "]");
    link.capacity_schedule.push_back({seg.number("start_s"), seg.number("capacity_bps")});
    seg.finish();
  }
  link.base_rtt = r.number("base_rtt_s");
  {
    ObjectReader b(r.raw("buffer"), "link.buffer");
    if (b.has("bdp") == b.has("bytes"))
      throw ParseError(0, "link.buffer", "give exactly one of 'bdp' or 'bytes'");
    if (b.has("bdp")) link.buffer = {BufferSpec::Unit::Bdp, b.number("bdp")};
    else link.buffer = {BufferSpec::Unit::Bytes, b.number("bytes")};
    b.finish();
  }
  link.random_loss = r.number("random_loss");
  link.rtt_jitter = r.number("rtt_jitter_s");
  link.packet_size_bytes = r.number_or("packet_size_bytes", link.packet_size_bytes);
  r.finish();
  return link;
}

inline ConnectionSpec read_connection(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  ConnectionSpec c;
  c.id = r.string("id");
  c.requirement.min_rate = r.number("min_bps");
  c.requirement.max_rate = r.number("max_bps");
  c.requirement.bounded = r.boolean("bounded");
  const auto proto = r.string("protocol");
  const auto p = parse_protocol(proto);
  if (!p) throw ParseError(0, r.field("protocol"), "unknown protocol '" + proto + "'");
  c.protocol = *p;
  c.start_time = r.number_or("start_s", 0.0);
  if (r.has("stop_s")) c.stop_time = r.number("stop_s");
  r.finish();
  return c;
}

inline void read_optional_sections(ObjectReader& root, ScenarioConfig& cfg) {
  auto& sim = cfg.sim;
  if (root.has("coefficients")) {
    ObjectReader r(root.raw("coefficients"), "coefficients");
    auto& c = sim.coefficients;
    c.t = r.number_or("t", c.t);
    c.beta = r.number_or("beta", c.beta);
    c.gamma = r.number_or("gamma", c.gamma);
    c.phi = r.number_or("phi", c.phi);
    c.d_scale = r.number_or("d", c.d_scale);
    r.finish();
  }
  if (root.has("penalty_signs")) {
    ObjectReader r(root.raw("penalty_signs"), "penalty_signs");
    auto& s = sim.signs;
    s.loss = r.number_or("loss", s.loss);
    s.gradient = r.number_or("gradient", s.gradient);
    s.stddev = r.number_or("stddev", s.stddev);
    r.finish();
  }
  if (root.has("controller")) {
    ObjectReader r(root.raw("controller"), "controller");
    auto& c = sim.controller;
    c.initial_rate_cap = r.number_or("initial_rate_cap_bps", c.initial_rate_cap);
    c.delta = r.number_or("delta", c.delta);
    c.step_fraction = r.number_or("step_fraction", c.step_fraction);
    if (r.has("probe_pairs")) c.probe_pairs = static_cast<int>(r.integer("probe_pairs"));
    c.rate_floor = r.number_or("rate_floor_bps", c.rate_floor);
    c.interval_policy.rtt_multiple = r.number_or("interval_rtt_multiple", c.interval_policy.rtt_multiple);
    c.interval_policy.floor = r.number_or("interval_floor_s", c.interval_policy.floor);
    c.utility_rate_unit = r.number_or("utility_rate_unit_bps", c.utility_rate_unit);
    c.tie_tolerance = r.number_or("tie_tolerance", c.tie_tolerance);
    c.gradient_deadband = r.number_or("gradient_deadband", c.gradient_deadband);
    c.gradient_significance = r.number_or("gradient_significance", c.gradient_significance);
    c.stale_tolerance = r.number_or("stale_tolerance", c.stale_tolerance);
    r.finish();
  }
  if (root.has("aimd")) {
    ObjectReader r(root.raw("aimd"), "aimd");
    auto& a = sim.aimd;
    a.additive_increase = r.number_or("additive_increase_bps", a.additive_increase);
    a.multiplicative_decrease = r.number_or("multiplicative_decrease", a.multiplicative_decrease);
    a.loss_threshold = r.number_or("loss_threshold", a.loss_threshold);
    a.initial_rate = r.number_or("initial_rate_bps", a.initial_rate);
    a.rate_floor = r.number_or("rate_floor_bps", a.rate_floor);
    a.interval_policy.rtt_multiple = r.number_or("interval_rtt_multiple", a.interval_policy.rtt_multiple);
    a.interval_policy.floor = r.number_or("interval_floor_s", a.interval_policy.floor);
    r.finish();
  }
  if (root.has("simulation")) {
    ObjectReader r(root.raw("simulation"), "simulation");
    sim.tick = r.number_or("tick_s", sim.tick);
    sim.record_interval = r.number_or("record_interval_s", sim.record_interval);
    r.finish();
  }
  if (root.has("output")) {
    ObjectReader r(root.raw("output"), "output");
    if (r.has("directory")) cfg.output.directory = r.string("directory");
    cfg.output.time_series_csv = r.boolean_or("time_series_csv", cfg.output.time_series_csv);
    r.finish();
  }
  if (root.has("sweep")) {
    ObjectReader r(root.raw("sweep"), "sweep");
    SweepSpec sw;
    const auto name = r.string("param");
    const auto p = parse_sweep_param(name);
    if (!p) throw ParseError(0, "sweep.param", "expected one of capacity, loss, buffer, d");
    sw.param = *p;
    const auto& values = r.array("values");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i].is_number())
        throw ParseError(0, "sweep.values[" + std::to_string(i) + "]", "expected a number");
      sw.values.push_back(values[i].get<double>());
    }
    r.finish();
    cfg.sweep = sw;
  }
}

}  // namespace detail

/// Parses scenario text. Syntax errors and schema problems raise ParseError;
/// semantically invalid values raise ValidationError listing every violation.
inline ScenarioConfig parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0), "", e.what());
  }
  ScenarioConfig cfg;
  detail::ObjectReader root(j, "");
  cfg.name = root.string("name");
  cfg.sim.duration = root.number("duration_s");
  cfg.sim.seed = root.unsigned_integer("seed");
  cfg.trials = static_cast<int>(root.integer("trials"));
  cfg.warmup = root.number_or("warmup_s", cfg.warmup);
  cfg.sim.link = detail::read_link(root);
  const auto& conns = root.array("connections");
  for (std::size_t i = 0; i < conns.size(); ++i)
    cfg.sim.connections.push_back(
        detail::read_connection(conns[i], "connections[" + std::to_string(i) + "]"));
  detail::read_optional_sections(root, cfg);
  root.finish();
  validate_scenario(cfg);
  return cfg;
}

inline ScenarioConfig parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

/// Canonical form: every field is written, so parsing the result reproduces
/// the configuration exactly.
inline Json emit_scenario(const ScenarioConfig& cfg) {
  const auto& sim = cfg.sim;
  Json j;
  j["name"] = cfg.name;
  j["duration_s"] = sim.duration;
  j["seed"] = sim.seed;
  j["trials"] = cfg.trials;
  j["warmup_s"] = cfg.warmup;

  Json link;
  link["capacity_schedule"] = Json::array();
  for (const auto& seg : sim.link.capacity_schedule)
    link["capacity_schedule"].push_back({{"start_s", seg.start_time}, {"capacity_bps", seg.capacity}});
  link["base_rtt_s"] = sim.link.base_rtt;
  link["buffer"] = sim.link.buffer.unit == BufferSpec::Unit::Bdp
                       ? Json{{"bdp", sim.link.buffer.value}}
                       : Json{{"bytes", sim.link.buffer.value}};
  link["random_loss"] = sim.link.random_loss;
  link["rtt_jitter_s"] = sim.link.rtt_jitter;
  link["packet_size_bytes"] = sim.link.packet_size_bytes;
  j["link"] = link;

  j["connections"] = Json::array();
  for (const auto& c : sim.connections) {
    Json cj{{"id", c.id},
            {"min_bps", c.requirement.min_rate},
            {"max_bps", c.requirement.max_rate},
            {"bounded", c.requirement.bounded},
            {"protocol", to_string(c.protocol)},
            {"start_s", c.start_time}};
    if (c.stop_time) cj["stop_s"] = *c.stop_time;
    j["connections"].push_back(cj);
  }

  const auto& co = sim.coefficients;
  j["coefficients"] = {{"t", co.t}, {"beta", co.beta}, {"gamma", co.gamma}, {"phi", co.phi}, {"d", co.d_scale}};
  j["penalty_signs"] = {{"loss", sim.signs.loss}, {"gradient", sim.signs.gradient}, {"stddev", sim.signs.stddev}};
  const auto& c = sim.controller;
  j["controller"] = {{"initial_rate_cap_bps", c.initial_rate_cap},
                     {"delta", c.delta},
                     {"step_fraction", c.step_fraction},
                     {"probe_pairs", c.probe_pairs},
                     {"rate_floor_bps", c.rate_floor},
                     {"interval_rtt_multiple", c.interval_policy.rtt_multiple},
                     {"interval_floor_s", c.interval_policy.floor},
                     {"utility_rate_unit_bps", c.utility_rate_unit},
                     {"tie_tolerance", c.tie_tolerance},
                     {"gradient_deadband", c.gradient_deadband},
                     {"gradient_significance", c.gradient_significance},
                     {"stale_tolerance", c.stale_tolerance}};
  const auto& a = sim.aimd;
  j["aimd"] = {{"additive_increase_bps", a.additive_increase},
               {"multiplicative_decrease", a.multiplicative_decrease},
               {"loss_threshold", a.loss_threshold},
               {"initial_rate_bps", a.initial_rate},
               {"rate_floor_bps", a.rate_floor},
               {"interval_rtt_multiple", a.interval_policy.rtt_multiple},
               {"interval_floor_s", a.interval_policy.floor}};
  j["simulation"] = {{"tick_s", sim.tick}, {"record_interval_s", sim.record_interval}};
  j["output"] = {{"directory", cfg.output.directory}, {"time_series_csv", cfg.output.time_series_csv}};
  if (cfg.sweep) j["sweep"] = {{"param", to_string(cfg.sweep->param)}, {"values", cfg.sweep->values}};
  return j;
}

// ---------------------------------------------------------------------------
// Running and summarizing

struct TrialResult {
  std::uint64_t seed = 0;
  SimResult result;
};

struct ConnectionReport {
  std::string id;
  Protocol protocol = Protocol::Hercules;
  Requirement requirement;
  double mean_avg_rate = 0.0;
  double mean_satisfaction = 0.0;
  double worst_satisfaction = 0.0;
  // Standard deviation over mean of the send rate in the final third.
  double mean_oscillation = 0.0;
};

struct SegmentConvergence {
  double start = 0.0;
  double capacity = 0.0;
  // Seconds after the segment start, median over trials that converged.
  std::optional<double> median_delay;
  int converged_trials = 0;
};

struct OracleEntry {
  double start = 0.0;
  double capacity = 0.0;
  Allocation hrf;
  Allocation mmf;
};

struct SummaryReport {
  std::string name;
  int trials = 0;
  double d_scale = 0.0;
  std::vector<ConnectionReport> connections;
  std::vector<double> utilizations;
  double median_utilization = 0.0;
  std::optional<double> median_convergence_time;
  std::vector<SegmentConvergence> segments;
  std::vector<OracleEntry> oracle;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Standard deviation over mean of each connection's send rate for records
/// at or after `from`.
inline std::vector<double> rate_oscillation(const std::vector<SeriesRecord>& series,
                                            std::size_t connections, double from) {
  std::vector<double> sum(connections, 0.0), sq(connections, 0.0);
  std::vector<std::size_t> n(connections, 0);
  for (const auto& r : series) {
    if (r.time < from) continue;
    sum[r.conn] += r.send_rate;
    sq[r.conn] += r.send_rate * r.send_rate;
    ++n[r.conn];
  }
  std::vector<double> out(connections, 0.0);
  for (std::size_t i = 0; i < connections; ++i) {
    if (n[i] == 0) continue;
    const double mean = sum[i] / static_cast<double>(n[i]);
    const double var = std::max(0.0, sq[i] / static_cast<double>(n[i]) - mean * mean);
    out[i] = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  }
  return out;
}

/// Reference allocations for each capacity segment of the link.
inline std::vector<OracleEntry> oracle_allocations(const SimConfig& sim, bool respect_bounds = true) {
  std::vector<OracleEntry> out;
  AllocationProblem p;
  for (const auto& c : sim.connections) p.requirements.push_back(c.requirement);
  p.respect_bounds = respect_bounds;
  for (const auto& seg : sim.link.capacity_schedule) {
    p.capacity = seg.capacity;
    out.push_back({seg.start_time, seg.capacity, hrf_allocate(p), mmf_allocate(p)});
  }
  return out;
}

inline SummaryReport summarize(const std::vector<TrialResult>& trials, const ScenarioConfig& cfg) {
  if (trials.empty()) throw Error(ErrorKind::InvalidConfig, "no trial results to summarize");
  const auto& sim = cfg.sim;
  const std::size_t n = sim.connections.size();
  SummaryReport rep;
  rep.name = cfg.name;
  rep.trials = static_cast<int>(trials.size());
  rep.d_scale = sim.coefficients.d_scale;

  for (std::size_t i = 0; i < n; ++i) {
    ConnectionReport c;
    c.id = sim.connections[i].id;
    c.protocol = sim.connections[i].protocol;
    c.requirement = sim.connections[i].requirement;
    c.worst_satisfaction = std::numeric_limits<double>::infinity();
    rep.connections.push_back(c);
  }
  std::vector<double> convergence;
  std::vector<std::vector<double>> seg_delays(sim.link.capacity_schedule.size());
  for (const auto& t : trials) {
    const auto& series = t.result.time_series;
    const auto summaries = Simulator::summarize_connections(series, sim);
    const auto osc = rate_oscillation(series, n, sim.duration * 2.0 / 3.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = rep.connections[i];
      c.mean_avg_rate += summaries[i].avg_rate;
      c.mean_satisfaction += summaries[i].satisfaction;
      c.worst_satisfaction = std::min(c.worst_satisfaction, summaries[i].satisfaction);
      c.mean_oscillation += osc[i];
    }
    rep.utilizations.push_back(Simulator::utilization(series, sim, cfg.warmup));

    const auto traces = rate_traces(series, n);
    if (auto ct = convergence_time(traces, ConvergenceOptions{})) convergence.push_back(*ct);
    const auto& sched = sim.link.capacity_schedule;
    for (std::size_t s = 0; s < sched.size(); ++s) {
      ConvergenceOptions opt;
      opt.from = sched[s].start_time;
      opt.until = s + 1 < sched.size() ? sched[s + 1].start_time : sim.duration;
      if (auto ct = convergence_time(traces, opt)) seg_delays[s].push_back(*ct - opt.from);
    }
  }
  const double k = static_cast<double>(trials.size());
  for (auto& c : rep.connections) {
    c.mean_avg_rate /= k;
    c.mean_satisfaction /= k;
    c.mean_oscillation /= k;
  }
  rep.median_utilization = median(rep.utilizations);
  if (!convergence.empty()) rep.median_convergence_time = median(convergence);
  for (std::size_t s = 0; s < sim.link.capacity_schedule.size(); ++s) {
    SegmentConvergence sc;
    sc.start = sim.link.capacity_schedule[s].start_time;
    sc.capacity = sim.link.capacity_schedule[s].capacity;
    sc.converged_trials = static_cast<int>(seg_delays[s].size());
    if (!seg_delays[s].empty()) sc.median_delay = median(seg_delays[s]);
    rep.segments.push_back(sc);
  }
  rep.oracle = oracle_allocations(sim);
  return rep;
}

inline Json allocation_json(const Allocation& a) {
  return {{"rates_bps", a.rates}, {"normalized", a.normalized}, {"theta", a.theta}};
}

inline Json oracle_json(const std::vector<OracleEntry>& entries, const SimConfig& sim) {
  Json out = Json::array();
  for (const auto& e : entries) {
    Json ids = Json::array();
    for (const auto& c : sim.connections) ids.push_back(c.id);
    out.push_back({{"start_s", e.start},
                   {"capacity_bps", e.capacity},
                   {"connections", ids},
                   {"hrf", allocation_json(e.hrf)},
                   {"mmf", allocation_json(e.mmf)}});
  }
  return out;
}

inline Json summary_json(const SummaryReport& rep, const SimConfig& sim) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  Json j;
  j["name"] = rep.name;
  j["trials"] = rep.trials;
  j["d"] = rep.d_scale;
  j["connections"] = Json::array();
  for (const auto& c : rep.connections) {
    j["connections"].push_back({{"id", c.id},
                                {"protocol", to_string(c.protocol)},
                                {"min_bps", c.requirement.min_rate},
                                {"max_bps", c.requirement.max_rate},
                                {"bounded", c.requirement.bounded},
                                {"mean_avg_rate_bps", c.mean_avg_rate},
                                {"mean_satisfaction", c.mean_satisfaction},
                                {"worst_satisfaction", c.worst_satisfaction},
                                {"mean_oscillation", c.mean_oscillation}});
  }
  j["utilization"] = {{"median", rep.median_utilization}, {"per_trial", rep.utilizations}};
  j["convergence_time_s"] = opt(rep.median_convergence_time);
  j["segments"] = Json::array();
  for (const auto& s : rep.segments) {
    j["segments"].push_back({{"start_s", s.start},
                             {"capacity_bps", s.capacity},
                             {"median_convergence_delay_s", opt(s.median_delay)},
                             {"converged_trials", s.converged_trials}});
  }
  j["oracle"] = oracle_json(rep.oracle, sim);
  return j;
}

inline void write_time_series_csv(const std::filesystem::path& path, const SimResult& result,
                                  const SimConfig& sim) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  std::fputs("time_s,conn_id,protocol,state,send_rate_bps,throughput_bps,utility,rtt_ms,loss_ratio\n", f);
  for (const auto& r : result.time_series) {
    const auto& c = sim.connections[r.conn];
    std::fprintf(f, "%.17g,%s,%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.time, c.id.c_str(),
                 to_string(c.protocol), r.state.c_str(), r.send_rate, r.throughput, r.utility,
                 r.rtt * 1e3, r.loss_ratio);
  }
  if (std::fclose(f) != 0) throw Error(ErrorKind::IoError, "cannot finish " + path.string());
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::IoError, "cannot finish " + path.string());
}

struct RunOptions {
  // Worker threads for independent trials; 0 picks the hardware concurrency.
  unsigned threads = 0;
  // Overrides the scenario's output directory when set.
  std::optional<std::string> output_directory;
};

struct RunOutcome {
  std::vector<TrialResult> trials;
  SummaryReport summary;
  std::vector<std::filesystem::path> files;
};

/// Runs every trial with seeds seed, seed+1, ... Trials run concurrently;
/// each trial is itself serial and deterministic.
inline std::vector<TrialResult> run_trials(const ScenarioConfig& cfg, unsigned threads = 0) {
  validate_scenario(cfg);
  const auto count = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialResult> out(count);
  std::vector<std::exception_ptr> errors(count);
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        SimConfig sim = cfg.sim;
        sim.seed = cfg.sim.seed + i;
        out[i] = {sim.seed, run(sim)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

inline std::string file_stem(const std::string& name) {
  std::string s = name.empty() ? "scenario" : name;
  for (char& ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) ch = '_';
  return s;
}

inline RunOutcome run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {}) {
  RunOutcome outcome;
  outcome.trials = run_trials(cfg, opts.threads);
  outcome.summary = summarize(outcome.trials, cfg);
  const std::string dir = opts.output_directory.value_or(cfg.output.directory);
  if (dir.empty()) return outcome;

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir + ": " + ec.message());
  const auto stem = file_stem(cfg.name);
  if (cfg.output.time_series_csv) {
    for (std::size_t i = 0; i < outcome.trials.size(); ++i) {
      auto path = std::filesystem::path(dir) / (stem + "_trial" + std::to_string(i) + ".csv");
      write_time_series_csv(path, outcome.trials[i].result, cfg.sim);
      outcome.files.push_back(path);
    }
  }
  auto summary_path = std::filesystem::path(dir) / (stem + "_summary.json");
  write_json(summary_path, summary_json(outcome.summary, cfg.sim));
  outcome.files.push_back(summary_path);
  auto oracle_path = std::filesystem::path(dir) / (stem + "_oracle.json");
  write_json(oracle_path, oracle_json(outcome.summary.oracle, cfg.sim));
  outcome.files.push_back(oracle_path);
  return outcome;
}

/// Copy of `cfg` with one swept parameter replaced. Capacity replaces the
/// whole schedule with a single segment; buffer is a BDP multiple.
inline ScenarioConfig apply_sweep_value(ScenarioConfig cfg, SweepParam param, double value) {
  auto& sim = cfg.sim;
  switch (param) {
    case SweepParam::Capacity: sim.link.capacity_schedule = {{0.0, value}}; break;
    case SweepParam::Loss: sim.link.random_loss = value; break;
    case SweepParam::Buffer: sim.link.buffer = {BufferSpec::Unit::Bdp, value}; break;
    case SweepParam::D: sim.coefficients.d_scale = value; break;
  }
  std::ostringstream suffix;
  suffix << to_string(param) << '_' << value;
  cfg.name += "_" + suffix.str();
  cfg.sweep.reset();
  return cfg;
}

struct SweepPoint {
  double value = 0.0;
  SummaryReport summary;
};

struct SweepReport {
  SweepParam param = SweepParam::Capacity;
  std::vector<SweepPoint> points;
};

inline Json sweep_json(const SweepReport& rep, const ScenarioConfig& base) {
  Json j;
  j["name"] = base.name;
  j["param"] = to_string(rep.param);
  j["points"] = Json::array();
  for (const auto& p : rep.points) {
    const auto point_cfg = apply_sweep_value(base, rep.param, p.value);
    j["points"].push_back({{"value", p.value}, {"summary", summary_json(p.summary, point_cfg.sim)}});
  }
  return j;
}

inline SweepReport run_sweep(const ScenarioConfig& base, SweepParam param,
                             const std::vector<double>& values, const RunOptions& opts = {}) {
  if (values.empty()) throw ValidationError({"sweep needs at least one value"});
  std::vector<std::string> violations;
  for (double v : values) {
    for (auto& s : scenario_violations(apply_sweep_value(base, param, v)))
      violations.push_back(std::string(to_string(param)) + "=" + std::to_string(v) + ": " + s);
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  SweepReport rep;
  rep.param = param;
  for (double v : values) {
    const auto cfg = apply_sweep_value(base, param, v);
    auto outcome = run_scenario(cfg, opts);
    rep.points.push_back({v, std::move(outcome.summary)});
  }
  const std::string dir = opts.output_directory.value_or(base.output.directory);
  if (!dir.empty()) {
    write_json(std::filesystem::path(dir) /
                   (file_stem(base.name) + "_sweep_" + to_string(param) + ".json"),
               sweep_json(rep, base));
  }
  return rep;
}

}  // namespace hercules
