#pragma once

// Reference allocations for a single shared link: lexicographic max-min over
// normalized rates (HRF), classic max-min over raw rates, and an exhaustive
// grid search used to cross-check both.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hercules/core.hpp"
#include "hercules/utility.hpp"

namespace hercules {

struct AllocationProblem {
  std::vector<Requirement> requirements;
  double capacity = 0.0;
  // Cap each bounded connection at its maximum requirement.
  bool respect_bounds = true;
};

struct Allocation {
  RateVector rates;
  std::vector<double> normalized;
  double theta = 0.0;
};

enum class LexOrder { Less, Equal, Greater };

enum class ObjectiveSpace { Raw, Normalized };

inline const char* to_string(ObjectiveSpace s) {
  return s == ObjectiveSpace::Raw ? "raw" : "normalized";
}

inline void validate_problem(const AllocationProblem& p) {
  if (!(p.capacity > 0.0)) throw Error(ErrorKind::InvalidConfig, "capacity must be > 0");
  if (p.requirements.empty()) throw Error(ErrorKind::InvalidConfig, "requirements must not be empty");
  for (const auto& r : p.requirements) validate_requirement(r);
}

/// Lexicographic comparison of two equally long vectors, usually sorted
/// ascending. Entries closer than `tolerance` compare equal.
inline LexOrder lex_compare(const std::vector<double>& u, const std::vector<double>& v,
                            double tolerance = 0.0) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::LengthMismatch, "cannot compare vectors of length " +
                                               std::to_string(u.size()) + " and " +
                                               std::to_string(v.size()));
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < v[i] - tolerance) return LexOrder::Less;
    if (u[i] > v[i] + tolerance) return LexOrder::Greater;
  }
  return LexOrder::Equal;
}

inline double satisfaction_ratio(double avg_rate, const Requirement& req) {
  return avg_rate / req.min_rate;
}

namespace detail {

inline double cap_of(const Requirement& r, bool respect_bounds) {
  return respect_bounds && r.bounded ? r.max_rate : std::numeric_limits<double>::infinity();
}

inline std::vector<double> normalize_all(const RateVector& rates,
                                         const std::vector<Requirement>& reqs) {
  std::vector<double> out(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) out[i] = normalized_rate(rates[i], reqs[i]).value;
  return out;
}

/// Solves sum_i clamp(offset_i + level * slope_i, 0, cap_i) = capacity for
/// the level. Each term is monotone and piecewise linear, so the solution is
/// found by walking the breakpoints in order. Returns the level and writes the
/// rates; when every connection is capped the level is that of the last cap.
inline double fill_level(const std::vector<double>& offset, const std::vector<double>& slope,
                         const std::vector<double>& cap, double capacity, RateVector& rates) {
  const std::size_t n = offset.size();
  auto rate_at = [&](std::size_t i, double level) {
    return std::clamp(offset[i] + level * slope[i], 0.0, cap[i]);
  };
  auto total_at = [&](double level) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += rate_at(i, level);
    return s;
  };

  std::vector<double> breaks;
  for (std::size_t i = 0; i < n; ++i) {
    breaks.push_back(-offset[i] / slope[i]);
    if (std::isfinite(cap[i])) breaks.push_back((cap[i] - offset[i]) / slope[i]);
  }
  std::sort(breaks.begin(), breaks.end());

  const bool all_capped =
      std::all_of(cap.begin(), cap.end(), [](double c) { return std::isfinite(c); });
  double level = 0.0;
  if (all_capped && total_at(breaks.back()) <= capacity) {
    level = breaks.back();
  } else {
    // Find the first breakpoint at which the total reaches capacity, then
    // interpolate linearly inside the preceding segment.
    double lo = breaks.front();
    double hi = std::numeric_limits<double>::quiet_NaN();
    for (double b : breaks) {
      if (total_at(b) >= capacity) {
        hi = b;
        break;
      }
      lo = b;
    }
    if (std::isnan(hi)) {
      // Beyond the last breakpoint only uncapped connections keep growing.
      double base = total_at(lo), growth = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(cap[i])) growth += slope[i];
      level = lo + (capacity - base) / growth;
    } else if (hi == lo) {
      level = lo;
    } else {
      const double t_lo = total_at(lo), t_hi = total_at(hi);
      level = lo + (capacity - t_lo) * (hi - lo) / (t_hi - t_lo);
    }
  }
  rates.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) rates[i] = rate_at(i, level);
  return level;
}

}  // namespace detail

/// Heterogeneous-requirements fair allocation: every connection sits at the
/// same normalized rate theta unless it is pinned at zero or at its cap.
inline Allocation hrf_allocate(const AllocationProblem& p) {
  validate_problem(p);
  std::vector<double> offset, slope, cap;
  for (const auto& r : p.requirements) {
    offset.push_back(r.min_rate);
    slope.push_back(r.max_rate - r.min_rate);
    cap.push_back(detail::cap_of(r, p.respect_bounds));
  }
  Allocation a;
  a.theta = detail::fill_level(offset, slope, cap, p.capacity, a.rates);
  a.normalized = detail::normalize_all(a.rates, p.requirements);
  return a;
}

/// Classic max-min fairness over raw rates; theta is the common water level.
inline Allocation mmf_allocate(const AllocationProblem& p) {
  validate_problem(p);
  const std::size_t n = p.requirements.size();
  std::vector<double> offset(n, 0.0), slope(n, 1.0), cap;
  for (const auto& r : p.requirements) cap.push_back(detail::cap_of(r, p.respect_bounds));
  Allocation a;
  a.theta = detail::fill_level(offset, slope, cap, p.capacity, a.rates);
  a.normalized = detail::normalize_all(a.rates, p.requirements);
  return a;
}

/// Exhaustive search over rate vectors on a `grid_step` lattice with total at
/// most the capacity. Throws GridTooLarge when the lattice holds more than
/// `budget` points.
inline Allocation brute_force_lex_max_min(const AllocationProblem& p, double grid_step,
                                          ObjectiveSpace space,
                                          std::uint64_t budget = 20'000'000) {
  validate_problem(p);
  if (!(grid_step > 0.0)) throw Error(ErrorKind::InvalidConfig, "grid_step must be > 0");
  const std::size_t n = p.requirements.size();
  std::vector<std::int64_t> top(n);
  double points = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double upper = std::min(p.capacity, detail::cap_of(p.requirements[i], p.respect_bounds));
    top[i] = static_cast<std::int64_t>(std::floor(upper / grid_step + 1e-9));
    points *= static_cast<double>(top[i] + 1);
  }
  if (points > static_cast<double>(budget)) {
    throw Error(ErrorKind::GridTooLarge, "grid holds " + std::to_string(points) +
                                             " points, budget is " + std::to_string(budget));
  }

  auto objective = [&](const RateVector& x) {
    std::vector<double> v =
        space == ObjectiveSpace::Raw ? x : detail::normalize_all(x, p.requirements);
    std::sort(v.begin(), v.end());
    return v;
  };

  const double tol = 1e-9;
  std::vector<std::int64_t> idx(n, 0);
  RateVector x(n, 0.0), best_x;
  std::vector<double> best_obj;
  while (true) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(idx[i]) * grid_step;
      sum += x[i];
    }
    if (sum <= p.capacity * (1.0 + 1e-12) + 1e-9) {
      auto obj = objective(x);
      if (best_x.empty() || lex_compare(obj, best_obj, tol) == LexOrder::Greater) {
        best_obj = std::move(obj);
        best_x = x;
      }
    }
    std::size_t k = 0;
    while (k < n && idx[k] == top[k]) idx[k++] = 0;
    if (k == n) break;
    ++idx[k];
  }

  Allocation a;
  a.rates = best_x;
  a.normalized = detail::normalize_all(a.rates, p.requirements);
  a.theta = best_obj.front();
  return a;
}

}  // namespace hercules
