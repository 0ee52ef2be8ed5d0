#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fairness_instances.hpp"
#include "hercules/fairness.hpp"

using namespace hercules;

namespace {

AllocationProblem three_connection(double capacity, bool bounded = false) {
  return {{{20 * kMbps, 30 * kMbps, bounded},
           {40 * kMbps, 60 * kMbps, bounded},
           {60 * kMbps, 90 * kMbps, bounded}},
          capacity,
          true};
}

void expect_rates(const RateVector& got, std::initializer_list<double> mbps, double tol = 1 * kKbps) {
  ASSERT_EQ(got.size(), mbps.size());
  std::size_t i = 0;
  for (double m : mbps) EXPECT_NEAR(got[i++], m * kMbps, tol) << "index " << i - 1;
}

double total(const RateVector& r) { return std::accumulate(r.begin(), r.end(), 0.0); }

}  // namespace

TEST(Hrf, ExampleAtExactMinimums) {
  const auto a = hrf_allocate(three_connection(120 * kMbps));
  expect_rates(a.rates, {20, 40, 60});
  for (double x : a.normalized) EXPECT_NEAR(x, 0.0, 1e-12);
  EXPECT_NEAR(a.theta, 0.0, 1e-12);
}

TEST(Hrf, ExampleAboveMinimums) {
  const auto a = hrf_allocate(three_connection(170 * kMbps));
  EXPECT_NEAR(a.theta, 5.0 / 6.0, 1e-12);
  expect_rates(a.rates, {20 + 10 * 5.0 / 6.0, 40 + 20 * 5.0 / 6.0, 85});
}

TEST(Hrf, ExampleBelowMinimums) {
  const auto a = hrf_allocate(three_connection(60 * kMbps));
  EXPECT_NEAR(a.theta, -1.0, 1e-12);
  expect_rates(a.rates, {10, 20, 30});
}

TEST(Hrf, BoundedSingleConnectionCapped) {
  const auto a = hrf_allocate({{{40 * kMbps, 60 * kMbps, true}}, 1000 * kMbps, true});
  expect_rates(a.rates, {60});
}

TEST(Hrf, UnboundedMayExceedMaximum) {
  const auto a = hrf_allocate(three_connection(300 * kMbps));
  EXPECT_GT(a.theta, 1.0);
  EXPECT_NEAR(total(a.rates), 300 * kMbps, 1e-3);
}

TEST(Hrf, ShortfallFloorsAtZero) {
  // The second connection would go negative at the common level.
  const AllocationProblem p{{{1 * kMbps, 101 * kMbps, false}, {50 * kMbps, 51 * kMbps, false}},
                            10 * kMbps,
                            true};
  const auto a = hrf_allocate(p);
  for (double r : a.rates) EXPECT_GE(r, 0.0);
  EXPECT_NEAR(total(a.rates), 10 * kMbps, 1e-3);
  const auto bf = brute_force_lex_max_min(p, 0.5 * kMbps, ObjectiveSpace::Normalized);
  EXPECT_TRUE(fixtures::within(a.rates, bf.rates, 0.5 * kMbps));
}

TEST(Mmf, Examples) {
  expect_rates(mmf_allocate(three_connection(120 * kMbps, true)).rates, {30, 45, 45});
  expect_rates(mmf_allocate({{{1, 2, false}, {1, 2, false}, {1, 2, false}}, 90 * kMbps, true}).rates,
               {30, 30, 30});
  expect_rates(mmf_allocate({{{1 * kMbps, 10 * kMbps, true}, {1 * kMbps, 10 * kMbps, false}},
                             100 * kMbps,
                             true})
                   .rates,
               {10, 90});
}

TEST(BruteForce, Examples) {
  const auto hrf = brute_force_lex_max_min(three_connection(120 * kMbps), 1 * kMbps,
                                           ObjectiveSpace::Normalized);
  expect_rates(hrf.rates, {20, 40, 60});
  const auto single = brute_force_lex_max_min({{{10, 20, false}}, 15, true}, 1, ObjectiveSpace::Raw);
  ASSERT_EQ(single.rates.size(), 1u);
  EXPECT_DOUBLE_EQ(single.rates[0], 15);
  const auto mmf = brute_force_lex_max_min(three_connection(120 * kMbps, true), 1 * kMbps,
                                           ObjectiveSpace::Raw);
  expect_rates(mmf.rates, {30, 45, 45});
}

TEST(BruteForce, MatchesClosedFormWithinOneStep) {
  const auto p = three_connection(170 * kMbps);
  const auto bf = brute_force_lex_max_min(p, 1 * kMbps, ObjectiveSpace::Normalized);
  EXPECT_TRUE(fixtures::within(bf.rates, hrf_allocate(p).rates, 1 * kMbps));
}

TEST(BruteForce, GridBudgetEnforced) {
  try {
    brute_force_lex_max_min(three_connection(120 * kMbps), 1 * kKbps, ObjectiveSpace::Raw);
    FAIL() << "expected GridTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridTooLarge);
  }
}

TEST(LexCompare, Examples) {
  EXPECT_EQ(lex_compare({0, 0, 1}, {0, 0.5, 0.5}), LexOrder::Less);
  EXPECT_EQ(lex_compare({1, 2}, {1, 2}), LexOrder::Equal);
  EXPECT_EQ(lex_compare({-1, 0}, {-2, 5}), LexOrder::Greater);
  EXPECT_EQ(lex_compare({1.0}, {1.0 + 1e-12}, 1e-9), LexOrder::Equal);
}

TEST(LexCompare, LengthMismatch) {
  try {
    lex_compare({1, 2}, {1});
    FAIL() << "expected LengthMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

TEST(Satisfaction, Examples) {
  const Requirement r{100 * kMbps, 150 * kMbps, false};
  EXPECT_NEAR(satisfaction_ratio(27 * kMbps, r), 0.27, 1e-12);
  EXPECT_NEAR(satisfaction_ratio(97 * kMbps, r), 0.97, 1e-12);
  EXPECT_DOUBLE_EQ(satisfaction_ratio(r.min_rate, r), 1.0);
}

TEST(Problem, Validation) {
  EXPECT_THROW(hrf_allocate({{}, 10, true}), Error);
  EXPECT_THROW(hrf_allocate({{{1, 2, false}}, 0, true}), Error);
  EXPECT_THROW(mmf_allocate({{{2, 2, false}}, 10, true}), Error);
}

TEST(Oracle, HrfMeetsMinimumsWhereMmfDoesNot) {
  const auto p = three_connection(120 * kMbps, true);
  const auto hrf = hrf_allocate(p);
  const auto mmf = mmf_allocate(p);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_GE(hrf.rates[i], p.requirements[i].min_rate - 1.0);
  EXPECT_LT(mmf.rates[2], p.requirements[2].min_rate);
}

TEST(OracleProperty, HrfMatchesBruteForceOnRandomGridInstances) {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 200; ++k) {
    const auto g = fixtures::random_hrf_instance(rng, 1 * kMbps);
    const auto closed = hrf_allocate(g.problem);
    const auto bf = brute_force_lex_max_min(g.problem, g.grid_step, ObjectiveSpace::Normalized);
    EXPECT_TRUE(fixtures::within(closed.rates, g.expected, 1e-6)) << "instance " << k;
    EXPECT_TRUE(fixtures::within(closed.rates, bf.rates, g.grid_step)) << "instance " << k;
  }
}

TEST(OracleProperty, MmfMatchesBruteForceOnRandomGridInstances) {
  std::mt19937_64 rng(4048);
  for (int k = 0; k < 200; ++k) {
    const auto g = fixtures::random_mmf_instance(rng, 1 * kMbps);
    const auto closed = mmf_allocate(g.problem);
    const auto bf = brute_force_lex_max_min(g.problem, g.grid_step, ObjectiveSpace::Raw);
    EXPECT_TRUE(fixtures::within(closed.rates, g.expected, 1e-6)) << "instance " << k;
    EXPECT_TRUE(fixtures::within(closed.rates, bf.rates, g.grid_step)) << "instance " << k;
  }
}

TEST(OracleProperty, ParetoEfficientWhenAnyConnectionUncapped) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    AllocationProblem p;
    const int n = 1 + static_cast<int>(u(rng) * 4);
    for (int i = 0; i < n; ++i) {
      const double a = std::pow(10.0, 4.0 + 4.0 * u(rng));
      p.requirements.push_back({a, a * (1.1 + 3.0 * u(rng)), u(rng) < 0.5});
    }
    p.requirements.back().bounded = false;
    p.capacity = std::pow(10.0, 4.0 + 5.0 * u(rng));
    for (const auto& a : {hrf_allocate(p), mmf_allocate(p)})
      EXPECT_NEAR(total(a.rates), p.capacity, 1e-6 * p.capacity);
  }
}

TEST(OracleProperty, ScaleInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    AllocationProblem p;
    const int n = 1 + static_cast<int>(u(rng) * 4);
    for (int i = 0; i < n; ++i) {
      const double a = 1e6 * (1.0 + 50.0 * u(rng));
      p.requirements.push_back({a, a * (1.2 + u(rng)), u(rng) < 0.3});
    }
    p.capacity = 1e6 * (10.0 + 200.0 * u(rng));
    const double s = 0.001 + 1000.0 * u(rng);
    AllocationProblem q = p;
    for (auto& r : q.requirements) {
      r.min_rate *= s;
      r.max_rate *= s;
    }
    q.capacity *= s;
    const auto x = hrf_allocate(p), y = hrf_allocate(q);
    for (std::size_t i = 0; i < x.rates.size(); ++i)
      EXPECT_NEAR(y.rates[i], s * x.rates[i], 1e-9 * s * p.capacity);
  }
}

TEST(OracleProperty, PermutationEquivariance) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    AllocationProblem p;
    const int n = 2 + static_cast<int>(u(rng) * 3);
    for (int i = 0; i < n; ++i) {
      const double a = 1e6 * (1.0 + 50.0 * u(rng));
      p.requirements.push_back({a, a * (1.2 + u(rng)), u(rng) < 0.3});
    }
    p.capacity = 1e6 * (10.0 + 200.0 * u(rng));
    std::vector<std::size_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    AllocationProblem q = p;
    for (std::size_t i = 0; i < perm.size(); ++i) q.requirements[i] = p.requirements[perm[i]];
    const auto x = hrf_allocate(p), y = hrf_allocate(q);
    const auto xm = mmf_allocate(p), ym = mmf_allocate(q);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      EXPECT_NEAR(y.rates[i], x.rates[perm[i]], 1e-6);
      EXPECT_NEAR(ym.rates[i], xm.rates[perm[i]], 1e-6);
    }
  }
}
