#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "qms/classical.hpp"
#include "qms/error.hpp"
#include "qms/nqueens.hpp"
#include "qms_test/support.hpp"

namespace {

namespace cl = qms::classical;

qms::Schedule constant(double beta, int steps) {
  qms::Schedule s;
  s.beta_start = s.beta_end = beta;
  s.steps = steps;
  return s;
}

cl::TransitionMatrix dense(std::size_t n, const std::vector<double>& rows) {
  std::vector<std::size_t> ptr{0}, cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i * n + j] == 0.0) continue;
      cols.push_back(j);
      vals.push_back(rows[i * n + j]);
    }
    ptr.push_back(cols.size());
  }
  return cl::TransitionMatrix(n, ptr, cols, vals);
}

/// Every chain with at most 2^12 states used by the property tests.
std::vector<qms::ProblemSpec> small_chains() {
  std::vector<qms::ProblemSpec> out;
  for (int n = 2; n <= 6; ++n) {
    out.push_back(qms::nqueens::generate_instance(n).spec);
    for (int col = 0; col < n; ++col)
      out.push_back(qms::nqueens::generate_instance(n, qms::nqueens::QueenPin{col, (col * 7) % n}).spec);
  }
  std::mt19937_64 rng(17);
  for (int k = 0; k < 15; ++k) out.push_back(qms_test::random_problem(rng, 2 + rng() % 300));
  out.push_back(qms_test::two_state(0, 1));
  out.push_back(qms_test::lazy_two_state(0, 1));
  return out;
}

TEST(TransitionMatrix, TwoStateChain) {
  const auto P = cl::transition_matrix(qms_test::two_state(0.0, 1.0), 1.0);
  EXPECT_NEAR(P.at(0, 1), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(P.at(0, 0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_EQ(P.at(1, 0), 1.0);
  EXPECT_EQ(P.at(1, 1), 0.0);
}

TEST(TransitionMatrix, InfiniteTemperatureIsSymmetric) {
  const auto P = cl::transition_matrix(qms_test::lazy_two_state(0.0, 5.0), 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(P.at(i, j), 0.5);

  const auto spec = qms::nqueens::generate_instance(4).spec;
  const auto Q = cl::transition_matrix(spec, 0.0);
  const double off = 1.0 / static_cast<double>(spec.move_count());
  for (std::size_t i = 0; i < spec.size(); ++i)
    for (std::size_t m = 0; m < spec.move_count(); ++m) EXPECT_EQ(Q.at(i, spec.successor(i, m)), off);
}

TEST(TransitionMatrix, RowsAreStochasticAndRespectMoves) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> beta(0.0, 5.0);
  for (const auto& spec : small_chains()) {
    const auto P = cl::transition_matrix(spec, beta(rng));
    EXPECT_LT(P.max_row_defect(), 1e-12);
    for (std::size_t i = 0; i < spec.size(); ++i) {
      for (std::size_t j : P.row_columns(i)) {
        if (j == i) continue;
        bool adjacent = false;
        for (std::size_t m = 0; m < spec.move_count(); ++m)
          adjacent = adjacent || (spec.move_valid(i, m) && spec.successor(i, m) == j);
        EXPECT_TRUE(adjacent);
      }
      for (double v : P.row_values(i)) EXPECT_GE(v, 0.0);
    }
  }
}

TEST(TransitionMatrix, DetailedBalance) {
  for (const auto& spec : small_chains()) {
    ASSERT_LE(spec.size(), 4096u);
    for (double beta : {0.0, 0.3, 1.0, 2.5}) {
      const auto P = cl::transition_matrix(spec, beta);
      std::vector<double> pi(spec.size());
      double z = 0.0;
      for (std::size_t i = 0; i < spec.size(); ++i) z += pi[i] = std::exp(-beta * (spec.cost(i) - spec.min_cost()));
      for (auto& x : pi) x /= z;
      double worst = 0.0;
      for (std::size_t i = 0; i < spec.size(); ++i)
        for (std::size_t j : P.row_columns(i))
          worst = std::max(worst, std::abs(pi[i] * P.at(i, j) - pi[j] * P.at(j, i)));
      EXPECT_LT(worst, 1e-9);
    }
  }
}

TEST(TransitionMatrix, CapacityLimit) {
  EXPECT_EQ(cl::kMaxExactStates, std::size_t{1} << 16);
}

TEST(Evolve, Examples) {
  const auto P = cl::transition_matrix(qms_test::two_state(0.0, 1.0), 1.0);
  const std::vector<double> start{0.0, 1.0};
  EXPECT_EQ(cl::evolve(P, start, 0), start);
  const auto one = cl::evolve(P, start, 1);
  EXPECT_EQ(one[0], 1.0);
  EXPECT_EQ(one[1], 0.0);
  const auto two = cl::evolve(P, start, 2);
  EXPECT_NEAR(two[0], 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_THROW(cl::evolve(P, std::vector<double>{1.0}, 1), qms::Error);
}

TEST(Evolve, GreedyChainAccumulatesGroundMass) {
  const auto spec = qms::nqueens::generate_instance(5).spec;
  const auto P = cl::transition_matrix(spec, 200.0);
  std::vector<double> p(spec.size(), 1.0 / static_cast<double>(spec.size()));
  double prev = 0.0;
  for (int t = 0; t < 60; ++t) {
    double g = 0.0;
    for (std::size_t i : spec.ground_states()) g += p[i];
    EXPECT_GE(g, prev - 1e-15);
    prev = g;
    p = P.apply(p);
  }
}

TEST(TvDistance, Examples) {
  const std::vector<double> a{0.2, 0.3, 0.5};
  EXPECT_EQ(cl::tv_distance(a, a), 0.0);
  EXPECT_EQ(cl::tv_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
  EXPECT_EQ(cl::tv_distance(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}), 0.5);
  try {
    cl::tv_distance(a, std::vector<double>{1.0});
    ADD_FAILURE();
  } catch (const qms::Error& e) {
    EXPECT_EQ(e.code(), qms::ErrorCode::DimensionError);
  }
}

TEST(TvDistance, IsAMetric) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + rng() % 20;
    const auto p = qms_test::random_distribution(rng, n);
    const auto q = qms_test::random_distribution(rng, n);
    const auto r = qms_test::random_distribution(rng, n);
    EXPECT_EQ(cl::tv_distance(p, q), cl::tv_distance(q, p));
    EXPECT_LE(cl::tv_distance(p, r), cl::tv_distance(p, q) + cl::tv_distance(q, r) + 1e-15);
    EXPECT_GE(cl::tv_distance(p, q), 0.0);
    EXPECT_LE(cl::tv_distance(p, q), 1.0 + 1e-15);
  }
}

TEST(Stationary, IsFixedPoint) {
  for (const auto& spec : small_chains()) {
    if (spec.size() < 2) continue;
    const auto P = cl::transition_matrix(spec, 0.7);
    const auto pi = cl::stationary_distribution(P);
    EXPECT_NEAR(std::accumulate(pi.begin(), pi.end(), 0.0), 1.0, 1e-12);
    const auto later = cl::evolve(P, pi, 10);
    EXPECT_LT(cl::tv_distance(pi, later), 1e-9);
  }
}

TEST(MixingTime, SymmetricTwoStateChain) {
  const auto P = dense(2, {0.5, 0.5, 0.5, 0.5});
  EXPECT_EQ(cl::mixing_time(P, 0.1), 1);
  EXPECT_EQ(cl::mixing_time(P, 1.0), 0);
  EXPECT_EQ(cl::mixing_time(P, 3.0), 0);
  EXPECT_EQ(cl::mixing_time(cl::transition_matrix(qms_test::lazy_two_state(0, 0), 0.0), 0.1), 1);
}

TEST(MixingTime, DisconnectedChainIsNotErgodic) {
  const auto P = dense(3, {1, 0, 0, 0, 0.5, 0.5, 0, 0.5, 0.5});
  try {
    cl::mixing_time(P, 0.1);
    ADD_FAILURE();
  } catch (const qms::Error& e) {
    EXPECT_EQ(e.code(), qms::ErrorCode::NotErgodic);
  }
}

TEST(MixingTime, SlowChainTakesLonger) {
  const auto P = dense(2, {0.9, 0.1, 0.1, 0.9});
  // d(t) = 0.5 * 0.8^t < 0.1 first at t = 8.
  EXPECT_EQ(cl::mixing_time(P, 0.1), 8);
}

TEST(MhRun, SingleStateStaysPut) {
  qms::MoveModel m;
  m.coordinate_range = 1;
  const qms::ProblemSpec spec({0}, {3.0}, 1, m, qms::StateCoding::index);
  const auto traj = cl::mh_run(spec, constant(1.0, 20), qms::InitialState::uniform(), 4);
  ASSERT_EQ(traj.size(), 21u);
  for (auto l : traj) EXPECT_EQ(l, 0u);
}

TEST(MhRun, DeterministicPerSeed) {
  const auto spec = qms::nqueens::generate_instance(5).spec;
  const auto a = cl::mh_run(spec, constant(1.0, 200), qms::InitialState::uniform(), 99);
  const auto b = cl::mh_run(spec, constant(1.0, 200), qms::InitialState::uniform(), 99);
  const auto c = cl::mh_run(spec, constant(1.0, 200), qms::InitialState::uniform(), 100);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (std::size_t t = 1; t < a.size(); ++t) {
    if (a[t] == a[t - 1]) continue;
    const auto i = spec.index_of_label(a[t - 1]);
    bool adjacent = false;
    for (std::size_t m = 0; m < spec.move_count(); ++m)
      adjacent = adjacent || spec.label(spec.successor(i, m)) == a[t];
    EXPECT_TRUE(adjacent);
  }
}

TEST(MhRun, ColdChainFallsAndStays) {
  const auto spec = qms_test::two_state(0.0, 10.0);
  const qms::DeltaSchedule d(spec, constant(1e3, 20));
  int stayed = 0;
  const int seeds = 10'000;
  for (int s = 0; s < seeds; ++s) {
    const auto traj = cl::mh_run(spec, d, qms::InitialState::fixed(1), static_cast<std::uint64_t>(s));
    EXPECT_EQ(traj[1], 0u);
    bool ok = true;
    for (std::size_t t = 1; t < traj.size(); ++t) ok = ok && traj[t] == 0;
    stayed += ok;
  }
  EXPECT_GE(stayed, 0.99 * seeds);
}

TEST(MhRun, InfiniteTemperatureVisitsUniformly) {
  const auto spec = qms_test::lazy_two_state(0.0, 4.0);
  const int steps = 100'000;
  const auto traj = cl::mh_run(spec, constant(0.0, steps), qms::InitialState::fixed(0), 1);
  double ones = 0;
  for (std::size_t t = 1; t < traj.size(); ++t) ones += traj[t] == 1;
  const double sigma = std::sqrt(0.25 / steps);
  EXPECT_LT(std::abs(ones / steps - 0.5), 3 * sigma);
}

TEST(MhRun, MarginalsMatchExactEvolution) {
  const auto spec = qms_test::lazy_two_state(0.0, 1.0);
  const int t = 5;
  const qms::DeltaSchedule d(spec, constant(1.0, t));
  const auto exact = cl::evolve(cl::transition_matrix(spec, d.at_step(1)), std::vector<double>{0.0, 1.0}, t);
  const int samples = 100'000;
  double zeros = 0;
  for (int s = 0; s < samples; ++s)
    zeros += cl::mh_run(spec, d, qms::InitialState::fixed(1), static_cast<std::uint64_t>(s))[t] == 0;
  const double sigma = std::sqrt(exact[0] * exact[1] / samples);
  EXPECT_LT(std::abs(zeros / samples - exact[0]), 3 * sigma);
}

TEST(SuccessCurve, Baselines) {
  const auto spec = qms::nqueens::generate_instance(4).spec;
  const qms::DeltaSchedule d(spec, constant(1.0, 10));
  const auto c = cl::success_curve(spec, d, qms::InitialState::uniform(), 10);
  EXPECT_DOUBLE_EQ(c.p[0], 2.0 / 24.0);
  EXPECT_EQ(c.method, cl::EstimateMethod::exact);
  EXPECT_TRUE(c.warning.empty());
  ASSERT_EQ(c.p.size(), 11u);

  qms::MoveModel m;
  m.coordinate_range = 1;
  const qms::ProblemSpec one({0}, {1.0}, 1, m, qms::StateCoding::index);
  for (int t = 0; t <= 5; ++t)
    EXPECT_EQ(cl::classical_success_prob(one, constant(1.0, 5), qms::InitialState::uniform(), t), 1.0);
}

TEST(SuccessCurve, EverHitDominatesAtStep) {
  const auto spec = qms::nqueens::generate_instance(5).spec;
  const qms::DeltaSchedule d(spec, constant(0.5, 40));
  const auto at = cl::success_curve_exact(spec, d, qms::InitialState::uniform(), 40, cl::HitMode::at_step);
  const auto ever = cl::success_curve_exact(spec, d, qms::InitialState::uniform(), 40, cl::HitMode::ever_hit);
  EXPECT_EQ(at.p[0], ever.p[0]);
  for (std::size_t t = 1; t < at.p.size(); ++t) {
    EXPECT_GE(ever.p[t] + 1e-12, at.p[t]);
    EXPECT_GE(ever.p[t] + 1e-12, ever.p[t - 1]);
  }
}

TEST(SuccessCurve, SampledAgreesWithExact) {
  const auto spec = qms::nqueens::generate_instance(4).spec;
  const qms::DeltaSchedule d(spec, constant(1.0, 20));
  for (auto mode : {cl::HitMode::at_step, cl::HitMode::ever_hit}) {
    const auto exact = cl::success_curve_exact(spec, d, qms::InitialState::uniform(), 20, mode);
    const auto sampled = cl::success_curve_sampled(spec, d, qms::InitialState::uniform(), 20, 10'000, 5, mode);
    const double p = exact.p[20];
    const double sigma = std::sqrt(p * (1 - p) / 10'000);
    EXPECT_LT(std::abs(sampled.p[20] - p), 3 * sigma);
    EXPECT_EQ(sampled.method, cl::EstimateMethod::sampled);
  }
}

TEST(SuccessCurve, VaryingBetaUsesStepTables) {
  const auto spec = qms::nqueens::generate_instance(4).spec;
  qms::Schedule s;
  s.beta_start = 0.1;
  s.beta_end = 3.0;
  s.kind = qms::ScheduleKind::linear;
  s.steps = 6;
  const qms::DeltaSchedule d(spec, s);
  std::vector<double> p(spec.size(), 1.0 / 24.0);
  for (int t = 1; t <= 6; ++t) p = cl::transition_matrix(spec, s.beta(t)).apply(p);
  double g = 0.0;
  for (std::size_t i : spec.ground_states()) g += p[i];
  EXPECT_NEAR(cl::success_curve_exact(spec, d, qms::InitialState::uniform(), 6).p[6], g, 1e-15);
}

}  // namespace
