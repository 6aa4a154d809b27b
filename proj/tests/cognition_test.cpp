#include <gtest/gtest.h>

#include <random>

#include "gne/cognition.hpp"
#include "gne/equilibrium.hpp"
#include "test_support.hpp"

namespace gne {
namespace {

using testing::brute_force_q;
using testing::greedy_prefix;
using testing::homogeneous_game;
using testing::random_game;
using testing::random_indefinite;
using testing::random_vector;

constexpr double kSlack = 1e-9;

ProxProblem random_game_problem(std::mt19937_64& rng, int n, double alpha) {
  const SecurityGame g = random_game(rng, n);
  const Vector u = solve_brne(g, CognitionProfile::uniform(static_cast<std::size_t>(n), 0.5), {}).u;
  return build_lambda(g, 0, u).with_alpha(alpha);
}

void expect_monitored_descent(const ProxProblem& p, const ApgResult& r) {
  ASSERT_EQ(r.trace.path, ApgPath::Nonconvex);
  const double coeff = 1.0 / (2.0 * p.step_x()) - p.lip() / 2.0;
  ASSERT_GT(coeff, 0.0);
  ASSERT_EQ(r.trace.q_values.size(), r.trace.steps.size() + 1);
  for (std::size_t k = 0; k < r.trace.steps.size(); ++k) {
    const ApgStep& s = r.trace.steps[k];
    EXPECT_LE(s.q_x, s.q_v + kSlack) << "iteration " << k;
    EXPECT_LE(s.q_v, s.q_x_prev + kSlack) << "iteration " << k;
    EXPECT_LE(s.q_v, s.q_x_prev - coeff * s.monitor_step_sq + kSlack) << "iteration " << k;
    EXPECT_LE(r.trace.q_values[k + 1], r.trace.q_values[k] + kSlack) << "iteration " << k;
  }
}

TEST(Apg, ZeroMatrixDropsAllAttention) {
  const ProxProblem p = ProxProblem::from_matrix(Matrix::Zero(4, 4), 0.5);
  ApgConfig cfg;
  cfg.initial_m = Vector{{0.2, 1.0, 0.7, 0.0}};
  for (const ApgResult& r : {apg_convex(p, cfg), apg_nonconvex(p, cfg)}) {
    EXPECT_TRUE(r.m.isZero());
    ASSERT_FALSE(r.trace.steps.empty());
    EXPECT_TRUE(r.trace.steps[0].took_z);
    EXPECT_EQ(r.trace.steps[0].q_z, 0.0);
  }
}

TEST(Apg, NoPenaltyGivesFullAttention) {
  const ProxProblem p = build_lambda(homogeneous_game(), 2, Vector::LinSpaced(10, 1.0, 2.0));
  const ApgResult r = solve_cognition(p, {});
  EXPECT_TRUE(r.trace.converged);
  EXPECT_LT((r.m - Vector::Ones(9)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Apg, LargePenaltyGivesNoAttention) {
  std::mt19937_64 rng(1);
  const ProxProblem base = random_game_problem(rng, 6, 0.0);
  const ProxProblem p = base.with_alpha(base.lambda_ones().maxCoeff() + 1.0);
  const ApgResult r = solve_cognition(p, {});
  EXPECT_TRUE(r.m.isZero());
}

TEST(Apg, PathSelection) {
  std::mt19937_64 rng(2);
  const ProxProblem convex = random_game_problem(rng, 5, 0.1);
  EXPECT_EQ(solve_cognition(convex, {}).trace.path, ApgPath::Convex);
  ApgConfig forced;
  forced.force_nonconvex_path = true;
  EXPECT_EQ(solve_cognition(convex, forced).trace.path, ApgPath::Nonconvex);
  EXPECT_EQ(solve_cognition(ProxProblem::from_matrix(random_indefinite(rng, 5), 0.1), {}).trace.path,
            ApgPath::Nonconvex);
}

TEST(Apg, RejectsBadSettings) {
  const ProxProblem p = ProxProblem::from_matrix(Matrix::Identity(2, 2), 0.1);
  ApgConfig cfg;
  cfg.initial_m = Vector{{0.5, 1.5}};
  EXPECT_THROW(solve_cognition(p, cfg), InvalidArgument);
  cfg.initial_m = Vector::Zero(3);
  EXPECT_THROW(solve_cognition(p, cfg), InvalidArgument);
  cfg.initial_m.reset();
  cfg.tol = 0.0;
  EXPECT_THROW(solve_cognition(p, cfg), InvalidArgument);
}

TEST(Apg, MonitoredDescentOnIndefiniteProblems) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 9;
    const ProxProblem p = ProxProblem::from_matrix(random_indefinite(rng, n), 0.3 * (t % 4));
    ApgConfig cfg;
    cfg.initial_m = random_vector(rng, n, 0.0, 1.0);
    const ApgResult r = apg_nonconvex(p, cfg);
    expect_monitored_descent(p, r);
    EXPECT_TRUE(r.trace.converged);
    EXPECT_LT(fixed_point_residual(p, r.m), 1e-8);
  }
}

TEST(Apg, MonitoredDescentOnGameProblems) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const ProxProblem p = random_game_problem(rng, 3 + t % 8, 0.0);
    const ProxProblem q = p.with_alpha(0.5 * p.lambda_ones().maxCoeff());
    ApgConfig cfg;
    cfg.force_nonconvex_path = true;
    const ApgResult r = solve_cognition(q, cfg);
    expect_monitored_descent(q, r);
    EXPECT_LT(fixed_point_residual(q, r.m), 1e-8);
  }
}

TEST(Apg, ConvexPathNeverIncreasesQ) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const ProxProblem p = random_game_problem(rng, 3 + t % 8, 0.0);
    const ApgResult r = apg_convex(p.with_alpha(0.4 * p.lambda_ones().maxCoeff()), {});
    for (std::size_t k = 1; k < r.trace.q_values.size(); ++k) {
      EXPECT_LE(r.trace.q_values[k], r.trace.q_values[k - 1]);
    }
  }
}

TEST(Apg, IndefiniteFixtureFromThreeStarts) {
  const auto f = testing::load_indefinite_fixture();
  const ProxProblem p = ProxProblem::from_matrix(f.lambda, f.alpha);
  ASSERT_FALSE(p.is_convex());
  const auto n = f.lambda.rows();
  ApgConfig cfg;
  cfg.tol = 1e-12;
  std::vector<double> values;
  for (const Vector& init : {Vector(Vector::Zero(n)), Vector(Vector::Constant(n, 0.5)), Vector(Vector::Ones(n))}) {
    cfg.initial_m = init;
    const ApgResult r = solve_cognition(p, cfg);
    EXPECT_TRUE(r.trace.converged);
    expect_monitored_descent(p, r);
    EXPECT_LT((r.m - f.reference_m).cwiseAbs().maxCoeff(), 1e-8);
    values.push_back(eval_Q(p, r.m).value);
  }
  for (double v : values) EXPECT_NEAR(v, f.reference_q, 1e-8);
}

TEST(Apg, InitializationRobustnessOnGameProblems) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + t % 8;
    const ProxProblem base = random_game_problem(rng, n, 0.0);
    const ProxProblem p = base.with_alpha(0.3 * base.lambda_ones().maxCoeff());
    const double beta = 0.5 * (n - 1);
    ApgConfig cfg;
    std::vector<double> values;
    for (const Vector& init : {Vector(Vector::Zero(n - 1)), Vector(Vector::Constant(n - 1, 0.5)),
                               Vector(Vector::Constant(n - 1, beta / (n - 1)))}) {
      cfg.initial_m = init;
      values.push_back(eval_Q(p, solve_cognition(p, cfg).m).value);
    }
    EXPECT_NEAR(values[0], values[1], 1e-8);
    EXPECT_NEAR(values[0], values[2], 1e-8);
  }
}

TEST(Apg, MatchesBruteForceOnSmallProblems) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 12; ++t) {
    const int dim = 1 + t % 4;
    const ProxProblem base = random_game_problem(rng, dim + 1, 0.0);
    const double alpha = random_vector(rng, 1, 0.1, 0.9)(0) * base.lambda_ones().maxCoeff();
    const ProxProblem p = base.with_alpha(alpha);
    const double q = eval_Q(p, solve_cognition(p, {}).m).value;
    EXPECT_NEAR(q, brute_force_q(p.lambda(), alpha), 1e-4) << "dimension " << dim;
  }
}

TEST(Apg, AttentionIncreaseBound) {
  // At the equilibrium investments of the two-group game, a coordinate whose
  // pull exceeds alpha must not lose attention in the accelerated update.
  const SecurityGame g = testing::two_group_game(8.0);
  Vector u(15);
  for (int i = 0; i < 15; ++i) u(i) = i < 5 ? 3.0952380952380953 : 2.380952380952381;
  for (std::size_t owner : {0u, 7u}) {
    const ProxProblem base = build_lambda(g, owner, u);
    const CalibrationResult c = calibrate_alpha(base, 8.0, {});
    const ProxProblem p = base.with_alpha(c.alpha);
    const Vector& v = *p.factor();
    const double total = v.sum();
    const double scale = g.self_influence(owner);
    ApgConfig cfg;
    cfg.record_iterates = true;
    cfg.initial_m = Vector::Zero(14);
    const ApgResult r = solve_cognition(p, cfg);
    int checked = 0;
    for (const ApgIterates& it : r.trace.iterates) {
      const double seen = v.dot(it.y);
      for (Eigen::Index j = 0; j < 14; ++j) {
        if (seen <= total - scale / v(j) * c.alpha) {
          EXPECT_GE(it.z(j), std::clamp(it.y(j), 0.0, 1.0) - 1e-12);
          ++checked;
        }
      }
    }
    EXPECT_GT(checked, 0);
  }
}

TEST(Calibration, HomogeneousBudgetOfThree) {
  const ProxProblem p = build_lambda(homogeneous_game(), 0, Vector::Constant(10, 25.0 / 17.0));
  const CalibrationResult c = calibrate_alpha(p, 3.0, {});
  EXPECT_NEAR(c.m.sum(), 3.0, 1e-4);
  EXPECT_LT((c.m - Vector::Constant(9, 1.0 / 3.0)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_FALSE(c.scan.empty());
}

TEST(Calibration, FullBudgetNeedsNoPenalty) {
  const ProxProblem p = build_lambda(homogeneous_game(), 0, Vector::Constant(10, 25.0 / 17.0));
  const CalibrationResult c = calibrate_alpha(p, 9.0, {});
  EXPECT_EQ(c.alpha, 0.0);
  EXPECT_LT((c.m - Vector::Ones(9)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Calibration, TwoGroupLowReturnOwner) {
  const SecurityGame g = testing::two_group_game(8.0);
  Vector u(15);
  for (int i = 0; i < 15; ++i) u(i) = i < 5 ? 3.0952380952380953 : 2.380952380952381;
  const CalibrationResult c = calibrate_alpha(build_lambda(g, 7, u), 8.0, {});
  for (Eigen::Index j = 0; j < 14; ++j) EXPECT_NEAR(c.m(j), j < 5 ? 1.0 : 1.0 / 3.0, 1e-6) << j;
}

TEST(Calibration, TwoGroupHighReturnOwnerAtReportedInvestments) {
  const SecurityGame g = testing::two_group_game(3.0);
  Vector u(15);
  for (int i = 0; i < 15; ++i) u(i) = i < 5 ? 40.0 / 17.0 : 545.0 / 340.0;
  const CalibrationResult c = calibrate_alpha(build_lambda(g, 0, u), 3.0, {});
  for (Eigen::Index j = 0; j < 14; ++j) EXPECT_NEAR(c.m(j), j < 4 ? 0.75 : 0.0, 1e-6) << j;
}

TEST(Calibration, BudgetIsSaturatedOnRandomGames) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + t % 8;
    const ProxProblem p = random_game_problem(rng, n, 0.0);
    const double beta = random_vector(rng, 1, 0.2, 0.95)(0) * (n - 1);
    const CalibrationResult c = calibrate_alpha(p, beta, {});
    EXPECT_NEAR(c.m.sum(), beta, 1e-4);
    EXPECT_GE(c.m.minCoeff(), 0.0);
    EXPECT_LE(c.m.maxCoeff(), 1.0);
  }
}

TEST(Calibration, GreedyPrefixValue) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 10;
    const ProxProblem base = random_game_problem(rng, n, 0.0);
    const double beta = random_vector(rng, 1, 0.1, 0.95)(0) * (n - 1);
    const CalibrationResult c = calibrate_alpha(base, beta, {});
    const ProxProblem p = base.with_alpha(c.alpha);
    const Vector greedy = greedy_prefix(*p.factor(), beta);
    EXPECT_NEAR(eval_Q(p, c.m).value, eval_Q(p, greedy).value, 1e-8) << "instance " << t;
  }
}

TEST(Calibration, UnreachableBudgetRaises) {
  const ProxProblem p = ProxProblem::from_matrix(Matrix::Zero(3, 3), 0.0);
  EXPECT_THROW(calibrate_alpha(p, 1.0, {}), CalibrationError);
  EXPECT_THROW(calibrate_alpha(p, 0.0, {}), InvalidArgument);
}

}  // namespace
}  // namespace gne
