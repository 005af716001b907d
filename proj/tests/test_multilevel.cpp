#include <gtest/gtest.h>

#include "nmlm/scenario.hpp"
#include "oracle.hpp"

using namespace nmlm;

namespace {

ScenarioConfig desk(int cells = 16) {
  ScenarioConfig c = couette_preset();
  c.cells = cells;
  return c;
}

Field smoothed_field(const ScenarioConfig& c, int sweeps) {
  const Problem p = c.problem();
  Field f = c.initial_field();
  smooth(f, sweeps, p, c.smoother(), total_mass(f, p.grid));
  return f;
}

double field_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    m = std::max(m, oracle::max_abs_diff(a[i].coeffs, b[i].coeffs));
    for (std::size_t d = 0; d < 3; ++d) m = std::max(m, std::abs(a[i].basis.u[d] - b[i].basis.u[d]));
    m = std::max(m, std::abs(a[i].basis.theta - b[i].basis.theta));
  }
  return m;
}

Rhs operator_as_rhs(const Field& f, const Problem& p) {
  const auto op = residual_operator(f, p);
  Rhs rhs;
  for (int i = 0; i < f.size(); ++i) rhs.push_back({f[i].basis, op[static_cast<std::size_t>(i)]});
  return rhs;
}

}  // namespace

TEST(OrderSequence, Examples) {
  EXPECT_EQ(order_sequence(10, ReductionStrategy::Halve, 3).orders, (std::vector<int>{3, 5, 10}));
  EXPECT_EQ(order_sequence(26, ReductionStrategy::MinusTwo, 4).orders, (std::vector<int>{20, 22, 24, 26}));
  EXPECT_EQ(order_sequence(4, ReductionStrategy::MinusOne, 1).orders, (std::vector<int>{4}));
  for (auto s : {ReductionStrategy::MinusOne, ReductionStrategy::MinusTwo, ReductionStrategy::Halve})
    EXPECT_EQ(order_sequence(7, s, 1).orders, (std::vector<int>{7}));
}

TEST(OrderSequence, ClampAndCollision) {
  const auto a = order_sequence(5, ReductionStrategy::MinusTwo, 4);
  EXPECT_EQ(a.orders, (std::vector<int>{2, 3, 5}));
  EXPECT_TRUE(a.truncated);
  const auto b = order_sequence(4, ReductionStrategy::Halve, 3);
  EXPECT_EQ(b.orders, (std::vector<int>{2, 4}));
  EXPECT_TRUE(b.truncated);
  EXPECT_FALSE(order_sequence(4, ReductionStrategy::MinusOne, 3).truncated);
  EXPECT_THROW(order_sequence(4, ReductionStrategy::MinusOne, 0), std::invalid_argument);
}

TEST(Restriction, StateAndResidual) {
  const MomentState m = MomentState::maxwellian(6, 1.2, {0.1, 0.2, 0}, 0.9);
  const MomentState r = restrict_state(m, 3);
  EXPECT_EQ(r.coeffs, MomentState::maxwellian(3, 1.2, {0.1, 0.2, 0}, 0.9).coeffs);
  EXPECT_EQ(r.basis, m.basis);

  std::mt19937_64 gen(51);
  const MomentState s = oracle::random_state(gen, 6);
  const MomentState c = restrict_state(s, 3);
  const ConservedMoments a = conserved_moments(s.coeffs, s.basis), b = conserved_moments(c.coeffs, c.basis);
  EXPECT_EQ(a.mass, b.mass);
  EXPECT_EQ(a.momentum, b.momentum);
  EXPECT_EQ(a.energy, b.energy);
  EXPECT_LE(admissibility_defect(c), 1e-15);

  Coeffs high(static_cast<std::size_t>(moment_count(6)), 0.0);
  for (int k = moment_count(3); k < moment_count(6); ++k) high[static_cast<std::size_t>(k)] = 1.0;
  EXPECT_EQ(oracle::max_abs(restrict_residual(high, 3)), 0.0);
  EXPECT_LE(local_residual_norm(restrict_residual(s.coeffs, 3), 3, 1.0, 3),
            local_residual_norm(s.coeffs, 6, 1.0, 6));
}

TEST(CoarseRhs, ZeroDefectGivesOperator) {
  const ScenarioConfig c = desk();
  const Problem p = c.problem();
  const Field f = smoothed_field(c, 3);
  const Rhs rhs = operator_as_rhs(f, p);
  const Field coarse = restrict_field(f, 2);
  const Rhs rc = coarse_rhs(f, &rhs, coarse, p);
  for (int i = 0; i < f.size(); ++i) EXPECT_LE(oracle::max_abs(cell_residual(coarse, p, i, &rc)), 1e-12);
}

TEST(CoarseRhs, SameOrderReturnsFineForcing) {
  const ScenarioConfig c = desk();
  const Problem p = c.problem();
  const Field f = smoothed_field(c, 3);
  Rhs rhs;
  std::mt19937_64 gen(52);
  for (int i = 0; i < f.size(); ++i) rhs.push_back({f[i].basis, oracle::random_state(gen, 4).coeffs});
  const Rhs rc = coarse_rhs(f, &rhs, f, p);
  for (int i = 0; i < f.size(); ++i)
    EXPECT_LE(oracle::max_abs_diff(rc[static_cast<std::size_t>(i)].coeffs, rhs[static_cast<std::size_t>(i)].coeffs),
              1e-12);
}

TEST(CoarseRhs, InitialCoarseDefectIsTruncatedFineDefect) {
  const ScenarioConfig c = desk();
  const Problem p = c.problem();
  const Field f = smoothed_field(c, 3);
  const Field coarse = restrict_field(f, 2);
  const Rhs rc = coarse_rhs(f, nullptr, coarse, p);
  for (int i = 0; i < f.size(); ++i) {
    const Coeffs fine = restrict_residual(cell_residual(f, p, i), 2);
    EXPECT_LE(oracle::max_abs_diff(cell_residual(coarse, p, i, &rc), fine), 1e-12);
  }
}

TEST(Prolongation, ZeroCorrectionIsIdentity) {
  std::mt19937_64 gen(53);
  MomentState fine = oracle::random_state(gen, 6);
  const MomentState before = fine;
  const MomentState coarse = restrict_state(fine, 3);
  ASSERT_TRUE(prolong_correction(fine, coarse, coarse));
  EXPECT_LE(oracle::max_abs_diff(fine.coeffs, before.coeffs), 1e-14);
  for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(fine.basis.u[d], before.basis.u[d], 1e-15);
  EXPECT_NEAR(fine.basis.theta, before.basis.theta, 1e-15);
}

TEST(Prolongation, ConservedMomentBookkeeping) {
  std::mt19937_64 gen(54);
  for (int t = 0; t < 100; ++t) {
    const int order = 3 + t % 6;
    const int m = 2 + t % (order - 2);
    MomentState fine = oracle::random_state(gen, order);
    const MomentState old = restrict_state(fine, m);
    MomentState cnew = oracle::random_state(gen, m);
    cnew.coeffs[0] = old.coeffs[0] * 1.05;
    const ConservedMoments f0 = conserved_moments(fine.coeffs, fine.basis);
    const ConservedMoments cn = conserved_moments(cnew.coeffs, cnew.basis);
    const ConservedMoments co = conserved_moments(old.coeffs, old.basis);
    ASSERT_TRUE(prolong_correction(fine, cnew, old));
    const ConservedMoments out = conserved_moments(fine.coeffs, fine.basis);
    EXPECT_NEAR(out.mass, f0.mass + cn.mass - co.mass, 1e-12 * f0.mass);
    for (std::size_t d = 0; d < 3; ++d)
      EXPECT_NEAR(out.momentum[d], f0.momentum[d] + cn.momentum[d] - co.momentum[d], 1e-12 * f0.mass);
    EXPECT_NEAR(out.energy, f0.energy + cn.energy - co.energy, 1e-12 * f0.energy);
    EXPECT_LE(admissibility_defect(fine), 1e-15);
  }
}

TEST(Prolongation, PureMassCorrection) {
  std::mt19937_64 gen(55);
  MomentState fine = oracle::random_state(gen, 5);
  fine.basis.u = {0, 0, 0};
  const MomentState before = fine;
  const MomentState old = restrict_state(fine, 3);
  MomentState cnew = old;
  cnew.coeffs[0] += 0.1;
  ASSERT_TRUE(prolong_correction(fine, cnew, old));
  EXPECT_NEAR(fine.rho(), before.rho() + 0.1, 1e-14);
  // an added Maxwellian at the same centre keeps the centre
  EXPECT_NEAR(fine.theta(), before.theta(), 1e-14);
  for (int r = 4; r < moment_count(5); ++r)
    EXPECT_NEAR(fine.coeffs[static_cast<std::size_t>(r)], before.coeffs[static_cast<std::size_t>(r)], 1e-14);
}

TEST(Prolongation, RejectsNonPositiveResult) {
  MomentState fine = MomentState::maxwellian(4, 1.0, {0, 0, 0}, 1.0);
  const MomentState old = restrict_state(fine, 2);
  MomentState cnew = old;
  cnew.coeffs[0] = -0.5;
  const MomentState before = fine;
  EXPECT_FALSE(prolong_correction(fine, cnew, old));
  EXPECT_EQ(fine.coeffs, before.coeffs);
}

TEST(Cycle, FasExactnessThreeLevels) {
  const ScenarioConfig c = desk();
  const Problem p = c.problem();
  Field f = smoothed_field(c, 4);
  const Rhs rhs = operator_as_rhs(f, p);
  const Field before = f;
  CyclePlan plan{{2, 3, 4}, 1, 2, 2, 10};
  nmlm_cycle(2, f, &rhs, plan, p, c.smoother(), total_mass(f, p.grid));
  EXPECT_LE(field_diff(f, before), 1e-12);
}

TEST(Cycle, GammaTwoCallCounts) {
  const ScenarioConfig c = desk(8);
  const Problem p = c.problem();
  Field f = c.initial_field();
  CyclePlan plan{{2, 3, 4}, 2, 1, 1, 2};
  CycleStats stats;
  nmlm_cycle(2, f, nullptr, plan, p, c.smoother(), total_mass(f, p.grid), &stats);
  EXPECT_EQ(stats.coarse_solves[1], 2);
  EXPECT_EQ(stats.coarse_solves[0], 4);
  // sweeps: top 1+1, middle 2 x (1+1), bottom 4 x 2
  EXPECT_EQ(stats.smoother.sweeps, 2 + 4 + 8);
}

TEST(Cycle, SingleLevelIsLowestOrderSolve) {
  const ScenarioConfig c = desk(8);
  const Problem p = c.problem();
  Field a = c.initial_field(), b = c.initial_field();
  const double mass = total_mass(a, p.grid);
  nmlm_cycle(0, a, nullptr, CyclePlan{{4}, 1, 2, 2, 10}, p, c.smoother(), mass);
  smooth(b, 10, p, c.smoother(), mass);
  EXPECT_EQ(field_diff(a, b), 0.0);
}

TEST(Solve, ExactStartReturnsImmediately) {
  ScenarioConfig c = desk(8);
  c.right_wall.u_w = {0, 0, 0};
  const SolveResult r = solve(c.problem(), c.initial_field(), c.plan(2), c.smoother(), c.solve_options());
  EXPECT_TRUE(r.converged());
  EXPECT_EQ(r.iterations(), 0);
}

TEST(Solve, MaxItersIsNotAnError) {
  ScenarioConfig c = desk(8);
  c.max_iters = 3;
  const SolveResult r = solve(c.problem(), c.initial_field(), c.plan(1), c.smoother(), c.solve_options());
  EXPECT_EQ(r.status, SolveStatus::MaxIterations);
  EXPECT_EQ(r.history.size(), 4u);
  for (std::size_t k = 1; k < r.history.size(); ++k) {
    EXPECT_EQ(r.history[k].iteration, static_cast<int>(k));
    EXPECT_GE(r.history[k].wall_seconds, r.history[k - 1].wall_seconds);
  }
}

TEST(Solve, TwoLevelNeedsFewerIterations) {
  ScenarioConfig c = desk(32);
  c.tol = 1e-6;
  const Problem p = c.problem();
  const SolveResult one = solve(p, c.initial_field(), c.plan(1), c.smoother(), c.solve_options());
  const SolveResult two = solve(p, c.initial_field(), c.plan(2), c.smoother(), c.solve_options());
  ASSERT_TRUE(one.converged());
  ASSERT_TRUE(two.converged());
  EXPECT_GE(one.iterations(), 5 * two.iterations());
  EXPECT_EQ(two.stats.rejected_corrections, 0);
}

TEST(Solve, ConvergenceFactorOfGeometricHistory) {
  std::vector<ConvergenceRecord> h;
  for (int k = 0; k < 20; ++k) h.push_back({k, 3.0 * std::pow(0.8, k), 0.0});
  EXPECT_NEAR(convergence_factor(h), 0.8, 1e-12);
}
