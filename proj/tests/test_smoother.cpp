#include <gtest/gtest.h>

#include "nmlm/scenario.hpp"
#include "oracle.hpp"

using namespace nmlm;

namespace {

ScenarioConfig desk(int cells = 32) {
  ScenarioConfig c = couette_preset();
  c.cells = cells;
  return c;
}

bool same_field(const Field& a, const Field& b, double tol) {
  for (int i = 0; i < a.size(); ++i) {
    if (oracle::max_abs_diff(a[i].coeffs, b[i].coeffs) > tol) return false;
    for (std::size_t d = 0; d < 3; ++d)
      if (std::abs(a[i].basis.u[d] - b[i].basis.u[d]) > tol) return false;
    if (std::abs(a[i].basis.theta - b[i].basis.theta) > tol) return false;
  }
  return true;
}

}  // namespace

TEST(Smoother, RelaxationFactorScalesWithWidth) {
  const MomentState s = MomentState::maxwellian(4, 1.0, {0.3, 0, 0}, 1.2);
  const SmootherConfig cfg;
  EXPECT_DOUBLE_EQ(relaxation_factor(s, 0.2, cfg), 2.0 * relaxation_factor(s, 0.1, cfg));
  EXPECT_LT(relaxation_factor(s, 0.1, cfg) * max_wave_speed(s) / 0.1, 1.0);
}

TEST(Smoother, UniformEquilibriumUnchanged) {
  ScenarioConfig c = desk();
  c.right_wall.u_w = {0, 0, 0};
  const Problem p = c.problem();
  Field f = c.initial_field();
  const Field before = f;
  sgs_sweep(f, p, c.smoother(), total_mass(f, p.grid));
  EXPECT_TRUE(same_field(f, before, 1e-15));
  EXPECT_EQ(global_residual(f, p), 0.0);
}

TEST(Smoother, FirstSweepReducesResidual) {
  const ScenarioConfig c = desk();
  const Problem p = c.problem();
  Field f = c.initial_field();
  const double r0 = global_residual(f, p);
  sgs_sweep(f, p, c.smoother(), total_mass(f, p.grid));
  EXPECT_LT(global_residual(f, p), r0);
}

TEST(Smoother, ForcingAtCurrentOperatorIsFixedPoint) {
  const ScenarioConfig c = desk(16);
  const Problem p = c.problem();
  Field f = c.initial_field();
  smooth(f, 5, p, c.smoother(), total_mass(f, p.grid));
  const std::vector<Coeffs> op = residual_operator(f, p);
  Rhs rhs;
  for (int i = 0; i < f.size(); ++i) rhs.push_back({f[i].basis, op[static_cast<std::size_t>(i)]});
  const Field before = f;
  sgs_sweep(f, p, c.smoother(), total_mass(f, p.grid), &rhs);
  EXPECT_TRUE(same_field(f, before, 1e-13));
}

TEST(Smoother, ZeroStepsAndComposition) {
  const ScenarioConfig c = desk(16);
  const Problem p = c.problem();
  const Field f0 = c.initial_field();
  const double mass = total_mass(f0, p.grid);
  Field a = f0;
  smooth(a, 0, p, c.smoother(), mass);
  EXPECT_TRUE(same_field(a, f0, 0.0));
  Field b = f0;
  smooth(a, 5, p, c.smoother(), mass);
  smooth(b, 2, p, c.smoother(), mass);
  smooth(b, 3, p, c.smoother(), mass);
  EXPECT_TRUE(same_field(a, b, 0.0));
}

TEST(Smoother, MoreStepsLowerResidual) {
  const ScenarioConfig c = desk();
  const Problem p = c.problem();
  const Field f0 = c.initial_field();
  Field a = f0, b = f0;
  smooth(a, 2, p, c.smoother(), total_mass(f0, p.grid));
  smooth(b, 10, p, c.smoother(), total_mass(f0, p.grid));
  EXPECT_LE(global_residual(b, p), global_residual(a, p));
}

TEST(Smoother, MassAndAdmissibilityAfterSweeps) {
  const ScenarioConfig c = desk();
  const Problem p = c.problem();
  Field f = c.initial_field();
  const double mass = total_mass(f, p.grid);
  for (int k = 0; k < 5; ++k) {
    sgs_sweep(f, p, c.smoother(), mass);
    EXPECT_NEAR(total_mass(f, p.grid), mass, 1e-15);
    for (const auto& s : f.cells) EXPECT_LE(admissibility_defect(s), 1e-15);
  }
}

TEST(Smoother, BackoffRecoversPositiveDensity) {
  const ScenarioConfig c = desk(8);
  const Problem p = c.problem();
  Field f = c.initial_field();
  const double omega = relaxation_factor(f[3], p.grid.width(3), c.smoother());
  Rhs rhs;
  for (int i = 0; i < f.size(); ++i) rhs.push_back({f[i].basis, Coeffs(f[i].coeffs.size(), 0.0)});
  rhs[3].coeffs[0] = -3.0 / omega;  // a full step would drive rho to -2
  SmootherStats stats;
  const MomentState next = richardson_step(f, p, 3, c.smoother(), &rhs, &stats);
  EXPECT_EQ(stats.backoffs, 2);
  EXPECT_NEAR(next.rho(), 0.25, 1e-12);

  SmootherConfig tight = c.smoother();
  tight.max_backoff = 1;
  EXPECT_THROW(richardson_step(f, p, 3, tight, &rhs), PositivityError);
}

TEST(Smoother, PureCollisionRelaxesToEquilibrium) {
  // one cell whose neighbours are itself: only the collision term acts
  std::mt19937_64 gen(41);
  ScenarioSource src;
  src.collision.nu_law = NuLaw::power_law(0.1199, 0.81);
  MomentState s = oracle::random_state(gen, 4, 0.02);
  double prev = 1e300;
  for (int k = 0; k < 20; ++k) {
    const Coeffs d = cell_residual(s, s, s, 1.0, src);
    const Coeffs fe = equilibrium_coeffs(s, src.collision);
    const double dist = oracle::max_abs_diff(s.coeffs, fe);
    EXPECT_LE(dist, prev);
    prev = dist;
    Coeffs raw = s.coeffs;
    const double omega = 0.9 / collision_frequency(src.collision, s.rho(), s.theta());
    for (std::size_t r = 0; r < raw.size(); ++r) raw[r] += omega * d[r];
    s = recover_macros(raw, 4, s.basis);
  }
  EXPECT_LT(prev, 1e-8);
}
