#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nmlm/errors.hpp"
#include "nmlm/moment_state.hpp"

namespace nmlm {

enum class CollisionKind { BGK, Shakhov, ESBGK };

enum class NuLawKind { PowerLaw, HardSphere };

/// Collision-frequency law. PowerLaw: sqrt(pi/2) Pr/Kn rho theta^(1-w).
/// HardSphere: 16/5 sqrt(theta/(2 pi)) Pr/Kn rho.
struct NuLaw {
  NuLawKind kind = NuLawKind::PowerLaw;
  double kn = 0.1;
  double w = 0.81;

  static NuLaw power_law(double kn, double w) { return {NuLawKind::PowerLaw, kn, w}; }
  static NuLaw hard_sphere(double kn) { return {NuLawKind::HardSphere, kn, 0.5}; }
};

struct CollisionSpec {
  CollisionKind kind = CollisionKind::ESBGK;
  double prandtl = 2.0 / 3.0;
  NuLaw nu_law;

  /// Prandtl number the model actually uses; plain BGK is Pr = 1.
  double effective_prandtl() const { return kind == CollisionKind::BGK ? 1.0 : prandtl; }
};

inline double collision_frequency(const CollisionSpec& spec, double rho, double theta) {
  const double pr = spec.effective_prandtl();
  switch (spec.nu_law.kind) {
    case NuLawKind::PowerLaw:
      return std::sqrt(std::numbers::pi / 2.0) * pr / spec.nu_law.kn * rho * std::pow(theta, 1.0 - spec.nu_law.w);
    case NuLawKind::HardSphere:
      return 16.0 / 5.0 * std::sqrt(theta / (2.0 * std::numbers::pi)) * pr / spec.nu_law.kn * rho;
  }
  return 0.0;
}

namespace detail {

inline void shakhov_correction(const MomentState& s, double pr, Coeffs& out) {
  if (s.order < 3) return;
  const DerivedMoments dm = derived_moments(s);
  for (int i = 0; i < 3; ++i) {
    const double c = (1.0 - pr) * dm.q[static_cast<std::size_t>(i)] / 5.0;
    MultiIndex three;
    three.a[static_cast<std::size_t>(i)] = 3;
    out[static_cast<std::size_t>(rank_unchecked(three))] += c;
    for (int d = 0; d < 3; ++d) {
      if (d == i) continue;
      MultiIndex b;
      b.a[static_cast<std::size_t>(i)] = 1;
      b.a[static_cast<std::size_t>(d)] = 2;
      out[static_cast<std::size_t>(rank_unchecked(b))] += c;
    }
  }
}

// Coefficients of the Gaussian with covariance theta I + A in the [u, theta]
// basis: rho times the Taylor coefficients of exp(t^T A t / 2), built by
// a_d c_alpha = sum_j A_dj c_{alpha - e_d - e_j}.
inline void gaussian_coefficients(const MomentState& s, const Eigen::Matrix3d& aniso, Coeffs& out) {
  const auto& table = IndexTable::instance();
  const int n = moment_count(s.order);
  out.assign(static_cast<std::size_t>(n), 0.0);
  out[0] = s.rho();
  for (int r = 1; r < n; ++r) {
    if (table.degree(r) % 2 != 0) continue;
    const MultiIndex& a = table.alpha(r);
    int d = 0;
    while (a[d] == 0) ++d;
    const int rd = table.minus(d, r);
    double acc = 0.0;
    for (int j = 0; j < 3; ++j) {
      const int rj = table.minus(j, rd);
      if (rj < 0) continue;
      acc += aniso(d, j) * out[static_cast<std::size_t>(rj)];
    }
    out[static_cast<std::size_t>(r)] = acc / a[d];
  }
}

}  // namespace detail

/// Projection of the model's equilibrium onto the state's own basis and order.
inline Coeffs equilibrium_coeffs(const MomentState& s, const CollisionSpec& spec) {
  const double pr = spec.effective_prandtl();
  Coeffs out(static_cast<std::size_t>(moment_count(s.order)), 0.0);
  out[0] = s.rho();
  if (pr == 1.0) return out;

  switch (spec.kind) {
    case CollisionKind::BGK:
      break;
    case CollisionKind::Shakhov:
      detail::shakhov_correction(s, pr, out);
      break;
    case CollisionKind::ESBGK: {
      const DerivedMoments dm = derived_moments(s);
      Eigen::Matrix3d aniso;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          aniso(i, j) = (1.0 - 1.0 / pr) * dm.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / dm.rho;
      const Eigen::Matrix3d lambda = aniso + dm.theta * Eigen::Matrix3d::Identity();
      Eigen::LLT<Eigen::Matrix3d> llt(lambda);
      if (llt.info() != Eigen::Success || lambda.determinant() <= 0.0) {
        std::ostringstream os;
        os << "ES-BGK tensor not positive definite:\n" << lambda;
        throw EquilibriumDomainError(os.str());
      }
      detail::gaussian_coefficients(s, aniso, out);
      out[static_cast<std::size_t>(double_unit_rank(2))] =
          -(out[static_cast<std::size_t>(double_unit_rank(0))] + out[static_cast<std::size_t>(double_unit_rank(1))]);
      break;
    }
  }
  return out;
}

}  // namespace nmlm
