#pragma once

#include <sstream>

#include "nmlm/residual.hpp"

namespace nmlm {

struct SmootherConfig {
  double cfl = 0.9;  // strict local CFL: omega * lambda / dx < 1
  int max_backoff = 30;
};

/// Counters accumulated by the smoother.
struct SmootherStats {
  long updates = 0;
  long backoffs = 0;
  long sweeps = 0;
};

namespace detail {

inline bool es_tensor_positive(const MomentState& s, const CollisionSpec& spec) {
  if (spec.kind != CollisionKind::ESBGK || spec.effective_prandtl() == 1.0) return true;
  const DerivedMoments dm = derived_moments(s);
  Eigen::Matrix3d lambda;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      lambda(i, j) = (i == j ? dm.theta : 0.0) +
                     (1.0 - 1.0 / spec.effective_prandtl()) *
                         dm.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / dm.rho;
  Eigen::LLT<Eigen::Matrix3d> llt(lambda);
  return llt.info() == Eigen::Success;
}

}  // namespace detail

/// Relaxation step size for cell i: cfl * dx_i / lambda_max,i.
inline double relaxation_factor(const MomentState& s, double dx, const SmootherConfig& cfg) {
  return cfg.cfl * dx / max_wave_speed(s);
}

/// One Richardson relaxation of cell i against its current neighbours.
///
/// f* = f + omega (r - R) in the old basis, then re-centred. A non-positive
/// density or temperature (or an ES-BGK tensor that is no longer positive
/// definite) halves omega and retries.
inline MomentState richardson_step(const Field& field, const Problem& prob, int i, const SmootherConfig& cfg,
                                   const Rhs* rhs = nullptr, SmootherStats* stats = nullptr) {
  const MomentState& cell = field[i];
  const Coeffs defect = cell_residual(field, prob, i, rhs);
  double omega = relaxation_factor(cell, prob.grid.width(i), cfg);
  for (int attempt = 0; attempt <= cfg.max_backoff; ++attempt) {
    Coeffs trial = cell.coeffs;
    for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += omega * defect[k];
    try {
      MomentState next = recover_macros(std::move(trial), cell.order, cell.basis);
      if (detail::es_tensor_positive(next, prob.source.collision)) {
        if (stats != nullptr) ++stats->updates;
        return next;
      }
    } catch (const PositivityError&) {
    }
    if (stats != nullptr) ++stats->backoffs;
    omega *= 0.5;
  }
  std::ostringstream os;
  os << "positivity back-off exhausted at cell " << i << " (order " << cell.order << ", rho " << cell.rho()
     << ", u1 " << cell.u()[0] << ", u2 " << cell.u()[1] << ", theta " << cell.theta() << ")";
  throw PositivityError(os.str());
}

/// Forward then backward Gauss-Seidel pass of Richardson steps, followed by
/// the mass correction.
inline void sgs_sweep(Field& field, const Problem& prob, const SmootherConfig& cfg, double target_mass,
                      const Rhs* rhs = nullptr, SmootherStats* stats = nullptr) {
  const int n = field.size();
  for (int i = 0; i < n; ++i) field[i] = richardson_step(field, prob, i, cfg, rhs, stats);
  for (int i = n - 1; i >= 0; --i) field[i] = richardson_step(field, prob, i, cfg, rhs, stats);
  mass_correction(field, prob.grid, target_mass);
  if (stats != nullptr) ++stats->sweeps;
}

inline void smooth(Field& field, int steps, const Problem& prob, const SmootherConfig& cfg, double target_mass,
                   const Rhs* rhs = nullptr, SmootherStats* stats = nullptr) {
  for (int s = 0; s < steps; ++s) sgs_sweep(field, prob, cfg, target_mass, rhs, stats);
}

}  // namespace nmlm
