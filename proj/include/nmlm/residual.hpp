#pragma once

#include <optional>
#include <vector>

#include "nmlm/equilibrium.hpp"
#include "nmlm/flux.hpp"
#include "nmlm/grid.hpp"
#include "nmlm/norms.hpp"
#include "nmlm/wall.hpp"

namespace nmlm {

/// Right-hand side of the steady equations: external acceleration and the
/// collision model.
struct ScenarioSource {
  Vec3 force{0.0, 0.0, 0.0};
  CollisionSpec collision;
};

/// A per-cell forcing term, stored with the basis it was assembled in.
struct RhsEntry {
  Basis basis;
  Coeffs coeffs;
};

using Rhs = std::vector<RhsEntry>;

/// Grid, walls and source shared by every level of a solve.
struct Problem {
  Grid1D grid;
  BoundarySpec left_wall;
  BoundarySpec right_wall;
  ScenarioSource source;
};

/// G_alpha = sum_d F_d f_{alpha-e_d} + nu (f^E_alpha - f_alpha).
inline Coeffs source_coeffs(const MomentState& s, const ScenarioSource& src) {
  const auto& table = IndexTable::instance();
  const double nu = collision_frequency(src.collision, s.rho(), s.theta());
  Coeffs g = equilibrium_coeffs(s, src.collision);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = nu * (g[k] - s.coeffs[k]);
  for (int d = 0; d < 3; ++d) {
    const double fd = src.force[static_cast<std::size_t>(d)];
    if (fd == 0.0) continue;
    for (int r = 0; r < static_cast<int>(g.size()); ++r) {
      const int rm = table.minus(d, r);
      if (rm >= 0) g[static_cast<std::size_t>(r)] += fd * s.coeffs[static_cast<std::size_t>(rm)];
    }
  }
  return g;
}

/// R_i = (F(f_i, f_{i+1}) - F(f_{i-1}, f_i)) / dx_i - G(f_i) in the basis of f_i.
inline Coeffs residual_operator(const MomentState& prev, const MomentState& self, const MomentState& next,
                                double dx, const ScenarioSource& src) {
  const Coeffs f_right = numerical_flux(self, next, self.basis);
  const Coeffs f_left = numerical_flux(prev, self, self.basis);
  const Coeffs g = source_coeffs(self, src);
  Coeffs r(g.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = (f_right[k] - f_left[k]) / dx - g[k];
  return r;
}

/// Defect r_i - R_i of one cell, in the basis of f_i. Without a forcing
/// entry this is -R_i. The forcing is re-expressed in the current basis.
inline Coeffs cell_residual(const MomentState& prev, const MomentState& self, const MomentState& next, double dx,
                            const ScenarioSource& src, const RhsEntry* rhs = nullptr) {
  Coeffs d = residual_operator(prev, self, next, dx, src);
  for (auto& v : d) v = -v;
  if (rhs != nullptr) {
    if (rhs->basis == self.basis) {
      for (std::size_t k = 0; k < d.size(); ++k) d[k] += rhs->coeffs[k];
    } else {
      const Coeffs r = change_basis(rhs->coeffs, self.order, rhs->basis, self.basis);
      for (std::size_t k = 0; k < d.size(); ++k) d[k] += r[k];
    }
  }
  return d;
}

/// Neighbour of cell i, with Maxwell-wall ghosts outside the domain.
inline MomentState neighbor_state(const Field& field, const Problem& prob, int j) {
  if (j < 0) return wall_ghost_state(field[0], prob.left_wall, Side::Left);
  if (j >= field.size()) return wall_ghost_state(field[field.size() - 1], prob.right_wall, Side::Right);
  return field[j];
}

inline Coeffs cell_residual(const Field& field, const Problem& prob, int i, const Rhs* rhs = nullptr) {
  const int n = field.size();
  const RhsEntry* entry = rhs != nullptr && !rhs->empty() ? &(*rhs)[static_cast<std::size_t>(i)] : nullptr;
  if (i > 0 && i < n - 1)
    return cell_residual(field[i - 1], field[i], field[i + 1], prob.grid.width(i), prob.source, entry);
  const MomentState prev = neighbor_state(field, prob, i - 1);
  const MomentState next = neighbor_state(field, prob, i + 1);
  return cell_residual(prev, field[i], next, prob.grid.width(i), prob.source, entry);
}

/// R_i of every cell (no forcing).
inline std::vector<Coeffs> residual_operator(const Field& field, const Problem& prob) {
  std::vector<Coeffs> out(static_cast<std::size_t>(field.size()));
  for (int i = 0; i < field.size(); ++i) {
    Coeffs d = cell_residual(field, prob, i, nullptr);
    for (auto& v : d) v = -v;
    out[static_cast<std::size_t>(i)] = std::move(d);
  }
  return out;
}

/// Global weighted residual norm of the defect r - R(f).
inline double global_residual(const Field& field, const Problem& prob, const Rhs* rhs = nullptr,
                              int cap = kTruncatedNormCap) {
  std::vector<double> norms(static_cast<std::size_t>(field.size()));
  for (int i = 0; i < field.size(); ++i) {
    const Coeffs d = cell_residual(field, prob, i, rhs);
    norms[static_cast<std::size_t>(i)] = local_residual_norm(d, field.order, field[i].theta(), cap);
  }
  return global_residual_norm(norms, prob.grid.widths());
}

}  // namespace nmlm
