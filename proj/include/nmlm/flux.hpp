#pragma once

#include <algorithm>
#include <span>

#include "nmlm/moment_state.hpp"
#include "nmlm/norms.hpp"

namespace nmlm {

/// Coefficients of xi_1 f projected onto the same basis and order:
/// theta f_{alpha-e1} + u_1 f_alpha + (alpha_1 + 1) f_{alpha+e1}, the last
/// term dropped on the top degree.
inline void advection_flux_coeffs(std::span<const double> f, int order, const Basis& b, std::span<double> out) {
  const auto& table = IndexTable::instance();
  const int n = moment_count(order);
  const int top_start = moment_count(order - 1);
  const double u1 = b.u[0];
  for (int r = 0; r < n; ++r) {
    double v = u1 * f[static_cast<std::size_t>(r)];
    const int rm = table.minus(0, r);
    if (rm >= 0) v += b.theta * f[static_cast<std::size_t>(rm)];
    if (r < top_start) v += (table.alpha(r)[0] + 1) * f[static_cast<std::size_t>(table.plus(0, r))];
    out[static_cast<std::size_t>(r)] = v;
  }
}

inline Coeffs advection_flux_coeffs(const MomentState& s) {
  Coeffs out(s.coeffs.size());
  advection_flux_coeffs(s.coeffs, s.order, s.basis, out);
  return out;
}

/// Local Lax-Friedrichs flux between `left` and `right`, expressed in the
/// target basis. Both states are moved into the target basis first; the
/// dissipation speed is the larger of the two characteristic bounds.
inline Coeffs numerical_flux(const MomentState& left, const MomentState& right, const Basis& target) {
  const int order = left.order;
  const auto n = static_cast<std::size_t>(moment_count(order));
  Coeffs fl = left.basis == target ? left.coeffs : change_basis(left.coeffs, order, left.basis, target);
  Coeffs fr = right.basis == target ? right.coeffs : change_basis(right.coeffs, order, right.basis, target);
  const double lambda = std::max(max_wave_speed(left), max_wave_speed(right));

  Coeffs phi_l(n), phi_r(n), out(n);
  advection_flux_coeffs(fl, order, target, phi_l);
  advection_flux_coeffs(fr, order, target, phi_r);
  for (std::size_t k = 0; k < n; ++k) out[k] = 0.5 * (phi_l[k] + phi_r[k]) - 0.5 * lambda * (fr[k] - fl[k]);
  return out;
}

}  // namespace nmlm
