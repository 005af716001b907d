#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

#include "nmlm/hermite.hpp"
#include "nmlm/moment_state.hpp"

namespace nmlm {

/// Degree cap of the truncated residual norm.
inline constexpr int kTruncatedNormCap = 3;

/// Weighted L2 norm of a residual expanded about temperature theta, summed
/// over |alpha| <= min(order, cap) with weights (2 pi)^{-3/2}
/// theta^{-|alpha|-3/2} alpha!.
inline double local_residual_norm(std::span<const double> res, int order, double theta,
                                  int cap = kTruncatedNormCap) {
  const auto& table = IndexTable::instance();
  const int n = moment_count(std::min(order, cap));
  const double base = std::pow(2.0 * std::numbers::pi, -1.5) * std::pow(theta, -1.5);
  double sum = 0.0;
  for (int r = 0; r < n; ++r) {
    const double weight = base * std::pow(theta, -table.degree(r)) * table.factorial(r);
    const double v = res[static_cast<std::size_t>(r)];
    sum += weight * v * v;
  }
  return std::sqrt(sum);
}

/// sqrt( (1/L) sum_i ||R_i||^2 dx_i )
inline double global_residual_norm(std::span<const double> local_norms, std::span<const double> widths) {
  if (local_norms.empty() || local_norms.size() != widths.size())
    throw std::invalid_argument("global_residual_norm: size mismatch or empty grid");
  double length = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    length += widths[i];
    sum += local_norms[i] * local_norms[i] * widths[i];
  }
  return std::sqrt(sum / length);
}

/// |u_1| + c sqrt(theta) with c the largest root of He_{order+1}.
inline double max_wave_speed(const MomentState& s) {
  return std::abs(s.basis.u[0]) + hermite_largest_root(s.order + 1) * std::sqrt(s.basis.theta);
}

}  // namespace nmlm
