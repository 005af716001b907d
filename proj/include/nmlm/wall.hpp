#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "nmlm/errors.hpp"
#include "nmlm/hermite.hpp"
#include "nmlm/moment_state.hpp"
#include "nmlm/norms.hpp"

namespace nmlm {

/// Maxwell wall: diffuse re-emission at (u_w, theta_w) with probability
/// `accommodation`, specular reflection otherwise.
struct BoundarySpec {
  double theta_w = 1.0;
  Vec3 u_w{0.0, 0.0, 0.0};
  double accommodation = 1.0;
};

enum class Side { Left, Right };

/// Half of velocity space selected by the sign of xi_1.
enum class HalfSpace { Positive, Negative };

namespace detail {

struct HalfLineRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // include exp(-v^2/2) / sqrt(2 pi)
};

// Composite 20-point Gauss-Legendre on unit-width panels covering the
// half-line {v > a} or {v < a}, truncated where the Gaussian is below 1e-87.
inline HalfLineRule half_line_rule(double a, HalfSpace half) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  constexpr double kReach = 20.0;
  double lo, hi;
  if (half == HalfSpace::Positive) {
    lo = std::max(a, -kReach);
    hi = std::max(a, 0.0) + kReach;
  } else {
    lo = std::min(a, 0.0) - kReach;
    hi = std::min(a, kReach);
  }
  HalfLineRule rule;
  if (!(hi > lo)) return rule;
  const int panels = static_cast<int>(std::ceil(hi - lo));
  const double h = (hi - lo) / panels;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  rule.nodes.reserve(static_cast<std::size_t>(panels) * 20);
  rule.weights.reserve(static_cast<std::size_t>(panels) * 20);
  auto push = [&](double v, double wt) {
    rule.nodes.push_back(v);
    rule.weights.push_back(wt * norm * std::exp(-0.5 * v * v));
  };
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    const double half_h = 0.5 * h;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] == 0.0) {
        push(mid, w[k] * half_h);
      } else {
        push(mid + half_h * x[k], w[k] * half_h);
        push(mid - half_h * x[k], w[k] * half_h);
      }
    }
  }
  return rule;
}

}  // namespace detail

/// Order-`order` moment-matched expansion, in the same basis, of the
/// restriction of h to one half of velocity space.
///
/// The tangential directions integrate over the whole line, so only the
/// normal component of the index mixes:
/// g_alpha = sum_g theta^{(a1-g)/2} / a1! K_{a1,g} h_{(g,a2,a3)} with
/// K_{a,g} = (2 pi)^{-1/2} int_half He_a He_g exp(-v^2/2) dv.
inline Coeffs half_space_coeffs(std::span<const double> h, int order, const Basis& b, HalfSpace half) {
  const auto& table = IndexTable::instance();
  const double sqrt_theta = std::sqrt(b.theta);
  const detail::HalfLineRule rule = detail::half_line_rule(-b.u[0] / sqrt_theta, half);

  const auto dim = static_cast<std::size_t>(order + 1);
  std::vector<double> kmat(dim * dim, 0.0);
  std::vector<double> he(dim);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    hermite_he_all(order, rule.nodes[q], he.data());
    const double wq = rule.weights[q];
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t g = 0; g <= a; ++g) kmat[a * dim + g] += wq * he[a] * he[g];
  }
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t g = a + 1; g < dim; ++g) kmat[a * dim + g] = kmat[g * dim + a];

  std::vector<double> pow_theta(2 * dim + 1);
  for (std::size_t k = 0; k < pow_theta.size(); ++k)
    pow_theta[k] = std::pow(sqrt_theta, static_cast<double>(k) - static_cast<double>(dim));

  const int n = moment_count(order);
  Coeffs out(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    const MultiIndex& a = table.alpha(r);
    const int tangential = a[1] + a[2];
    double fact = 1.0;
    for (int k = 2; k <= a[0]; ++k) fact *= k;
    double acc = 0.0;
    for (int g = 0; g + tangential <= order; ++g) {
      const int rg = rank_unchecked(MultiIndex{{g, a[1], a[2]}});
      acc += pow_theta[static_cast<std::size_t>(a[0] - g) + dim] *
             kmat[static_cast<std::size_t>(a[0]) * dim + static_cast<std::size_t>(g)] * h[static_cast<std::size_t>(rg)];
    }
    out[static_cast<std::size_t>(r)] = acc / fact;
  }
  return out;
}

/// Mirror image f(-xi_1, xi_2, xi_3) of an admissible state.
inline MomentState mirror_state(const MomentState& s) {
  MomentState m = s;
  m.basis.u[0] = -s.basis.u[0];
  const auto& table = IndexTable::instance();
  for (int r = 0; r < static_cast<int>(m.coeffs.size()); ++r)
    if (table.alpha(r)[0] % 2 != 0) m.coeffs[static_cast<std::size_t>(r)] = -m.coeffs[static_cast<std::size_t>(r)];
  return m;
}

/// Ghost cell for a Maxwell wall.
///
/// The ghost is the mirror image of the inner cell, except on the half of
/// velocity space that points into the domain, where a fraction
/// `accommodation` of it is replaced by the wall Maxwellian of density rho_w.
/// rho_w is solved so the mass component of the Lax-Friedrichs flux between
/// ghost and inner cell vanishes; the dissipation speed depends on the ghost,
/// so the solve is repeated until that speed is stationary.
inline MomentState wall_ghost_state(const MomentState& inner, const BoundarySpec& wall, Side side) {
  const double chi = wall.accommodation;
  MomentState mirror = mirror_state(inner);
  if (chi == 0.0) return mirror;
  if (!(wall.theta_w > 0.0)) throw BoundaryError("wall temperature must be positive");

  const int order = inner.order;
  const HalfSpace entering = side == Side::Left ? HalfSpace::Positive : HalfSpace::Negative;
  const Basis& b = mirror.basis;

  const Coeffs mirror_in = half_space_coeffs(mirror.coeffs, order, b, entering);
  Coeffs unit(static_cast<std::size_t>(moment_count(order)), 0.0);
  unit[0] = 1.0;
  const Basis wall_basis{wall.u_w, wall.theta_w};
  Coeffs wall_in = half_space_coeffs(unit, order, wall_basis, entering);
  change_basis_inplace(wall_in, order, wall_basis, b);

  auto normal_flux = [&](const Coeffs& c) { return b.u[0] * c[0] + c[static_cast<std::size_t>(unit_rank(0))]; };
  const double p0 = mirror_in[0];
  const double p1 = std::abs(normal_flux(mirror_in));
  const double w0 = wall_in[0];
  const double w1 = std::abs(normal_flux(wall_in));

  Coeffs base = mirror.coeffs;
  for (std::size_t k = 0; k < base.size(); ++k) base[k] -= chi * mirror_in[k];

  const double lambda_inner = max_wave_speed(inner);
  double lambda = lambda_inner;
  MomentState ghost;
  for (int it = 0; it < 50; ++it) {
    const double rho_w = (p1 + lambda * p0) / (w1 + lambda * w0);
    if (!(rho_w > 0.0)) {
      std::ostringstream os;
      os << "wall density " << rho_w << " is not positive";
      throw BoundaryError(os.str());
    }
    Coeffs g = base;
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += chi * rho_w * wall_in[k];
    try {
      ghost = recover_macros(std::move(g), order, b);
    } catch (const PositivityError& e) {
      throw BoundaryError(std::string("ghost state: ") + e.what());
    }
    const double next = std::max(lambda_inner, max_wave_speed(ghost));
    if (std::abs(next - lambda) <= 1e-15 * lambda) break;
    lambda = next;
  }
  return ghost;
}

}  // namespace nmlm
