#pragma once

#include <array>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "nmlm/errors.hpp"
#include "nmlm/multi_index.hpp"

namespace nmlm {

using Vec3 = std::array<double, 3>;
using Coeffs = std::vector<double>;

/// Expansion centre [u, theta] of a Hermite basis.
struct Basis {
  Vec3 u{0.0, 0.0, 0.0};
  double theta = 1.0;

  friend bool operator==(const Basis&, const Basis&) = default;
};

/// One cell's distribution: Hermite coefficients about its own mean velocity
/// and temperature.
struct MomentState {
  int order = 2;
  Basis basis;
  Coeffs coeffs;

  double rho() const { return coeffs[0]; }
  const Vec3& u() const { return basis.u; }
  double theta() const { return basis.theta; }

  static MomentState maxwellian(int order, double rho, const Vec3& u, double theta) {
    check_order(order);
    MomentState s;
    s.order = order;
    s.basis = Basis{u, theta};
    s.coeffs.assign(static_cast<std::size_t>(moment_count(order)), 0.0);
    s.coeffs[0] = rho;
    return s;
  }
};

struct DerivedMoments {
  double rho = 0.0;
  Vec3 u{};
  double theta = 0.0;
  std::array<std::array<double, 3>, 3> sigma{};
  Vec3 q{};
};

/// Mass, momentum and energy (1/2 |xi|^2 moment) of a coefficient array.
struct ConservedMoments {
  double mass = 0.0;
  Vec3 momentum{};
  double energy = 0.0;
};

inline double coeff_or_zero(std::span<const double> c, int r) {
  return r >= 0 && r < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(r)] : 0.0;
}

inline DerivedMoments derived_moments(const MomentState& s) {
  DerivedMoments m;
  const std::span<const double> c(s.coeffs);
  m.rho = c[0];
  m.u = s.basis.u;
  m.theta = s.basis.theta;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          (i == j ? 2.0 : 1.0) * coeff_or_zero(c, pair_rank(i, j));
  for (int i = 0; i < 3; ++i) {
    MultiIndex three;
    three.a[static_cast<std::size_t>(i)] = 3;
    double q = 2.0 * coeff_or_zero(c, rank_unchecked(three));
    for (int d = 0; d < 3; ++d) {
      MultiIndex b;
      b.a[static_cast<std::size_t>(d)] += 2;
      b.a[static_cast<std::size_t>(i)] += 1;
      q += coeff_or_zero(c, rank_unchecked(b));
    }
    m.q[static_cast<std::size_t>(i)] = q;
  }
  return m;
}

inline ConservedMoments conserved_moments(std::span<const double> c, const Basis& b) {
  ConservedMoments m;
  m.mass = c[0];
  double u2 = 0.0;
  double trace = 0.0;
  double u_dot_e = 0.0;
  for (int d = 0; d < 3; ++d) {
    const auto ud = static_cast<std::size_t>(d);
    const double ce = coeff_or_zero(c, unit_rank(d));
    m.momentum[ud] = b.u[ud] * c[0] + ce;
    u2 += b.u[ud] * b.u[ud];
    u_dot_e += b.u[ud] * ce;
    trace += coeff_or_zero(c, double_unit_rank(d));
  }
  m.energy = 0.5 * (c[0] * (u2 + 3.0 * b.theta) + 2.0 * u_dot_e + 2.0 * trace);
  return m;
}

/// Mean velocity and temperature carried by the conserved moments.
inline Basis macros_from_conserved(const ConservedMoments& m) {
  if (!(m.mass > 0.0) || !std::isfinite(m.mass)) {
    std::ostringstream os;
    os << "non-positive density " << m.mass;
    throw PositivityError(os.str());
  }
  Basis b;
  double u2 = 0.0;
  for (int d = 0; d < 3; ++d) {
    const auto ud = static_cast<std::size_t>(d);
    b.u[ud] = m.momentum[ud] / m.mass;
    u2 += b.u[ud] * b.u[ud];
  }
  b.theta = (2.0 * m.energy / m.mass - u2) / 3.0;
  if (!(b.theta > 0.0) || !std::isfinite(b.theta)) {
    std::ostringstream os;
    os << "non-positive temperature " << b.theta;
    throw PositivityError(os.str());
  }
  return b;
}

namespace detail {

// In place c <- sum_k coef[k] c_{alpha - k*step*e_d}. Processing ranks in
// descending order only reads entries that are still unmodified, since
// lowering a component lowers the rank.
template <class T>
void apply_line_series(std::span<T> c, int d, int step, std::span<const T> coef) {
  const auto& table = IndexTable::instance();
  const int n = static_cast<int>(c.size());
  for (int r = n - 1; r >= 0; --r) {
    T acc = c[static_cast<std::size_t>(r)];
    int j = step == 1 ? table.minus(d, r) : table.minus2(d, r);
    std::size_t k = 1;
    while (j >= 0) {
      acc += coef[k] * c[static_cast<std::size_t>(j)];
      j = step == 1 ? table.minus(d, j) : table.minus2(d, j);
      ++k;
    }
    c[static_cast<std::size_t>(r)] = acc;
  }
}

template <class T>
void exp_series(T t, int terms, std::vector<T>& coef) {
  coef.resize(static_cast<std::size_t>(terms + 1));
  coef[0] = 1;
  for (int k = 1; k <= terms; ++k) coef[static_cast<std::size_t>(k)] = coef[static_cast<std::size_t>(k - 1)] * t / k;
}

}  // namespace detail

/// Re-expresses an order-`order` expansion about `from` as the order-`order`
/// expansion about `to` with the same velocity moments up to that order.
///
/// Uses d/du_d H_alpha = H_{alpha+e_d} and d/dtheta H_alpha =
/// 1/2 sum_d H_{alpha+2e_d}; both generators are nilpotent on the truncated
/// space so the exponentials are finite sums.
inline void change_basis_inplace(std::span<double> c, int order, const Basis& from, const Basis& to) {
  std::vector<double> coef;
  for (int d = 0; d < 3; ++d) {
    const double s = to.u[static_cast<std::size_t>(d)] - from.u[static_cast<std::size_t>(d)];
    if (s == 0.0) continue;
    detail::exp_series(-s, order, coef);
    detail::apply_line_series<double>(c, d, 1, coef);
  }
  const double dt = to.theta - from.theta;
  if (dt != 0.0) {
    detail::exp_series(-dt / 2.0, order / 2, coef);
    for (int d = 0; d < 3; ++d) detail::apply_line_series<double>(c, d, 2, coef);
  }
}

inline Coeffs change_basis(std::span<const double> c, int order, const Basis& from, const Basis& to) {
  Coeffs out(c.begin(), c.end());
  change_basis_inplace(out, order, from, to);
  return out;
}

inline MomentState change_basis(const MomentState& s, const Basis& to) {
  MomentState out = s;
  change_basis_inplace(out.coeffs, s.order, s.basis, to);
  out.basis = to;
  return out;
}

/// Sets f_{e_d} = 0 and sum_d f_{2e_d} = 0 exactly.
inline void enforce_admissibility(Coeffs& c) {
  for (int d = 0; d < 3; ++d) c[static_cast<std::size_t>(unit_rank(d))] = 0.0;
  if (static_cast<int>(c.size()) > double_unit_rank(2)) {
    const double partial = c[static_cast<std::size_t>(double_unit_rank(0))] + c[static_cast<std::size_t>(double_unit_rank(1))];
    c[static_cast<std::size_t>(double_unit_rank(2))] = -partial;
  }
}

/// Re-centres a raw coefficient array on its own mean velocity and
/// temperature and returns the admissible state.
inline MomentState recover_macros(Coeffs raw, int order, const Basis& from) {
  const Basis to = macros_from_conserved(conserved_moments(raw, from));
  change_basis_inplace(raw, order, from, to);
  enforce_admissibility(raw);
  return MomentState{order, to, std::move(raw)};
}

/// Max |f_{e_d}| and |sum_d f_{2e_d}| relative to rho.
inline double admissibility_defect(const MomentState& s) {
  const auto& c = s.coeffs;
  double worst = 0.0;
  for (int d = 0; d < 3; ++d) worst = std::max(worst, std::abs(c[static_cast<std::size_t>(unit_rank(d))]));
  double tr = 0.0;
  for (int d = 0; d < 3; ++d) tr += c[static_cast<std::size_t>(double_unit_rank(d))];
  worst = std::max(worst, std::abs(tr));
  return worst / std::abs(c[0]);
}

/// Keeps the coefficients of degree <= m (a prefix in the graded order).
inline Coeffs truncate_coeffs(std::span<const double> c, int m) {
  const auto n = static_cast<std::size_t>(moment_count(m));
  return Coeffs(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(std::min(n, c.size())));
}

/// Appends zero coefficients up to order M.
inline Coeffs pad_coeffs(std::span<const double> c, int order) {
  Coeffs out(c.begin(), c.end());
  out.resize(static_cast<std::size_t>(moment_count(order)), 0.0);
  return out;
}

}  // namespace nmlm
