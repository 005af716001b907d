#pragma once

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nmlm/multi_index.hpp"

namespace nmlm {

/// Probabilists' Hermite polynomial He_n(x) by the three-term recurrence.
inline double hermite_he(int n, double x) {
  if (n == 0) return 1.0;
  double hm1 = 1.0;
  double h = x;
  for (int k = 1; k < n; ++k) {
    const double hp1 = x * h - k * hm1;
    hm1 = h;
    h = hp1;
  }
  return h;
}

/// Fills out[0..n] with He_0(x) .. He_n(x).
inline void hermite_he_all(int n, double x, double* out) {
  out[0] = 1.0;
  if (n >= 1) out[1] = x;
  for (int k = 1; k < n; ++k) out[k + 1] = x * out[k] - k * out[k - 1];
}

/// Roots of He_n in ascending order.
///
/// Eigenvalues of the symmetric tridiagonal Jacobi matrix of the
/// recurrence x He_k = He_{k+1} + k He_{k-1}.
inline std::vector<double> hermite_roots(int n) {
  if (n <= 0) return {};
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermite_roots: eigen solve failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Largest root of He_n, cached for n <= kMaxOrder + 1.
inline double hermite_largest_root(int n) {
  static const std::array<double, kMaxOrder + 2> table = [] {
    std::array<double, kMaxOrder + 2> t{};
    t[0] = 0.0;
    for (int k = 1; k <= kMaxOrder + 1; ++k) t[static_cast<std::size_t>(k)] = hermite_roots(k).back();
    return t;
  }();
  if (n < 0 || n > kMaxOrder + 1) throw std::invalid_argument("hermite_largest_root: order out of range");
  return table[static_cast<std::size_t>(n)];
}

}  // namespace nmlm
