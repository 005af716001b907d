#pragma once

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmlm/smoother.hpp"

namespace nmlm {

/// Rule giving the next lower order of the hierarchy.
enum class ReductionStrategy { MinusOne, MinusTwo, Halve };

inline int reduce_order(int m, ReductionStrategy s) {
  switch (s) {
    case ReductionStrategy::MinusOne:
      return m - 1;
    case ReductionStrategy::MinusTwo:
      return m - 2;
    case ReductionStrategy::Halve:
      return (m + 1) / 2;
  }
  return m;
}

inline std::string to_string(ReductionStrategy s) {
  switch (s) {
    case ReductionStrategy::MinusOne:
      return "minus1";
    case ReductionStrategy::MinusTwo:
      return "minus2";
    case ReductionStrategy::Halve:
      return "halve";
  }
  return "?";
}

inline ReductionStrategy parse_strategy(const std::string& s) {
  if (s == "minus1" || s == "m-1" || s == "MinusOne") return ReductionStrategy::MinusOne;
  if (s == "minus2" || s == "m-2" || s == "MinusTwo") return ReductionStrategy::MinusTwo;
  if (s == "halve" || s == "half" || s == "Halve") return ReductionStrategy::Halve;
  throw std::invalid_argument("unknown reduction strategy '" + s + "'");
}

struct OrderSequence {
  std::vector<int> orders;  // ascending
  bool truncated = false;   // fewer levels than requested were reachable
};

/// Orders of a `levels`-level hierarchy with top order M, ascending.
/// Reduction stops at order 2; a strategy that cannot lower the order
/// further ends the sequence.
inline OrderSequence order_sequence(int top, ReductionStrategy strategy, int levels) {
  if (levels < 1) throw std::invalid_argument("order_sequence: levels must be >= 1");
  if (top < 2) throw std::invalid_argument("order_sequence: top order must be >= 2");
  OrderSequence seq;
  std::vector<int> desc{top};
  while (static_cast<int>(desc.size()) < levels) {
    const int cur = desc.back();
    const int next = std::max(2, reduce_order(cur, strategy));
    if (next >= cur) {
      seq.truncated = true;
      break;
    }
    desc.push_back(next);
  }
  seq.orders.assign(desc.rbegin(), desc.rend());
  return seq;
}

/// Orders m_0 < ... < m_L, cycle index and smoothing counts.
struct CyclePlan {
  std::vector<int> orders;
  int gamma = 1;
  int s1 = 2;
  int s2 = 2;
  int s3 = 10;

  int levels() const { return static_cast<int>(orders.size()); }

  void validate() const {
    if (orders.empty()) throw std::invalid_argument("CyclePlan: no levels");
    if (orders.front() < 2) throw std::invalid_argument("CyclePlan: lowest order must be >= 2");
    for (std::size_t k = 1; k < orders.size(); ++k)
      if (orders[k] <= orders[k - 1]) throw std::invalid_argument("CyclePlan: orders must increase strictly");
    if (gamma < 1) throw std::invalid_argument("CyclePlan: gamma must be >= 1");
    if (s1 < 0 || s2 < 0 || s3 < 0) throw std::invalid_argument("CyclePlan: negative smoothing count");
  }
};

/// Truncation to order m; the expansion centre is unchanged.
inline MomentState restrict_state(const MomentState& fine, int m) {
  if (m < 2 || m > fine.order) throw std::invalid_argument("restrict_state: need 2 <= m <= M");
  return MomentState{m, fine.basis, truncate_coeffs(fine.coeffs, m)};
}

inline Coeffs restrict_residual(std::span<const double> fine_res, int m) { return truncate_coeffs(fine_res, m); }

inline Field restrict_field(const Field& fine, int m) {
  Field coarse;
  coarse.order = m;
  coarse.cells.reserve(fine.cells.size());
  for (const auto& c : fine.cells) coarse.cells.push_back(restrict_state(c, m));
  return coarse;
}

/// Forcing of the lower-order problem:
/// r_m = R_m(restricted state) + truncated (r_M - R_M(fine)), per cell in the
/// restricted state's basis.
inline Rhs coarse_rhs(const Field& fine, const Rhs* fine_rhs, const Field& coarse_initial, const Problem& prob) {
  Rhs out(static_cast<std::size_t>(fine.size()));
  const std::vector<Coeffs> coarse_op = residual_operator(coarse_initial, prob);
  for (int i = 0; i < fine.size(); ++i) {
    const Coeffs defect = cell_residual(fine, prob, i, fine_rhs);
    Coeffs r = restrict_residual(defect, coarse_initial.order);
    const Coeffs& op = coarse_op[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += op[k];
    out[static_cast<std::size_t>(i)] = RhsEntry{coarse_initial[i].basis, std::move(r)};
  }
  return out;
}

/// Fine state plus the prolongated lower-order correction.
///
/// The correction coarse_new - coarse_old is formed in coarse_new's basis and
/// zero-padded to order M. The new centre comes from the summed conserved
/// moments; both parts are moved there, added and re-admissibilized.
/// Returns false (fine left untouched) if the density or temperature of the
/// corrected state would be non-positive.
inline bool prolong_correction(MomentState& fine, const MomentState& coarse_new, const MomentState& coarse_old) {
  const int order = fine.order;
  const int m = coarse_new.order;
  Coeffs delta = change_basis(coarse_old.coeffs, m, coarse_old.basis, coarse_new.basis);
  for (std::size_t k = 0; k < delta.size(); ++k) delta[k] = coarse_new.coeffs[k] - delta[k];
  delta = pad_coeffs(delta, order);

  const ConservedMoments a = conserved_moments(fine.coeffs, fine.basis);
  const ConservedMoments b = conserved_moments(delta, coarse_new.basis);
  ConservedMoments sum;
  sum.mass = a.mass + b.mass;
  for (std::size_t d = 0; d < 3; ++d) sum.momentum[d] = a.momentum[d] + b.momentum[d];
  sum.energy = a.energy + b.energy;

  try {
    const Basis target = macros_from_conserved(sum);
    Coeffs total = change_basis(fine.coeffs, order, fine.basis, target);
    change_basis_inplace(delta, order, coarse_new.basis, target);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += delta[k];
    fine = recover_macros(std::move(total), order, target);
  } catch (const PositivityError&) {
    return false;
  }
  return true;
}

struct CycleStats {
  std::vector<long> coarse_solves;  // calls into each level from the level above
  long rejected_corrections = 0;
  SmootherStats smoother;
};

/// One NMLM iteration at `level` of the plan (level 0 is the lowest order).
inline void nmlm_cycle(int level, Field& field, const Rhs* rhs, const CyclePlan& plan, const Problem& prob,
                       const SmootherConfig& cfg, double target_mass, CycleStats* stats = nullptr) {
  if (field.order != plan.orders[static_cast<std::size_t>(level)])
    throw std::invalid_argument("nmlm_cycle: field order does not match plan level");
  SmootherStats* sstats = stats != nullptr ? &stats->smoother : nullptr;
  if (level == 0) {
    smooth(field, plan.s3, prob, cfg, target_mass, rhs, sstats);
    return;
  }
  smooth(field, plan.s1, prob, cfg, target_mass, rhs, sstats);

  const int m = plan.orders[static_cast<std::size_t>(level - 1)];
  const Field coarse_old = restrict_field(field, m);
  const Rhs r_coarse = coarse_rhs(field, rhs, coarse_old, prob);
  Field coarse = coarse_old;
  for (int g = 0; g < plan.gamma; ++g) {
    if (stats != nullptr) {
      if (stats->coarse_solves.size() < plan.orders.size()) stats->coarse_solves.resize(plan.orders.size(), 0);
      ++stats->coarse_solves[static_cast<std::size_t>(level - 1)];
    }
    nmlm_cycle(level - 1, coarse, &r_coarse, plan, prob, cfg, target_mass, stats);
  }
  for (int i = 0; i < field.size(); ++i) {
    if (!prolong_correction(field[i], coarse[i], coarse_old[i]) && stats != nullptr) ++stats->rejected_corrections;
  }

  smooth(field, plan.s2, prob, cfg, target_mass, rhs, sstats);
}

struct ConvergenceRecord {
  int iteration = 0;
  double residual = 0.0;
  double wall_seconds = 0.0;
};

enum class SolveStatus { Converged, MaxIterations, Diverged, Failed };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIterations:
      return "max_iters";
    case SolveStatus::Diverged:
      return "diverged";
    case SolveStatus::Failed:
      return "failed";
  }
  return "?";
}

struct SolveOptions {
  double tol = 1e-8;
  int max_iters = 100000;
  int norm_cap = kTruncatedNormCap;
};

struct SolveResult {
  Field field;
  std::vector<ConvergenceRecord> history;  // entry 0 is the initial residual
  SolveStatus status = SolveStatus::MaxIterations;
  std::string message;
  CycleStats stats;
  double target_mass = 0.0;

  int iterations() const { return history.empty() ? 0 : history.back().iteration; }
  double seconds() const { return history.empty() ? 0.0 : history.back().wall_seconds; }
  bool converged() const { return status == SolveStatus::Converged; }
};

/// Repeats top-level NMLM iterations until the global residual of the
/// unforced top-order problem drops to tol. With a single level an
/// iteration is one SGS-Richardson sweep. Positivity failures end the solve
/// with status Failed; the field reached so far is returned.
template <class Observer>
SolveResult solve(const Problem& prob, Field initial, const CyclePlan& plan, const SmootherConfig& cfg,
                  const SolveOptions& opt, Observer&& observe) {
  plan.validate();
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
  if (initial.order != plan.orders.back()) throw std::invalid_argument("solve: field order must equal top order");

  SolveResult out;
  out.target_mass = total_mass(initial, prob.grid);
  out.field = std::move(initial);
  out.stats.coarse_solves.assign(plan.orders.size(), 0);
  const int top = plan.levels() - 1;

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  double res = global_residual(out.field, prob, nullptr, opt.norm_cap);
  out.history.push_back({0, res, 0.0});
  observe(out.history.back(), out.field);

  int k = 0;
  while (true) {
    if (!std::isfinite(res)) {
      out.status = SolveStatus::Diverged;
      break;
    }
    if (res <= opt.tol) {
      out.status = SolveStatus::Converged;
      break;
    }
    if (k >= opt.max_iters) {
      out.status = SolveStatus::MaxIterations;
      break;
    }
    try {
      if (top == 0)
        smooth(out.field, 1, prob, cfg, out.target_mass, nullptr, &out.stats.smoother);
      else
        nmlm_cycle(top, out.field, nullptr, plan, prob, cfg, out.target_mass, &out.stats);
      res = global_residual(out.field, prob, nullptr, opt.norm_cap);
    } catch (const std::runtime_error& e) {
      out.status = SolveStatus::Failed;
      out.message = e.what();
      break;
    }
    ++k;
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    out.history.push_back({k, res, secs});
    observe(out.history.back(), out.field);
  }
  return out;
}

inline SolveResult solve(const Problem& prob, Field initial, const CyclePlan& plan, const SmootherConfig& cfg,
                         const SolveOptions& opt) {
  return solve(prob, std::move(initial), plan, cfg, opt, [](const ConvergenceRecord&, const Field&) {});
}

/// Least-squares slope of log residual per iteration over the last
/// `tail_fraction` of the history, as a per-iteration reduction factor.
inline double convergence_factor(const std::vector<ConvergenceRecord>& history, double tail_fraction = 0.5) {
  if (history.size() < 3) return 0.0;
  const auto n = history.size();
  auto first = static_cast<std::size_t>(static_cast<double>(n - 1) * (1.0 - tail_fraction));
  first = std::min(first, n - 3);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double cnt = 0;
  for (std::size_t k = first; k < n; ++k) {
    const double x = history[k].iteration;
    const double y = std::log(history[k].residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return std::exp(slope);
}

}  // namespace nmlm
