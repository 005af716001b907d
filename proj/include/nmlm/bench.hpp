#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "nmlm/scenario.hpp"

namespace nmlm {

namespace fs = std::filesystem;

enum ExitStatus : int { kExitConverged = 0, kExitError = 1, kExitNotConverged = 2 };

struct RunSummary {
  std::string label;
  int cells = 0;
  int order = 0;
  int levels = 0;
  std::string strategy;
  std::vector<int> orders;
  int iterations = 0;
  double seconds = 0.0;
  double k_ratio = 0.0;  // K_s / K, 0 if no baseline
  double t_ratio = 0.0;
  std::string status;
  std::string message;
};

/// Per-cell quantities written to profile.csv.
struct ProfileRow {
  double x, rho, theta, u2, stress, heat;
};

inline std::vector<ProfileRow> profile_rows(const Field& field, const Grid1D& grid, ScenarioKind kind) {
  std::vector<ProfileRow> rows;
  rows.reserve(static_cast<std::size_t>(field.size()));
  for (int i = 0; i < field.size(); ++i) {
    const DerivedMoments dm = derived_moments(field[i]);
    const bool couette = kind == ScenarioKind::Couette;
    rows.push_back({grid.center(i), dm.rho, dm.theta, dm.u[1], couette ? dm.sigma[0][1] : dm.sigma[0][0],
                    couette ? dm.q[0] : dm.q[1]});
  }
  return rows;
}

inline void write_profile(const fs::path& path, const Field& field, const Grid1D& grid, ScenarioKind kind) {
  std::ofstream out(path);
  out << std::setprecision(17);
  out << (kind == ScenarioKind::Couette ? "x,rho,theta,u2,sigma12,q1\n" : "x,rho,theta,u2,sigma11,q2\n");
  for (const auto& r : profile_rows(field, grid, kind))
    out << r.x << ',' << r.rho << ',' << r.theta << ',' << r.u2 << ',' << r.stress << ',' << r.heat << '\n';
}

inline void write_history(const fs::path& path, const std::vector<ConvergenceRecord>& history) {
  std::ofstream out(path);
  out << std::setprecision(17);
  out << "iteration,residual,wall_seconds\n";
  for (const auto& h : history) out << h.iteration << ',' << h.residual << ',' << h.wall_seconds << '\n';
}

inline void write_summary_header(std::ostream& out) {
  out << "label,N,M,levels,strategy,orders,K,T,Ks_over_K,Ts_over_T,status\n";
}

inline void write_summary_row(std::ostream& out, const RunSummary& s) {
  out << std::setprecision(10);
  out << s.label << ',' << s.cells << ',' << s.order << ',' << s.levels << ',' << s.strategy << ',';
  for (std::size_t k = 0; k < s.orders.size(); ++k) out << (k ? " " : "") << s.orders[k];
  out << ',' << s.iterations << ',' << s.seconds << ',';
  if (s.k_ratio > 0.0) out << s.k_ratio;
  out << ',';
  if (s.t_ratio > 0.0) out << s.t_ratio;
  out << ',' << s.status << '\n';
}

/// Solves one configuration, writing history.csv and profile.csv into dir.
inline RunSummary run_single(const ScenarioConfig& cfg, int levels, const fs::path& dir) {
  fs::create_directories(dir);
  RunSummary s;
  s.cells = cfg.cells;
  s.order = cfg.order;
  s.strategy = levels > 1 ? to_string(cfg.strategy) : "-";
  const CyclePlan plan = cfg.plan(levels);
  s.orders = plan.orders;
  s.levels = plan.levels();
  s.label = cfg.name;

  const Problem prob = cfg.problem();
  std::ofstream hist;
  if (cfg.write_history) {
    hist.open(dir / "history.csv");
    hist << std::setprecision(17) << "iteration,residual,wall_seconds\n";
  }
  // History rows are flushed as they come so a failed run keeps them.
  SolveResult res = solve(prob, cfg.initial_field(), plan, cfg.smoother(), cfg.solve_options(),
                          [&](const ConvergenceRecord& r, const Field&) {
                            if (hist.is_open())
                              hist << r.iteration << ',' << r.residual << ',' << r.wall_seconds << '\n';
                          });
  if (cfg.write_profile) write_profile(dir / "profile.csv", res.field, prob.grid, cfg.kind);
  s.iterations = res.iterations();
  s.seconds = res.seconds();
  s.status = to_string(res.status);
  s.message = res.message;
  return s;
}

inline int exit_status(const RunSummary& s) {
  if (s.status == "converged") return kExitConverged;
  if (s.status == "failed") return kExitError;
  return kExitNotConverged;
}

/// Runs cfg (and the 1-level baseline when requested) and writes
/// history.csv, profile.csv and summary.csv under out_dir.
inline int run_benchmark(const ScenarioConfig& cfg, const fs::path& out_dir, std::ostream& log = std::cerr) {
  try {
    cfg.validate();
    fs::create_directories(out_dir);
    const OrderSequence seq = order_sequence(cfg.order, cfg.strategy, cfg.levels);
    if (seq.truncated)
      log << "warning: only " << seq.orders.size() << " of " << cfg.levels << " levels reachable with strategy "
          << to_string(cfg.strategy) << "\n";

    RunSummary main = run_single(cfg, cfg.levels, out_dir);
    std::vector<RunSummary> rows;
    if (cfg.baseline && main.levels > 1) {
      RunSummary base = run_single(cfg, 1, out_dir / "baseline");
      base.k_ratio = 1.0;
      base.t_ratio = 1.0;
      if (base.status == "converged" && main.status == "converged") {
        main.k_ratio = static_cast<double>(base.iterations) / std::max(1, main.iterations);
        main.t_ratio = main.seconds > 0.0 ? base.seconds / main.seconds : 0.0;
      }
      rows.push_back(base);
    } else if (main.levels == 1) {
      main.k_ratio = 1.0;
      main.t_ratio = 1.0;
    }
    rows.push_back(main);

    std::ofstream sum(out_dir / "summary.csv");
    write_summary_header(sum);
    for (const auto& r : rows) write_summary_row(sum, r);

    log << cfg.name << ": " << main.status << " after K = " << main.iterations << " iterations, T = " << main.seconds
        << " s\n";
    if (!main.message.empty()) log << "  " << main.message << "\n";
    return exit_status(main);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitError;
  }
}

struct MatrixSpec {
  std::vector<int> cells;
  std::vector<int> orders;
  std::vector<ReductionStrategy> strategies;
  std::vector<int> levels;  // a 1-level baseline is always added
  int workers = 1;
};

/// All combinations of the sweep, each in its own directory, dispatched to a
/// pool of worker threads. Failed runs are recorded and the matrix continues.
inline std::vector<RunSummary> run_matrix(const ScenarioConfig& base, const MatrixSpec& spec, const fs::path& out_dir,
                                          std::ostream& log = std::cerr) {
  if (spec.cells.empty() || spec.orders.empty() || spec.levels.empty())
    throw ConfigError("matrix sweep lists must be non-empty");
  struct Job {
    ScenarioConfig cfg;
    int levels;
    fs::path dir;
  };
  std::vector<Job> jobs;
  for (int n : spec.cells)
    for (int m : spec.orders) {
      ScenarioConfig c = base;
      c.cells = n;
      c.order = m;
      c.validate();
      const std::string tag = "N" + std::to_string(n) + "_M" + std::to_string(m);
      jobs.push_back({c, 1, out_dir / (tag + "_L1")});
      for (auto st : spec.strategies)
        for (int lv : spec.levels) {
          if (lv <= 1) continue;
          ScenarioConfig cs = c;
          cs.strategy = st;
          jobs.push_back({cs, lv, out_dir / (tag + "_L" + std::to_string(lv) + "_" + to_string(st))});
        }
    }

  std::vector<RunSummary> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      RunSummary s;
      try {
        s = run_single(job.cfg, job.levels, job.dir);
      } catch (const std::exception& e) {
        s.cells = job.cfg.cells;
        s.order = job.cfg.order;
        s.levels = job.levels;
        s.strategy = job.levels > 1 ? to_string(job.cfg.strategy) : "-";
        s.status = "failed";
        s.message = e.what();
      }
      s.label = job.dir.filename().string();
      std::lock_guard lock(log_mutex);
      log << s.label << ": " << s.status << " K = " << s.iterations << "\n";
      results[j] = std::move(s);
    }
  };
  const int nw = std::max(1, spec.workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Speedups against the 1-level run of the same (N, M).
  for (auto& r : results) {
    for (const auto& b : results) {
      if (b.levels != 1 || b.cells != r.cells || b.order != r.order) continue;
      if (b.status == "converged" && r.status == "converged") {
        r.k_ratio = static_cast<double>(b.iterations) / std::max(1, r.iterations);
        r.t_ratio = r.seconds > 0.0 ? b.seconds / r.seconds : 0.0;
      }
    }
  }
  fs::create_directories(out_dir);
  std::ofstream sum(out_dir / "summary.csv");
  write_summary_header(sum);
  for (const auto& r : results) write_summary_row(sum, r);
  return results;
}

}  // namespace nmlm
