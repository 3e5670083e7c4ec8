#include "esclab/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace esclab {

Mat linearize(const std::function<Vec(const Vec&)>& field, const Vec& x_star,
              double h) {
  if (h <= 0.0) throw std::invalid_argument("linearize: step must be positive");
  const int n = static_cast<int>(x_star.size());
  Mat J(n, n);
  Vec xp = x_star, xm = x_star;
  for (int i = 0; i < n; ++i) {
    xp[i] = x_star[i] + h;
    xm[i] = x_star[i] - h;
    const Vec fp = field(xp);
    const Vec fm = field(xm);
    if (!fp.allFinite() || !fm.allFinite()) {
      throw std::runtime_error("linearize: non-finite field evaluation");
    }
    J.col(i) = (fp - fm) / (2.0 * h);
    xp[i] = x_star[i];
    xm[i] = x_star[i];
  }
  return J;
}

std::vector<std::complex<double>> spectrum(const Mat& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("spectrum: matrix not square");
  Eigen::EigenSolver<Mat> solver(M);
  std::vector<std::complex<double>> eigs(static_cast<std::size_t>(M.rows()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) eigs[i] = solver.eigenvalues()[i];
  std::sort(eigs.begin(), eigs.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return eigs;
}

double ultimate_bound(const Trajectory& traj, double tail_fraction) {
  if (tail_fraction <= 0.0 || tail_fraction > 1.0) {
    throw std::invalid_argument("ultimate_bound: tail_fraction must be in (0,1]");
  }
  if (traj.diverged) return std::numeric_limits<double>::infinity();
  if (traj.times.empty()) throw std::invalid_argument("ultimate_bound: empty trajectory");
  const double t0 = traj.times.front();
  const double t_tail = t0 + (1.0 - tail_fraction) * (traj.times.back() - t0);
  double bound = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] >= t_tail) bound = std::max(bound, traj.states[i].norm());
  }
  return bound;
}

double last_exit_time(const Trajectory& traj, double radius) {
  double last = traj.times.front();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.states[i].norm() >= radius) last = traj.times[i];
  }
  return last;
}

double first_entry_time(const Trajectory& traj, double radius) {
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.states[i].norm() < radius) return traj.times[i];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<Vec> sample_initial_conditions(int dim,
                                           const InitialConditionSet& ics) {
  if (dim < 1) throw std::invalid_argument("sample_initial_conditions: dim >= 1");
  if (ics.radius <= 0.0) {
    throw std::invalid_argument("sample_initial_conditions: radius must be positive");
  }
  std::vector<Vec> points;
  std::mt19937_64 rng(ics.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p + 1 < dim; p += 2) pairs.emplace_back(p, p + 1);
  if (dim == 1) {
    for (int s : {+1, -1}) {
      Vec x = Vec::Zero(1);
      x[0] = s * ics.radius;
      points.push_back(x);
    }
    for (int i = 0; i < ics.interior; ++i) {
      Vec x = Vec::Zero(1);
      x[0] = (2.0 * uni(rng) - 1.0) * ics.radius;
      points.push_back(x);
    }
    return points;
  }
  if (dim % 2 != 0) pairs.emplace_back(dim - 1, 0);

  for (const auto& [i, j] : pairs) {
    for (int r = 0; r < ics.ring; ++r) {
      const double ang = two_pi * r / ics.ring;
      Vec x = Vec::Zero(dim);
      x[i] = ics.radius * std::cos(ang);
      x[j] = ics.radius * std::sin(ang);
      points.push_back(x);
    }
    for (int r = 0; r < ics.interior; ++r) {
      const double rad = ics.radius * std::sqrt(uni(rng));
      const double ang = two_pi * uni(rng);
      Vec x = Vec::Zero(dim);
      x[i] = rad * std::cos(ang);
      x[j] = rad * std::sin(ang);
      points.push_back(x);
    }
  }
  return points;
}

double HorizonPolicy::horizon(double k, double c2) const {
  if (fixed > 0.0) return fixed;
  if (growth) return std::max(50.0 / (k * growth->b1 * c2 * c2), 100.0);
  return fallback;
}

namespace {

void run_parallel(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& work) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> workers;
  const int n_threads = std::min<std::size_t>(jobs, count);
  workers.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    workers.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          work(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& err : errors) {  // rethrow the lowest-index failure
    if (err) std::rethrow_exception(err);
  }
}

void check_descending(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= 0.0) {
      throw std::invalid_argument(std::string(name) + " grid entries must be positive");
    }
    if (i > 0 && grid[i] >= grid[i - 1]) {
      throw std::invalid_argument(std::string(name) + " grid must be sorted descending");
    }
  }
}

constexpr double kEscapeSlack = 1.01;

struct IcRun {
  CellOutcome cell;
  double spot_max = 0.0;  // sup of the norm over the extension window
  bool escaped_spot_window = false;
};

// Integrates one initial condition over the horizon plus the spot-check
// extension; statistics are taken over the main window, the extension only
// guards against late escape.
IcRun evaluate_ic(const OdeSystem& sys, const Vec& x0,
                  const IntegratorConfig& base_cfg, double a, double omega,
                  double c2, double tail_fraction, double spot_fraction) {
  IntegratorConfig cfg = base_cfg;
  const double T = cfg.t1 - cfg.t0;
  cfg.t1 = cfg.t0 + T * (1.0 + spot_fraction);
  const Trajectory traj = integrate(sys, x0, cfg);

  IcRun run;
  CellOutcome& cell = run.cell;
  cell.a = a;
  cell.omega = omega;
  cell.x0 = x0;
  cell.diverged = traj.diverged;
  if (traj.diverged) {
    cell.bound = std::numeric_limits<double>::infinity();
    cell.max_norm = std::numeric_limits<double>::infinity();
    cell.last_exit = traj.divergence_time;
    return run;
  }
  const double t_main_end = cfg.t0 + T;
  const double t_tail = cfg.t0 + (1.0 - tail_fraction) * T;
  double max_norm = 0.0, bound = 0.0, spot_max = 0.0;
  double last_exit = cfg.t0;
  double entered = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    const double nrm = traj.states[i].norm();
    if (t <= t_main_end) {
      max_norm = std::max(max_norm, nrm);
      if (t >= t_tail) bound = std::max(bound, nrm);
    } else {
      spot_max = std::max(spot_max, nrm);
    }
    if (c2 > 0.0) {
      if (nrm >= c2) last_exit = t;
      if (nrm < c2 && std::isnan(entered)) entered = t;
    }
  }
  cell.max_norm = max_norm;
  cell.bound = bound;
  cell.entered_at = entered;
  cell.last_exit = last_exit;
  run.spot_max = spot_max;
  run.escaped_spot_window = spot_max > bound * kEscapeSlack + 1e-300;
  return run;
}

}  // namespace

StabilityReport sgpas_sweep(const SystemFamilyA& family,
                            const StabilityQuery& query,
                            const CellIntegratorPolicy& policy,
                            const std::optional<GrowthBounds>& gb) {
  check_descending(query.a_grid, "a");
  StabilityReport report;
  report.c1 = query.c1;
  report.c2 = query.c2;
  report.mode = "sgpas-sweep";
  report.a_grid = query.a_grid;
  report.note =
      "empirical certificate from finitely many initial conditions and a "
      "finite horizon; evidence, not proof";

  const int dim = family(query.a_grid.front()).dim;
  const std::vector<Vec> x0s = sample_initial_conditions(dim, query.ics);

  bool all_satisfied = true;
  for (double a : query.a_grid) {
    const IntegratorConfig cfg = policy(a, 0.0);
    std::vector<IcRun> runs(x0s.size());
    run_parallel(x0s.size(), query.jobs, [&](std::size_t i) {
      const OdeSystem sys = family(a);
      runs[i] = evaluate_ic(sys, x0s[i], cfg, a, 0.0, query.c2,
                            query.tail_fraction, query.spot_check_fraction);
    });
    double max_bound = 0.0;
    for (auto& run : runs) {
      run.cell.satisfied = !run.cell.diverged && !run.escaped_spot_window;
      all_satisfied = all_satisfied && run.cell.satisfied;
      max_bound = std::max(max_bound, run.cell.bound);
      report.cells.push_back(run.cell);
    }
    report.max_bounds.push_back(max_bound);
    report.gamma_caps.push_back(gb ? ultimate_bound_gain(*gb, a)
                                   : std::numeric_limits<double>::quiet_NaN());
  }

  bool monotone = true;
  for (std::size_t i = 1; i < report.max_bounds.size(); ++i) {
    if (report.max_bounds[i] > report.max_bounds[i - 1] * (1.0 + 1e-12)) {
      monotone = false;
    }
  }
  bool capped = true;
  if (gb) {
    for (std::size_t i = 0; i < report.max_bounds.size(); ++i) {
      if (!(report.max_bounds[i] <= report.gamma_caps[i])) capped = false;
    }
  }
  report.verdict = all_satisfied && monotone && capped;
  return report;
}

ClosenessResult closeness_experiment(const CostFunction& cost,
                                     const DitherSpec& base_spec,
                                     const std::vector<double>& omega_grid,
                                     const Vec& x0, double T,
                                     const ClosenessConfig& cfg) {
  if (omega_grid.empty()) throw std::invalid_argument("closeness: empty omega grid");
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    if (omega_grid[i] <= 0.0) throw std::invalid_argument("closeness: omega must be positive");
    if (i > 0 && omega_grid[i] <= omega_grid[i - 1]) {
      throw std::invalid_argument("closeness: omega grid must be ascending");
    }
  }
  const int samples = std::max(16, cfg.samples);
  const double dt_out = T / samples;

  // Reference trajectory once, sampled exactly on the comparison grid. For an
  // autonomous algorithm the reference is the system itself, so the gap is
  // identically zero; this degenerate case checks the sampling alignment.
  const bool model_free = is_model_free(cfg.algorithm);
  const OdeSystem avg_sys = make_esc_system(
      model_free ? average_counterpart(cfg.algorithm) : cfg.algorithm, cost,
      base_spec, cfg.params, cfg.quad);
  IntegratorConfig avg_cfg;
  const int sub_avg = std::max(1, static_cast<int>(std::ceil(dt_out / cfg.average_step - 1e-12)));
  avg_cfg.step = dt_out / sub_avg;
  avg_cfg.record_stride = sub_avg;
  avg_cfg.t0 = 0.0;
  avg_cfg.t1 = T;
  const Trajectory avg = integrate(avg_sys, x0, avg_cfg);

  ClosenessResult result;
  for (double omega : omega_grid) {
    DitherSpec spec = base_spec;
    spec.base_frequency = omega;
    const OdeSystem sys =
        make_esc_system(cfg.algorithm, cost, spec, cfg.params, cfg.quad);
    const double h = model_free ? auto_step(omega, spec.rates, cfg.steps_per_cycle)
                                : cfg.average_step;
    const int sub = std::max(1, static_cast<int>(std::ceil(dt_out / h - 1e-12)));
    IntegratorConfig mf_cfg;
    mf_cfg.step = dt_out / sub;
    mf_cfg.record_stride = sub;
    mf_cfg.t0 = 0.0;
    mf_cfg.t1 = T;
    const Trajectory mf = integrate(sys, x0, mf_cfg);

    GapEntry entry;
    entry.omega = omega;
    if (mf.diverged || avg.diverged) {
      entry.diverged = true;
      entry.gap = std::numeric_limits<double>::infinity();
    } else {
      const std::size_t m = std::min(mf.size(), avg.size());
      double gap = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        gap = std::max(gap, (mf.states[i] - avg.states[i]).norm());
      }
      entry.gap = gap;
    }
    result.gaps.push_back(entry);
  }
  if (cfg.delta) {
    for (const auto& g : result.gaps) {
      if (!g.diverged && g.gap < *cfg.delta) {
        result.omega_star = g.omega;
        break;
      }
    }
  }
  return result;
}

CertifyMode parse_certify_mode(const std::string& name) {
  if (name == "ps") return CertifyMode::PS;
  if (name == "pb") return CertifyMode::PB;
  if (name == "delta-pua" || name == "dpua") return CertifyMode::DeltaPUA;
  throw std::invalid_argument("unknown certify mode: " + name);
}

std::string certify_mode_name(CertifyMode mode) {
  switch (mode) {
    case CertifyMode::PS: return "ps";
    case CertifyMode::PB: return "pb";
    case CertifyMode::DeltaPUA: return "delta-pua";
  }
  return "?";
}

StabilityReport certify_practical_stability(const SystemFamilyAW& family,
                                            const StabilityQuery& query,
                                            CertifyMode mode,
                                            const CellIntegratorPolicy& policy,
                                            bool exhaustive) {
  if (query.c2 <= 0.0) {
    throw std::invalid_argument("certify: practical stability needs c2 > 0");
  }
  if (query.c1 <= 0.0) throw std::invalid_argument("certify: c1 must be positive");
  check_descending(query.a_grid, "a");
  check_descending(query.omega_grid, "omega");

  StabilityReport report;
  report.c1 = query.c1;
  report.c2 = query.c2;
  report.mode = certify_mode_name(mode);
  report.a_grid = query.a_grid;
  report.omega_grid = query.omega_grid;
  report.note =
      "grid searched a descending then omega ascending, matching the nested "
      "thresholds of the definitions; finite-sample evidence, not proof";

  InitialConditionSet ics = query.ics;
  ics.radius = query.c1 * (1.0 - 1e-9);  // strictly inside the open ball
  const int dim =
      family(query.a_grid.front(), query.omega_grid.front()).dim;
  const std::vector<Vec> x0s = sample_initial_conditions(dim, ics);

  bool found = false;
  for (double a : query.a_grid) {
    for (auto it = query.omega_grid.rbegin(); it != query.omega_grid.rend(); ++it) {
      const double omega = *it;
      const IntegratorConfig cfg = policy(a, omega);
      const double T = cfg.t1 - cfg.t0;
      std::vector<IcRun> runs(x0s.size());
      run_parallel(x0s.size(), query.jobs, [&](std::size_t i) {
        const OdeSystem sys = family(a, omega);
        runs[i] = evaluate_ic(sys, x0s[i], cfg, a, omega, query.c2,
                              query.tail_fraction, query.spot_check_fraction);
      });
      bool cell_ok = true;
      double cell_T = 0.0;
      for (auto& run : runs) {
        CellOutcome& cell = run.cell;
        if (cell.diverged) {
          cell.satisfied = false;
        } else if (mode == CertifyMode::PS || mode == CertifyMode::PB) {
          cell.satisfied = cell.max_norm < query.c2 && run.spot_max < query.c2;
        } else {
          // delta-PUA: the trajectory must have settled inside B_c2 no later
          // than half the horizon, leaving a real tail of evidence.
          cell.satisfied = (cell.last_exit - cfg.t0) <= 0.5 * T;
        }
        cell_ok = cell_ok && cell.satisfied;
        cell_T = std::max(cell_T, cell.last_exit - cfg.t0);
        report.cells.push_back(cell);
      }
      if (cell_ok && !found) {
        found = true;
        report.thresholds.a_star = a;
        report.thresholds.omega_star = omega;
        report.thresholds.T = (mode == CertifyMode::DeltaPUA) ? cell_T : 0.0;
      }
      if (found && !exhaustive) break;
    }
    if (found && !exhaustive) break;
  }
  report.verdict = found;
  if (!found) {
    // Surface the worst counterexample: the unsatisfied run that stayed
    // outside the target ball the longest (divergence counts as worst).
    const CellOutcome* worst = nullptr;
    for (const auto& cell : report.cells) {
      if (cell.satisfied) continue;
      if (!worst || (cell.diverged && !worst->diverged) ||
          (cell.diverged == worst->diverged && cell.last_exit > worst->last_exit)) {
        worst = &cell;
      }
    }
    if (worst) {
      std::ostringstream note;
      note << "; no certificate: worst counterexample a=" << worst->a
           << " omega=" << worst->omega << " x0=(";
      for (Eigen::Index i = 0; i < worst->x0.size(); ++i) {
        note << (i ? "," : "") << worst->x0[i];
      }
      note << ") " << (worst->diverged ? "diverged" : "last outside B_c2")
           << " at t=" << worst->last_exit;
      report.note += note.str();
    }
  }
  return report;
}

}  // namespace esclab
