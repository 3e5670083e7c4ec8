#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "esclab/cost.hpp"
#include "esclab/integrate.hpp"
#include "esclab/types.hpp"

namespace esclab {

/// Central-difference Jacobian, column by column.
Mat linearize(const std::function<Vec(const Vec&)>& field, const Vec& x_star,
              double h = 1e-4);

/// Eigenvalues sorted by real part descending, then imaginary part descending.
std::vector<std::complex<double>> spectrum(const Mat& M);

/// Supremum of the state norm over the trailing `tail_fraction` of the
/// recorded horizon; +infinity for divergent trajectories.
double ultimate_bound(const Trajectory& traj, double tail_fraction = 0.2);

/// Last recorded time with ||x(t)|| >= radius (t0 if never), and first
/// recorded time with ||x(t)|| < radius (NaN if never).
double last_exit_time(const Trajectory& traj, double radius);
double first_entry_time(const Trajectory& traj, double radius);

/// Finite stand-in for the ball B_radius: `ring` points on the boundary
/// circle of each consecutive coordinate pair plus `interior` seeded-random
/// points inside it.
struct InitialConditionSet {
  int ring = 16;
  int interior = 16;
  double radius = 1.0;
  std::uint64_t seed = 20240817;
};

std::vector<Vec> sample_initial_conditions(int dim,
                                           const InitialConditionSet& ics);

/// Realization of "for all t in [t0, inf)" as a finite horizon. When `fixed`
/// is positive it is used directly; otherwise max(50/(k b1 c2^2), 100) when
/// growth bounds are available, else `fallback`. Callers feed the result into
/// their CellIntegratorPolicy.
struct HorizonPolicy {
  double fixed = 0.0;
  std::optional<GrowthBounds> growth;
  double fallback = 100.0;
  double horizon(double k, double c2) const;
};

struct StabilityQuery {
  double c1 = 1.0;
  double c2 = 1.0;
  std::vector<double> a_grid;      // descending
  std::vector<double> omega_grid;  // descending; searched smallest-first
  InitialConditionSet ics;  // certify overrides the radius with c1
  double tail_fraction = 0.2;
  double spot_check_fraction = 0.1;  // forward-invariance extension
  int jobs = 1;
};

enum class CertifyMode { PS, PB, DeltaPUA };
CertifyMode parse_certify_mode(const std::string& name);
std::string certify_mode_name(CertifyMode mode);

struct CellOutcome {
  double a = 0.0;
  double omega = 0.0;  // 0 for average-system sweeps
  Vec x0;
  double max_norm = 0.0;  // sup over the whole horizon
  double bound = 0.0;     // tail supremum
  double entered_at = std::numeric_limits<double>::quiet_NaN();
  double last_exit = 0.0;
  bool diverged = false;
  bool satisfied = false;
};

struct Thresholds {
  std::optional<double> a_star;
  std::optional<double> omega_star;
  std::optional<double> T;
};

struct StabilityReport {
  double c1 = 0.0, c2 = 0.0;
  std::string mode;
  std::vector<double> a_grid, omega_grid;
  std::vector<CellOutcome> cells;
  Thresholds thresholds;
  bool verdict = false;
  // Per-a maximum ultimate bound and the gamma(a) cap, in a-grid order.
  std::vector<double> max_bounds;
  std::vector<double> gamma_caps;
  std::string note;
};

using SystemFamilyA = std::function<OdeSystem(double a)>;
using SystemFamilyAW = std::function<OdeSystem(double a, double omega)>;
/// Per-cell integrator settings (step, horizon, stride).
using CellIntegratorPolicy =
    std::function<IntegratorConfig(double a, double omega)>;

/// Integrates the a-family from the initial-condition set for each a in the
/// descending grid and records ultimate bounds. Verdict requires the per-a
/// max bound to be nonincreasing along the grid and, when growth bounds are
/// given, every bound <= gamma(a). Divergence is recorded, not fatal.
StabilityReport sgpas_sweep(const SystemFamilyA& family,
                            const StabilityQuery& query,
                            const CellIntegratorPolicy& policy,
                            const std::optional<GrowthBounds>& gb = {});

struct GapEntry {
  double omega = 0.0;
  double gap = 0.0;  // +infinity when either trajectory diverged
  bool diverged = false;
};

struct ClosenessResult {
  std::vector<GapEntry> gaps;  // ascending omega
  std::optional<double> omega_star;  // smallest grid omega with gap < delta
};

struct ClosenessConfig {
  EscParams params;
  EscAlgorithm algorithm = EscAlgorithm::GescModelFree;
  int samples = 2000;       // comparison grid resolution
  int steps_per_cycle = 40;
  double average_step = 1e-3;
  std::optional<double> delta;  // closeness target for omega_star
  QuadratureConfig quad{.points_per_period = 64, .refine = false};
};

/// Max gap over a common sample grid between the model-free trajectory at
/// each omega and the average trajectory from the same initial condition.
ClosenessResult closeness_experiment(const CostFunction& cost,
                                     const DitherSpec& base_spec,
                                     const std::vector<double>& omega_grid,
                                     const Vec& x0, double T,
                                     const ClosenessConfig& cfg);

/// Searches the (a, omega) grid in the nested order of the practical
/// stability definitions: a outer (descending), omega inner (ascending).
/// A cell certifies when every sampled initial condition satisfies the
/// queried implication; the first certifying cell provides the thresholds.
/// With `exhaustive` the whole grid is evaluated regardless.
StabilityReport certify_practical_stability(const SystemFamilyAW& family,
                                            const StabilityQuery& query,
                                            CertifyMode mode,
                                            const CellIntegratorPolicy& policy,
                                            bool exhaustive = false);

}  // namespace esclab
