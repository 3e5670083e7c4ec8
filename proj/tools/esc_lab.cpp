// esc-lab: command-line front end for the extremum seeking toolkit.
//
// Subcommands: validate-dither, simulate, average, linearize, spectrum,
// sweep-a, closeness, certify, plot. Reports are JSON, trajectories CSV,
// plots SVG; all file output is written atomically.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "esclab/cost.hpp"
#include "esclab/dither.hpp"
#include "esclab/esc_systems.hpp"
#include "esclab/integrate.hpp"
#include "esclab/matrix_calculus.hpp"
#include "esclab/report_io.hpp"
#include "esclab/stability.hpp"
#include "esclab/svg.hpp"

namespace {

using esclab::Mat;
using esclab::Vec;
using nlohmann::json;

struct DivergenceExit {
  std::string message;
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list: " + s);
  return out;
}

Vec parse_real_list(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) vals.push_back(std::stod(item));
  }
  if (vals.empty()) throw std::invalid_argument("empty number list: " + s);
  Vec v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

std::vector<double> parse_grid(const std::string& s) {
  const Vec v = parse_real_list(s);
  return {v.data(), v.data() + v.size()};
}

Mat parse_matrix_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix JSON must be a 2-D array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Mat M(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) M(r, c) = j[r][c].get<double>();
  }
  return M;
}

json matrix_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << "\n";
  } else {
    esclab::atomic_write_file(out_path, content);
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ESC_LAB_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 20240817ULL;
}

// Shared experiment options; each subcommand registers the flags it uses.
struct Options {
  std::string cost_id = "quartic2d";
  std::string Q_json;
  int dim = 2;
  std::string algo = "gesc";
  std::string rates = "1,3";
  std::string ramp = "1,1";
  double a = 0.1;
  double omega = 1000.0;
  double k = 1.0;
  double omega_l = 1.0;
  std::string x0 = "1,1";
  std::string gamma0;  // vech entries for the NESC inverse-Hessian estimate
  double T = 10.0;
  double step = 0.0;  // 0 = auto
  int steps_per_cycle = 40;
  int stride = 1;
  std::string order = "first";
  std::string at = "0,0";
  double fd_step = 1e-4;
  int quad_points = 64;
  double quad_tol = 1e-10;
  bool quad_no_refine = false;
  std::string out;
  std::uint64_t seed = default_seed();
  int jobs = 1;
  // lab queries
  double c1 = 2.0, c2 = 0.5;
  std::string a_grid = "0.5,0.1,0.02";
  std::string omega_grid = "100,1000,10000";
  double horizon = 0.0;  // 0 = policy default
  double tail = 0.2;
  std::string mode = "delta-pua";
  bool exhaustive = false;
  double delta = 0.05;
  int samples = 2000;
  // plot
  std::string plot_mode = "stream";
  double extent = 1.0;
  std::string matrix_json_text;
};

esclab::CostFunction make_cost(const Options& opt) {
  std::optional<Mat> Q;
  if (!opt.Q_json.empty()) Q = parse_matrix_json(opt.Q_json);
  return esclab::builtin_cost(opt.cost_id, Q, opt.dim);
}

esclab::RateOrder order_for(const Options& opt, esclab::EscAlgorithm algo) {
  if (esclab::is_newton(algo)) return esclab::RateOrder::Second;
  return esclab::parse_rate_order(opt.order);
}

esclab::DitherSpec make_spec(const Options& opt, esclab::EscAlgorithm algo,
                             double omega_override = 0.0) {
  const double omega = omega_override > 0.0 ? omega_override : opt.omega;
  return esclab::make_dither_spec(parse_int_list(opt.rates),
                                  parse_real_list(opt.ramp), opt.a, omega,
                                  order_for(opt, algo));
}

esclab::QuadratureConfig make_quad(const Options& opt) {
  esclab::QuadratureConfig q;
  q.points_per_period = opt.quad_points;
  q.tol = opt.quad_tol;
  q.refine = !opt.quad_no_refine;
  return q;
}

Vec initial_state(const Options& opt, esclab::EscAlgorithm algo,
                  const esclab::CostFunction& cost) {
  const Vec theta0 = parse_real_list(opt.x0);
  if (theta0.size() != cost.dim) {
    throw std::invalid_argument("x0 dimension does not match the cost");
  }
  if (!esclab::is_newton(algo)) return theta0;
  Mat gamma0 = Mat::Identity(cost.dim, cost.dim);
  if (!opt.gamma0.empty()) gamma0 = esclab::unvech(parse_real_list(opt.gamma0));
  if (esclab::is_log_chart(algo)) {
    return esclab::pack_nesc_state(theta0, esclab::log_spd(gamma0));
  }
  return esclab::pack_nesc_state(theta0, gamma0);
}

double pick_step(const Options& opt, esclab::EscAlgorithm algo,
                 const esclab::DitherSpec& spec) {
  if (opt.step > 0.0) return opt.step;
  if (esclab::is_model_free(algo)) {
    return esclab::auto_step(spec.base_frequency, spec.rates, opt.steps_per_cycle);
  }
  return 1e-3;
}

// Step/horizon policy for quartic average-system sweeps: the dynamics are
// self-similar with time scale 1/a^2, so both shrink accordingly.
esclab::IntegratorConfig quartic_sweep_config(const Options& opt, double a) {
  esclab::IntegratorConfig cfg;
  cfg.step = opt.step > 0.0 ? opt.step : std::clamp(2e-3 / (a * a), 1e-6, 2e-3);
  const double T = opt.horizon > 0.0
                       ? opt.horizon
                       : std::clamp(100.0 / (a * a), 0.05, 400.0);
  cfg.t0 = 0.0;
  cfg.t1 = T;
  const double steps = T / cfg.step;
  cfg.record_stride = std::max(1, static_cast<int>(steps / 20000));
  return cfg;
}

int cmd_validate(const Options& opt) {
  const auto report = esclab::validate_rates(parse_int_list(opt.rates),
                                             esclab::parse_rate_order(opt.order));
  emit(esclab::to_json(report), opt.out);
  return report.valid ? 0 : 1;
}

int cmd_simulate(const Options& opt) {
  const auto algo = esclab::parse_algorithm(opt.algo);
  const auto cost = make_cost(opt);
  const auto spec = make_spec(opt, algo);
  const esclab::EscParams params{opt.k, opt.omega_l};
  const auto sys = esclab::make_esc_system(algo, cost, spec, params, make_quad(opt));
  esclab::IntegratorConfig cfg;
  cfg.step = pick_step(opt, algo, spec);
  cfg.t0 = 0.0;
  cfg.t1 = opt.T;
  cfg.record_stride =
      opt.stride > 1 ? opt.stride
                     : std::max(1, static_cast<int>(opt.T / cfg.step / 20000));
  const auto traj = esclab::integrate(sys, initial_state(opt, algo, cost), cfg);
  emit(esclab::trajectory_csv(traj), opt.out);
  if (traj.diverged) {
    throw DivergenceExit{"trajectory diverged at t=" +
                         std::to_string(traj.divergence_time)};
  }
  return 0;
}

int cmd_average(const Options& opt) {
  auto algo = esclab::parse_algorithm(opt.algo);
  if (esclab::is_model_free(algo)) algo = esclab::average_counterpart(algo);
  const auto cost = make_cost(opt);
  const auto spec = make_spec(opt, algo);
  const esclab::EscParams params{opt.k, opt.omega_l};
  const auto sys = esclab::make_esc_system(algo, cost, spec, params, make_quad(opt));
  const Vec at = parse_real_list(opt.at);
  Vec out(sys.dim);
  sys.rhs(0.0, at, out);
  emit(json{{"algorithm", esclab::algorithm_name(algo)},
            {"at", vector_json(at)},
            {"value", vector_json(out)}}
           .dump(2),
       opt.out);
  return 0;
}

std::pair<Mat, json> linearized_matrix(const Options& opt) {
  const auto algo = esclab::parse_algorithm(opt.algo);
  if (esclab::is_model_free(algo)) {
    throw std::invalid_argument("linearize needs an autonomous (average or model-based) system");
  }
  const auto cost = make_cost(opt);
  const auto spec = make_spec(opt, algo, 1.0);
  const esclab::EscParams params{opt.k, opt.omega_l};
  auto sys = esclab::make_esc_system(algo, cost, spec, params, make_quad(opt));
  const Vec at = parse_real_list(opt.at);
  const Mat J = esclab::linearize(
      [&](const Vec& x) {
        Vec dx(sys.dim);
        sys.rhs(0.0, x, dx);
        return dx;
      },
      at, opt.fd_step);
  json meta{{"algorithm", esclab::algorithm_name(algo)},
            {"at", vector_json(at)},
            {"h", opt.fd_step}};
  return {J, meta};
}

int cmd_linearize(const Options& opt) {
  auto [J, meta] = linearized_matrix(opt);
  meta["jacobian"] = matrix_json(J);
  emit(meta.dump(2), opt.out);
  return 0;
}

int cmd_spectrum(const Options& opt) {
  Mat M;
  json meta;
  if (!opt.matrix_json_text.empty()) {
    M = parse_matrix_json(opt.matrix_json_text);
    meta = json{{"source", "matrix"}};
  } else {
    std::tie(M, meta) = linearized_matrix(opt);
    meta["source"] = "linearize";
  }
  json eigs = json::array();
  for (const auto& ev : esclab::spectrum(M)) {
    eigs.push_back({{"re", ev.real()}, {"im", ev.imag()}});
  }
  meta["eigenvalues"] = eigs;
  emit(meta.dump(2), opt.out);
  return 0;
}

int cmd_sweep(const Options& opt) {
  const auto algo = esclab::parse_algorithm(opt.algo);
  const auto cost = make_cost(opt);
  const esclab::EscParams params{opt.k, opt.omega_l};
  const auto quad = make_quad(opt);

  esclab::StabilityQuery query;
  query.c1 = opt.c1;
  query.c2 = opt.c2;
  query.a_grid = parse_grid(opt.a_grid);
  query.ics.radius = opt.c1;
  query.ics.seed = opt.seed;
  query.tail_fraction = opt.tail;
  query.jobs = opt.jobs;

  std::optional<esclab::GrowthBounds> gb;
  if (cost.homogeneous_degree) gb = esclab::growth_bounds(cost);

  const auto family = [&](double a) {
    Options o = opt;
    o.a = a;
    o.omega = 1.0;
    return esclab::make_esc_system(algo, cost, make_spec(o, algo, 1.0), params, quad);
  };
  const auto report = esclab::sgpas_sweep(
      family, query,
      [&](double a, double) { return quartic_sweep_config(opt, a); }, gb);
  emit(esclab::to_json(report), opt.out);
  return 0;
}

int cmd_closeness(const Options& opt) {
  const auto algo = esclab::parse_algorithm(opt.algo);
  const auto cost = make_cost(opt);
  const auto spec = make_spec(opt, algo);
  esclab::ClosenessConfig cfg;
  cfg.params = {opt.k, opt.omega_l};
  cfg.algorithm = algo;
  cfg.samples = opt.samples;
  cfg.steps_per_cycle = opt.steps_per_cycle;
  cfg.delta = opt.delta;
  cfg.quad = make_quad(opt);
  auto grid = parse_grid(opt.omega_grid);
  std::sort(grid.begin(), grid.end());
  const auto result = esclab::closeness_experiment(
      cost, spec, grid, initial_state(opt, algo, cost), opt.T, cfg);
  emit(esclab::to_json(result), opt.out);
  return 0;
}

int cmd_certify(const Options& opt) {
  const auto algo = esclab::parse_algorithm(opt.algo);
  if (!esclab::is_model_free(algo)) {
    throw std::invalid_argument("certify examines the model-free system");
  }
  const auto cost = make_cost(opt);
  const esclab::EscParams params{opt.k, opt.omega_l};

  esclab::StabilityQuery query;
  query.c1 = opt.c1;
  query.c2 = opt.c2;
  query.a_grid = parse_grid(opt.a_grid);
  query.omega_grid = parse_grid(opt.omega_grid);
  query.ics.seed = opt.seed;
  query.tail_fraction = opt.tail;
  query.jobs = opt.jobs;

  esclab::HorizonPolicy policy;
  policy.fixed = opt.horizon;
  if (cost.homogeneous_degree) policy.growth = esclab::growth_bounds(cost);
  const double T = policy.horizon(opt.k, opt.c2);

  const auto family = [&](double a, double omega) {
    Options o = opt;
    o.a = a;
    return esclab::make_esc_system(algo, cost, make_spec(o, algo, omega), params);
  };
  const auto cell_cfg = [&](double, double omega) {
    esclab::IntegratorConfig cfg;
    cfg.step = opt.step > 0.0
                   ? opt.step
                   : esclab::auto_step(omega, parse_int_list(opt.rates),
                                       opt.steps_per_cycle);
    cfg.t0 = 0.0;
    cfg.t1 = T;
    cfg.record_stride = std::max(1, static_cast<int>(T / cfg.step / 20000));
    return cfg;
  };
  const auto report = esclab::certify_practical_stability(
      family, query, esclab::parse_certify_mode(opt.mode), cell_cfg,
      opt.exhaustive);
  emit(esclab::to_json(report), opt.out);
  return 0;
}

int cmd_plot(const Options& opt) {
  if (opt.out.empty()) throw std::invalid_argument("plot requires --out");
  esclab::PlotStyle style;
  style.x_min = -opt.extent;
  style.x_max = opt.extent;
  style.y_min = -opt.extent;
  style.y_max = opt.extent;
  const auto algo = esclab::parse_algorithm(opt.algo);
  const auto cost = make_cost(opt);
  const esclab::EscParams params{opt.k, opt.omega_l};
  if (opt.plot_mode == "stream") {
    if (esclab::is_model_free(algo)) {
      throw std::invalid_argument("stream plots need an autonomous system");
    }
    const auto spec = make_spec(opt, algo, 1.0);
    auto sys = esclab::make_esc_system(algo, cost, spec, params, make_quad(opt));
    if (sys.dim != 2) throw std::invalid_argument("stream plots are 2-D only");
    style.title = esclab::algorithm_name(algo) + " a=" + std::to_string(opt.a);
    const std::string svg = esclab::stream_plot_svg(
        [&](const Vec& x) {
          Vec dx(2);
          sys.rhs(0.0, x, dx);
          return dx;
        },
        style);
    esclab::atomic_write_file(opt.out, svg);
    return 0;
  }
  if (opt.plot_mode == "trajectory") {
    const auto spec = make_spec(opt, algo);
    const auto sys = esclab::make_esc_system(algo, cost, spec, params, make_quad(opt));
    esclab::IntegratorConfig cfg;
    cfg.step = pick_step(opt, algo, spec);
    cfg.t0 = 0.0;
    cfg.t1 = opt.T;
    cfg.record_stride = std::max(1, static_cast<int>(opt.T / cfg.step / 20000));
    const auto traj = esclab::integrate(sys, initial_state(opt, algo, cost), cfg);
    style.title = sys.description;
    esclab::atomic_write_file(opt.out, esclab::trajectory_svg(traj, style));
    return traj.diverged ? 2 : 0;
  }
  throw std::invalid_argument("plot mode must be 'stream' or 'trajectory'");
}

void apply_config_defaults(int argc, char** argv, Options& opt) {
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  }
  if (config_path.empty()) return;
  std::ifstream in(config_path);
  if (!in) throw std::invalid_argument("cannot read config file: " + config_path);
  json j;
  in >> j;
  const auto get = [&](const char* key, auto& target) {
    using T = std::decay_t<decltype(target)>;
    if (j.contains(key)) target = j[key].get<T>();
  };
  get("cost", opt.cost_id);
  get("Q", opt.Q_json);
  get("dim", opt.dim);
  get("algo", opt.algo);
  get("rates", opt.rates);
  get("ramp", opt.ramp);
  get("a", opt.a);
  get("omega", opt.omega);
  get("k", opt.k);
  get("omega_l", opt.omega_l);
  get("x0", opt.x0);
  get("gamma0", opt.gamma0);
  get("T", opt.T);
  get("step", opt.step);
  get("steps_per_cycle", opt.steps_per_cycle);
  get("order", opt.order);
  get("at", opt.at);
  get("quad_points", opt.quad_points);
  get("quad_tol", opt.quad_tol);
  get("out", opt.out);
  get("seed", opt.seed);
  get("jobs", opt.jobs);
  get("c1", opt.c1);
  get("c2", opt.c2);
  get("a_grid", opt.a_grid);
  get("omega_grid", opt.omega_grid);
  get("horizon", opt.horizon);
  get("tail", opt.tail);
  get("mode", opt.mode);
  get("delta", opt.delta);
  get("samples", opt.samples);
  get("plot_mode", opt.plot_mode);
  get("extent", opt.extent);
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::string config_path;

  CLI::App app{"extremum seeking control lab"};
  app.require_subcommand(1);
  app.add_option("--config", config_path, "JSON config file; flags override");

  try {
    apply_config_defaults(argc, argv, opt);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "config"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  }

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file; flags override");
    cmd->add_option("--out", opt.out, "output file (default stdout)");
    cmd->add_option("--cost", opt.cost_id, "cost id: quartic2d|quadratic|sphere");
    cmd->add_option("--Q", opt.Q_json, "row-major JSON matrix for quadratic costs");
    cmd->add_option("--dim", opt.dim, "dimension for sphere costs");
    cmd->add_option("--rates", opt.rates, "relative dither rates, e.g. 1,3");
    cmd->add_option("--ramp", opt.ramp, "raw relative amplitudes, normalized internally");
    cmd->add_option("--a", opt.a, "dither amplitude");
    cmd->add_option("--omega", opt.omega, "dither base frequency");
    cmd->add_option("--k", opt.k, "adaptation gain");
    cmd->add_option("--omega-l", opt.omega_l, "Riccati gain");
    cmd->add_option("--quad-points", opt.quad_points, "Simpson subintervals per period");
    cmd->add_option("--quad-tol", opt.quad_tol, "quadrature refinement tolerance");
    cmd->add_flag("--quad-no-refine", opt.quad_no_refine, "disable quadrature doubling");
    cmd->add_option("--seed", opt.seed, "sampling seed (or env ESC_LAB_SEED)");
    cmd->add_option("--jobs", opt.jobs, "parallel integrations in sweeps");
  };

  auto* validate = app.add_subcommand("validate-dither", "check rate admissibility");
  validate->add_option("--config", config_path, "JSON config file; flags override");
  validate->add_option("--rates", opt.rates, "integer rates");
  validate->add_option("--order", opt.order, "first|second");
  validate->add_option("--out", opt.out, "output file");

  auto* simulate = app.add_subcommand("simulate", "integrate an ESC system");
  add_common(simulate);
  simulate->add_option("--algo", opt.algo, "esc variant");
  simulate->add_option("--x0", opt.x0, "initial parameter estimate");
  simulate->add_option("--gamma0", opt.gamma0, "vech of the initial inverse-Hessian estimate");
  simulate->add_option("--T", opt.T, "horizon");
  simulate->add_option("--step", opt.step, "RK4 step (0 = auto)");
  simulate->add_option("--steps-per-cycle", opt.steps_per_cycle, "auto-step resolution");
  simulate->add_option("--stride", opt.stride, "record every n-th step");

  auto* average = app.add_subcommand("average", "evaluate the average field");
  add_common(average);
  average->add_option("--algo", opt.algo, "esc variant");
  average->add_option("--at", opt.at, "state to evaluate at");

  auto* linearize_cmd = app.add_subcommand("linearize", "central-difference Jacobian");
  add_common(linearize_cmd);
  linearize_cmd->add_option("--algo", opt.algo, "autonomous esc variant");
  linearize_cmd->add_option("--at", opt.at, "linearization point");
  linearize_cmd->add_option("--fd-step", opt.fd_step, "finite-difference step");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of a matrix or Jacobian");
  add_common(spectrum_cmd);
  spectrum_cmd->add_option("--matrix", opt.matrix_json_text, "JSON matrix");
  spectrum_cmd->add_option("--algo", opt.algo, "autonomous esc variant");
  spectrum_cmd->add_option("--at", opt.at, "linearization point");
  spectrum_cmd->add_option("--fd-step", opt.fd_step, "finite-difference step");

  auto* sweep = app.add_subcommand("sweep-a", "ultimate bounds along a dither-amplitude grid");
  add_common(sweep);
  sweep->add_option("--algo", opt.algo, "autonomous esc variant");
  sweep->add_option("--a-grid", opt.a_grid, "descending amplitudes");
  sweep->add_option("--c1", opt.c1, "initial-condition radius");
  sweep->add_option("--c2", opt.c2, "target ball radius (for entry times)");
  sweep->add_option("--horizon", opt.horizon, "fixed horizon (0 = 1/a^2 policy)");
  sweep->add_option("--step", opt.step, "fixed step (0 = 1/a^2 policy)");
  sweep->add_option("--tail", opt.tail, "ultimate-bound tail fraction");

  auto* closeness = app.add_subcommand("closeness", "model-free vs average trajectory gap");
  add_common(closeness);
  closeness->add_option("--algo", opt.algo, "model-free esc variant");
  closeness->add_option("--omega-grid", opt.omega_grid, "dither speeds");
  closeness->add_option("--x0", opt.x0, "shared initial condition");
  closeness->add_option("--T", opt.T, "comparison horizon");
  closeness->add_option("--delta", opt.delta, "closeness target for omega_star");
  closeness->add_option("--samples", opt.samples, "comparison grid resolution");
  closeness->add_option("--steps-per-cycle", opt.steps_per_cycle, "auto-step resolution");

  auto* certify = app.add_subcommand("certify", "practical-stability certificate search");
  add_common(certify);
  certify->add_option("--algo", opt.algo, "model-free esc variant");
  certify->add_option("--a-grid", opt.a_grid, "descending amplitudes");
  certify->add_option("--omega-grid", opt.omega_grid, "descending speeds");
  certify->add_option("--c1", opt.c1, "initial ball radius");
  certify->add_option("--c2", opt.c2, "target ball radius");
  certify->add_option("--mode", opt.mode, "ps|pb|delta-pua");
  certify->add_option("--horizon", opt.horizon, "fixed horizon (0 = growth-bound policy)");
  certify->add_option("--tail", opt.tail, "tail fraction");
  certify->add_option("--step", opt.step, "fixed step (0 = auto per omega)");
  certify->add_option("--steps-per-cycle", opt.steps_per_cycle, "auto-step resolution");
  certify->add_flag("--exhaustive", opt.exhaustive, "evaluate the whole grid");

  auto* plot = app.add_subcommand("plot", "SVG stream plot or trajectory");
  add_common(plot);
  plot->add_option("--algo", opt.algo, "esc variant");
  plot->add_option("--mode", opt.plot_mode, "stream|trajectory");
  plot->add_option("--extent", opt.extent, "plot half-width");
  plot->add_option("--x0", opt.x0, "initial condition (trajectory mode)");
  plot->add_option("--T", opt.T, "horizon (trajectory mode)");
  plot->add_option("--step", opt.step, "RK4 step (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error",
                       {{"type", "usage"}, {"message", e.what()}, {"code", e.get_exit_code()}}}}
                     .dump()
              << "\n";
    return 1;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (average->parsed()) return cmd_average(opt);
    if (linearize_cmd->parsed()) return cmd_linearize(opt);
    if (spectrum_cmd->parsed()) return cmd_spectrum(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (closeness->parsed()) return cmd_closeness(opt);
    if (certify->parsed()) return cmd_certify(opt);
    if (plot->parsed()) return cmd_plot(opt);
  } catch (const DivergenceExit& e) {
    std::cerr << json{{"error", {{"type", "divergence"}, {"message", e.message}}}}.dump()
              << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"error", {{"type", "validation"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "runtime"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  }
  return 0;
}
