#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "esclab/averaging.hpp"
#include "esclab/cost.hpp"
#include "esclab/dither.hpp"
#include "esclab/esc_systems.hpp"
#include "esclab/estimators.hpp"
#include "esclab/integrate.hpp"
#include "esclab/matrix_calculus.hpp"
#include "esclab/stability.hpp"

namespace py = pybind11;
using namespace esclab;

namespace {

DitherSpec build_spec(const std::vector<int>& rates, const Vec& raw_amplitudes,
                      double a, double omega, const std::string& order) {
  return make_dither_spec(rates, raw_amplitudes, a, omega,
                          parse_rate_order(order));
}

CostFunction cost_from(const std::string& id, const py::object& Q, int n) {
  std::optional<Mat> qm;
  if (!Q.is_none()) qm = Q.cast<Mat>();
  return builtin_cost(id, qm, n);
}

Mat states_matrix(const Trajectory& traj) {
  Mat out(static_cast<Eigen::Index>(traj.size()), traj.dim());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = traj.states[i].transpose();
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_esclab, m) {
  m.doc() = "extremum seeking control lab: dither design, derivative "
            "estimators, ESC flows, averaging, and stability experiments";

  py::class_<CostFunction>(m, "CostFunction")
      .def_readonly("id", &CostFunction::id)
      .def_readonly("dim", &CostFunction::dim)
      .def("__call__", [](const CostFunction& c, const Vec& x) { return c.eval(x); })
      .def("grad", [](const CostFunction& c, const Vec& x) { return c.grad(x); })
      .def("hess", [](const CostFunction& c, const Vec& x) { return c.hess(x); })
      .def_property_readonly("minimizer", [](const CostFunction& c) {
        return c.minimizer ? py::cast(*c.minimizer) : py::none().cast<py::object>();
      });

  m.def("builtin_cost", &cost_from, py::arg("id"), py::arg("Q") = py::none(),
        py::arg("n") = 2);
  m.def("growth_bounds", [](const CostFunction& c) {
    const auto gb = growth_bounds(c);
    return std::make_pair(gb.b1, gb.b2);
  });
  m.def("ultimate_bound_gain", [](double b1, double b2, double a) {
    return ultimate_bound_gain(GrowthBounds{b1, b2}, a);
  });

  py::class_<DitherSpec>(m, "DitherSpec")
      .def_readonly("rates", &DitherSpec::rates)
      .def_readonly("rel_amplitudes", &DitherSpec::rel_amplitudes)
      .def_readonly("amplitude", &DitherSpec::amplitude)
      .def_readonly("base_frequency", &DitherSpec::base_frequency)
      .def("__call__", &eval_dither);

  m.def("make_dither_spec", &build_spec, py::arg("rates"), py::arg("amplitudes"),
        py::arg("a"), py::arg("omega") = 1.0, py::arg("order") = "first");
  m.def("validate_rates", [](const std::vector<int>& rates, const std::string& order) {
    const auto report = validate_rates(rates, parse_rate_order(order));
    py::list violations, warnings;
    const auto fill = [](py::list& out, const std::vector<RateViolation>& vs) {
      for (const auto& v : vs) {
        py::dict d;
        d["rule"] = v.rule;
        d["indices"] = v.indices;
        d["rates"] = v.rates;
        out.append(d);
      }
    };
    fill(violations, report.violations);
    fill(warnings, report.nondistinct_warnings);
    py::dict d;
    d["valid"] = report.valid;
    d["violations"] = violations;
    d["nondistinct_warnings"] = warnings;
    return d;
  });
  m.def("normalize_amplitudes", &normalize_amplitudes);
  m.def("eval_dither", &eval_dither);
  m.def("enumerate_admissible",
        [](int n, int max_rate, const std::string& order) {
          return enumerate_admissible(n, max_rate, parse_rate_order(order));
        });

  m.def("gradient_estimate", &gradient_estimate);
  m.def("hessian_estimate", &hessian_estimate);

  m.def("vech", [](const Mat& X) { return vech(X); });
  m.def("unvech", &unvech);
  m.def("duplication_matrix", &duplication_matrix);
  m.def("elimination_matrix", &elimination_matrix);
  m.def("log_spd", &log_spd);
  m.def("exp_sym", &exp_sym);
  m.def("dalecki_krein_C", [](const Mat& gamma) {
    return dalecki_krein_C(eig_spd(gamma));
  });
  m.def("log_coordinate_rate", &log_coordinate_rate);

  m.def("common_period", &common_period);
  m.def("closed_form_A", &closed_form_A);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("times",
                             [](const Trajectory& t) { return t.times; })
      .def_property_readonly("states", &states_matrix)
      .def_readonly("diverged", &Trajectory::diverged)
      .def_readonly("system", &Trajectory::system);

  m.def(
      "simulate",
      [](const std::string& algo, const CostFunction& cost,
         const DitherSpec& spec, const Vec& x0, double T, double k,
         double omega_l, double step, int stride) {
        const auto algorithm = parse_algorithm(algo);
        const EscParams params{k, omega_l};
        auto sys = make_esc_system(algorithm, cost, spec, params);
        IntegratorConfig cfg;
        cfg.step = step > 0.0 ? step
                   : is_model_free(algorithm)
                       ? auto_step(spec.base_frequency, spec.rates)
                       : 1e-3;
        cfg.t1 = T;
        cfg.record_stride = stride;
        return integrate(sys, x0, cfg);
      },
      py::arg("algo"), py::arg("cost"), py::arg("spec"), py::arg("x0"),
      py::arg("T"), py::arg("k") = 1.0, py::arg("omega_l") = 1.0,
      py::arg("step") = 0.0, py::arg("stride") = 1);

  m.def(
      "average_field",
      [](const std::string& algo, const CostFunction& cost,
         const DitherSpec& spec, const Vec& at, double k, double omega_l) {
        const EscParams params{k, omega_l};
        auto sys = make_esc_system(parse_algorithm(algo), cost, spec, params);
        Vec out(sys.dim);
        sys.rhs(0.0, at, out);
        return out;
      },
      py::arg("algo"), py::arg("cost"), py::arg("spec"), py::arg("at"),
      py::arg("k") = 1.0, py::arg("omega_l") = 1.0);

  m.def(
      "linearize_field",
      [](const std::string& algo, const CostFunction& cost,
         const DitherSpec& spec, const Vec& at, double k, double omega_l,
         double h) {
        const EscParams params{k, omega_l};
        auto sys = make_esc_system(parse_algorithm(algo), cost, spec, params);
        return linearize(
            [&](const Vec& x) {
              Vec dx(sys.dim);
              sys.rhs(0.0, x, dx);
              return dx;
            },
            at, h);
      },
      py::arg("algo"), py::arg("cost"), py::arg("spec"), py::arg("at"),
      py::arg("k") = 1.0, py::arg("omega_l") = 1.0, py::arg("h") = 1e-4);

  m.def("spectrum", [](const Mat& M) { return spectrum(M); });
  m.def("ultimate_bound", &ultimate_bound, py::arg("trajectory"),
        py::arg("tail_fraction") = 0.2);

  m.def(
      "closeness_gaps",
      [](const CostFunction& cost, const DitherSpec& spec,
         const std::vector<double>& omega_grid, const Vec& x0, double T,
         double k, int samples) {
        ClosenessConfig cfg;
        cfg.params = {k, 1.0};
        cfg.samples = samples;
        const auto result = closeness_experiment(cost, spec, omega_grid, x0, T, cfg);
        py::list out;
        for (const auto& g : result.gaps) {
          py::dict d;
          d["omega"] = g.omega;
          d["gap"] = g.gap;
          d["diverged"] = g.diverged;
          out.append(d);
        }
        return out;
      },
      py::arg("cost"), py::arg("spec"), py::arg("omega_grid"), py::arg("x0"),
      py::arg("T"), py::arg("k") = 1.0, py::arg("samples") = 2000);

  m.def("pack_nesc_state", &pack_nesc_state);
  m.def("unpack_nesc_state", &unpack_nesc_state);

  m.attr("__version__") = "0.1.0";
}
