#include "vsclab/pipeline.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

namespace py = pybind11;
using namespace vsclab;

PYBIND11_MODULE(_vsclab, m) {
  m.doc() = "distance functions, index functions and convergence-rate experiments "
            "for Tikhonov regularization of ill-posed problems";

  py::enum_<ProblemKind>(m, "ProblemKind")
      .value("LinearHilbert", ProblemKind::LinearHilbert)
      .value("L1Linear", ProblemKind::L1Linear)
      .value("Autoconvolution", ProblemKind::Autoconvolution);
  py::enum_<SourceMode>(m, "SourceMode")
      .value("DirectXdagger", SourceMode::DirectXdagger)
      .value("SourceElement", SourceMode::SourceElement);
  py::enum_<OmegaKind>(m, "OmegaKind")
      .value("SquaredNorm2", OmegaKind::SquaredNorm2)
      .value("Norm1", OmegaKind::Norm1);
  py::enum_<AlphaRule>(m, "AlphaRule")
      .value("APrioriPhi", AlphaRule::APrioriPhi)
      .value("Discrepancy", AlphaRule::Discrepancy);

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def_readonly("kind", &ProblemInstance::kind)
      .def_readonly("n", &ProblemInstance::n)
      .def_readonly("m", &ProblemInstance::m)
      .def_readonly("sigma", &ProblemInstance::sigma)
      .def_readonly("y_dagger", &ProblemInstance::y_dagger)
      .def_readonly("x_dagger", &ProblemInstance::x_dagger)
      .def_readonly("omega_dagger_value", &ProblemInstance::omega_dagger_value)
      .def_readonly("p", &ProblemInstance::p)
      .def("to_json", [](const ProblemInstance& p) { return nlohmann::json(p).dump(2); })
      .def("__repr__", [](const ProblemInstance& p) {
        return "<ProblemInstance " + to_string(p.kind) + " n=" + std::to_string(p.n) +
               " m=" + std::to_string(p.m) + ">";
      });

  m.def("make_linear_hilbert", &make_linear_hilbert, py::arg("singular_values"),
        py::arg("coeffs"), py::arg("mode") = SourceMode::SourceElement, py::arg("null_dim") = 0);
  m.def("make_l1_linear", &make_l1_linear, py::arg("A"), py::arg("x_dagger"));
  m.def("make_autoconvolution", &make_autoconvolution, py::arg("x_dagger"));
  m.def("problem_from_json", [](const std::string& text) {
    return nlohmann::json::parse(text).get<ProblemInstance>();
  });

  m.def("apply_forward", &apply_forward, py::arg("problem"), py::arg("x"));
  m.def("apply_jacobian", &apply_jacobian, py::arg("problem"), py::arg("x"), py::arg("direction"));
  m.def("apply_jacobian_adjoint", &apply_jacobian_adjoint, py::arg("problem"), py::arg("x"),
        py::arg("residual"));
  m.def("omega", &omega, py::arg("problem"), py::arg("x"));
  m.def("error_functional", &error_functional, py::arg("problem"), py::arg("x"));
  m.def("exact_residual_norm", &exact_residual_norm, py::arg("problem"), py::arg("x"));

  py::class_<TikhonovSolution>(m, "TikhonovSolution")
      .def_readonly("x", &TikhonovSolution::x)
      .def_readonly("alpha", &TikhonovSolution::alpha)
      .def_readonly("residual_norm", &TikhonovSolution::residual_norm)
      .def_readonly("omega_value", &TikhonovSolution::omega_value)
      .def_readonly("objective", &TikhonovSolution::objective)
      .def_readonly("iterations", &TikhonovSolution::iterations)
      .def_readonly("converged", &TikhonovSolution::converged)
      .def_readonly("best_start", &TikhonovSolution::best_start);

  m.def(
      "solve",
      [](const ProblemInstance& p, const Vector& y, double alpha, double tol, int max_iter,
         int starts, std::uint64_t seed) {
        SolverOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        opts.starts = starts;
        opts.seed = seed;
        return solve(p, y, alpha, opts);
      },
      py::arg("problem"), py::arg("y_obs"), py::arg("alpha"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 5000, py::arg("starts") = 16, py::arg("seed") = 0);
  m.def("soft_threshold", &soft_threshold, py::arg("v"), py::arg("tau"));
  m.def("tikhonov_objective", &tikhonov_objective, py::arg("problem"), py::arg("y_obs"),
        py::arg("alpha"), py::arg("x"));

  py::class_<DistanceProfile>(m, "DistanceProfile")
      .def_readonly("beta", &DistanceProfile::beta)
      .def_readonly("r_grid", &DistanceProfile::r_grid)
      .def_readonly("values", &DistanceProfile::values)
      .def_readonly("residuals", &DistanceProfile::residuals)
      .def_readonly("maximizers", &DistanceProfile::maximizers)
      .def_readonly("trivial_vsc", &DistanceProfile::trivial_vsc)
      .def_readonly("linear_vsc", &DistanceProfile::linear_vsc)
      .def_property_readonly("exact", [](const DistanceProfile& p) {
        std::vector<bool> flags;
        for (char e : p.exact) flags.push_back(e != 0);
        return flags;
      });

  py::class_<MaximizeResult>(m, "MaximizeResult")
      .def_readonly("x_hat", &MaximizeResult::x_hat)
      .def_readonly("value", &MaximizeResult::value)
      .def_readonly("certified", &MaximizeResult::certified);

  m.def("distance_objective", &distance_objective, py::arg("problem"), py::arg("beta"),
        py::arg("r"), py::arg("x"));
  m.def(
      "maximize_objective",
      [](const ProblemInstance& p, double beta, double r, const Vector& start) {
        return maximize_objective(p, beta, r, start);
      },
      py::arg("problem"), py::arg("beta"), py::arg("r"), py::arg("start"));
  m.def(
      "distance_profile",
      [](const ProblemInstance& p, double beta, double r_min, double r_max, int num_points,
         int multistart, std::uint64_t seed) {
        AscentOptions opts;
        opts.multistart = multistart;
        opts.seed = seed;
        return distance_profile(p, beta, r_min, r_max, num_points, opts);
      },
      py::arg("problem"), py::arg("beta"), py::arg("r_min") = 1e-3, py::arg("r_max") = 1e4,
      py::arg("num_points") = 60, py::arg("multistart") = 8, py::arg("seed") = 0);
  m.def("brute_force_distance", &brute_force_distance, py::arg("problem"), py::arg("beta"),
        py::arg("r"), py::arg("box_halfwidth"), py::arg("points_per_dim"),
        py::arg("refine_levels") = 0);

  py::class_<IndexFunction>(m, "IndexFunction")
      .def(py::init<>())
      .def_readwrite("t_grid", &IndexFunction::t_grid)
      .def_readwrite("values", &IndexFunction::values)
      .def_readwrite("slopes_used", &IndexFunction::slopes_used)
      .def_readwrite("trivial", &IndexFunction::trivial)
      .def("__call__", [](const IndexFunction& phi, double t) { return evaluate(phi, t); });

  m.def("index_from_distance", &index_from_distance, py::arg("profile"), py::arg("t_grid"),
        py::arg("decay_tol") = -1.0, py::arg("trivial_slope") = 1.0);
  m.def("evaluate", &evaluate, py::arg("phi"), py::arg("t"));
  m.def("default_t_grid", &default_t_grid, py::arg("scale"), py::arg("num_points") = 50);
  m.def("concave_envelope", &concave_envelope, py::arg("points"));
  m.def("convex_minorant", &convex_minorant, py::arg("points"));

  py::class_<ViolationReport>(m, "ViolationReport")
      .def_readonly("num_samples", &ViolationReport::num_samples)
      .def_readonly("num_violations", &ViolationReport::num_violations)
      .def_readonly("worst_gap", &ViolationReport::worst_gap)
      .def_readonly("worst_point", &ViolationReport::worst_point)
      .def_readonly("tolerance", &ViolationReport::tolerance);

  m.def(
      "verify_vsc",
      [](const ProblemInstance& p, double beta, const IndexFunction& phi, int num_samples,
         std::vector<double> scales, std::uint64_t seed, std::vector<Vector> extra_points,
         double tolerance) {
        SamplingSpec spec;
        spec.num_random = num_samples;
        if (!scales.empty()) spec.scales = std::move(scales);
        spec.seed = seed;
        spec.extra_points = std::move(extra_points);
        return verify_vsc(p, beta, phi, spec, tolerance);
      },
      py::arg("problem"), py::arg("beta"), py::arg("phi"), py::arg("num_samples") = 10000,
      py::arg("scales") = std::vector<double>{}, py::arg("seed") = 0,
      py::arg("extra_points") = std::vector<Vector>{}, py::arg("tolerance") = 1e-6);
  m.def("check_solution_inequality", &check_solution_inequality, py::arg("problem"),
        py::arg("beta"), py::arg("solution_samples"));
  m.def("coercivity_margin", &coercivity_margin, py::arg("problem"), py::arg("beta_tilde"),
        py::arg("sample_box"), py::arg("num_samples"), py::arg("seed") = 0);
  m.def("bregman_distance", &bregman_distance, py::arg("omega_kind"), py::arg("x"),
        py::arg("x_dagger"), py::arg("xi_dagger"));
  m.def("admissible_beta_bregman", &admissible_beta_bregman, py::arg("c1"), py::arg("xi_norm"));

  py::class_<RateCell>(m, "RateCell")
      .def_readonly("delta", &RateCell::delta)
      .def_readonly("replicate", &RateCell::replicate)
      .def_readonly("error", &RateCell::error)
      .def_readonly("alpha", &RateCell::alpha)
      .def_readonly("converged", &RateCell::converged);

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("deltas", &RateReport::deltas)
      .def_readonly("errors", &RateReport::errors)
      .def_readonly("phi_values", &RateReport::phi_values)
      .def_readonly("alphas", &RateReport::alphas)
      .def_readonly("failures", &RateReport::failures)
      .def_readonly("fitted_exponent", &RateReport::fitted_exponent)
      .def_readonly("envelope_constant", &RateReport::envelope_constant)
      .def_readonly("replicates", &RateReport::replicates)
      .def_readonly("cells", &RateReport::cells);

  m.def("add_noise", &add_noise, py::arg("y_dagger"), py::arg("delta"), py::arg("seed"));
  m.def(
      "choose_alpha",
      [](double delta, double p, const IndexFunction& phi, AlphaRule rule,
         const ProblemInstance& problem, const Vector& y_obs) {
        return choose_alpha(delta, p, phi, rule, problem, y_obs);
      },
      py::arg("delta"), py::arg("p"), py::arg("phi"), py::arg("rule"), py::arg("problem"),
      py::arg("y_obs"));
  m.def(
      "run_rate_experiment",
      [](const ProblemInstance& p, double beta, const IndexFunction& phi,
         const std::vector<double>& deltas, int replicates, AlphaRule rule, std::uint64_t seed) {
        return run_rate_experiment(p, beta, phi, deltas, replicates, rule, seed);
      },
      py::arg("problem"), py::arg("beta"), py::arg("phi"), py::arg("delta_list"),
      py::arg("replicates") = 11, py::arg("rule") = AlphaRule::APrioriPhi, py::arg("seed") = 0);
  m.def("fit_exponent", &fit_exponent, py::arg("deltas"), py::arg("errors"));

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& config, const std::filesystem::path& out) {
        return run_pipeline(load_config(config), out);
      },
      py::arg("config"), py::arg("out"));

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::invalid_argument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });
}
