// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hamricc/config.hpp"
#include "hamricc/dichotomy.hpp"
#include "hamricc/hamiltonian.hpp"
#include "hamricc/linalg.hpp"
#include "hamricc/pipeline.hpp"
#include "hamricc/problems.hpp"
#include "hamricc/report.hpp"
#include "hamricc/riccati.hpp"
#include "hamricc/scale.hpp"

namespace py = pybind11;
using namespace hamricc;

namespace {

py::object json_loads(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

}  // namespace

PYBIND11_MODULE(hamricc, m) {
  m.doc() = "Riccati solutions from dichotomy projections of Hamiltonian matrices";

  py::register_exception<Error>(m, "Error");
  py::register_exception<DimensionError>(m, "DimensionError");
  py::register_exception<ParameterError>(m, "ParameterError");
  py::register_exception<SingularityError>(m, "SingularityError");
  py::register_exception<AccuracyError>(m, "AccuracyError");
  py::register_exception<ConsistencyError>(m, "ConsistencyError");
  py::register_exception<GenerationError>(m, "GenerationError");
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<NotDichotomousError>(m, "NotDichotomousError");

  py::class_<NumericPolicy>(m, "NumericPolicy")
      .def(py::init<>())
      .def_readwrite("rel_tol", &NumericPolicy::rel_tol)
      .def_readwrite("quad_abs_tol", &NumericPolicy::quad_abs_tol)
      .def_readwrite("axis_tol", &NumericPolicy::axis_tol)
      .def_readwrite("residual_tol", &NumericPolicy::residual_tol)
      .def_readwrite("proj_tol_floor", &NumericPolicy::proj_tol_floor)
      .def_readwrite("match_tol", &NumericPolicy::match_tol)
      .def_readwrite("pbh_tol", &NumericPolicy::pbh_tol)
      .def_readwrite("graph_margin_min", &NumericPolicy::graph_margin_min)
      .def_readwrite("quad_max_evals", &NumericPolicy::quad_max_evals);

  py::enum_<Side>(m, "Side").value("plain", Side::plain).value("star", Side::star);

  py::class_<SpaceTag>(m, "SpaceTag")
      .def(py::init([](Side side, double exponent) {
             return SpaceTag{side, exponent};
           }),
           py::arg("side"), py::arg("exponent"))
      .def_readwrite("side", &SpaceTag::side)
      .def_readwrite("exponent", &SpaceTag::exponent);

  py::class_<HilbertScale>(m, "HilbertScale")
      .def_static("build", [](const Eigen::MatrixXcd& a) { return HilbertScale::build(a); })
      .def_property_readonly("base", &HilbertScale::base)
      .def_property_readonly("dim", &HilbertScale::dim)
      .def("gram_eigenvalues", &HilbertScale::gram_eigenvalues)
      .def("lambda_power", &HilbertScale::lambda_power)
      .def("scale_norm", &HilbertScale::scale_norm)
      .def("pairing", &HilbertScale::pairing)
      .def("operator_scale_norm", &HilbertScale::operator_scale_norm);

  py::class_<HeinzReport>(m, "HeinzReport")
      .def_readonly("lhs", &HeinzReport::lhs)
      .def_readonly("rhs", &HeinzReport::rhs)
      .def_readonly("holds", &HeinzReport::holds);
  m.def("heinz_check",
        [](const HilbertScale& scale, const Eigen::MatrixXcd& mat, SpaceTag src1,
           SpaceTag dst1, SpaceTag src2, SpaceTag dst2, double mix) {
          return heinz_check(scale, mat, src1, dst1, src2, dst2, mix);
        });

  py::class_<SystemData>(m, "SystemData")
      .def(py::init<>())
      .def_readwrite("A", &SystemData::A)
      .def_readwrite("B", &SystemData::B)
      .def_readwrite("C", &SystemData::C)
      .def_readwrite("r", &SystemData::r)
      .def_readwrite("s", &SystemData::s)
      .def_readwrite("label", &SystemData::label);

  py::class_<HamiltonianMatrices>(m, "HamiltonianMatrices")
      .def_readonly("T0", &HamiltonianMatrices::T0)
      .def_readonly("S0", &HamiltonianMatrices::S0)
      .def_readonly("R", &HamiltonianMatrices::R)
      .def_property_readonly("scale",
                             [](const HamiltonianMatrices& h) { return h.scale; });
  m.def("assemble", [](const SystemData& sys) { return assemble(sys); });

  m.def("pbh_controllability", [](const SystemData& sys) {
    const PbhReport rep = pbh_controllability(sys);
    return py::make_tuple(rep.ok, rep.threshold);
  });
  m.def("pbh_observability", [](const SystemData& sys) {
    const PbhReport rep = pbh_observability(sys);
    return py::make_tuple(rep.ok, rep.threshold);
  });

  py::class_<ContourSpec>(m, "ContourSpec")
      .def(py::init<>())
      .def_readwrite("h", &ContourSpec::h)
      .def_readwrite("t_max", &ContourSpec::t_max)
      .def_readwrite("rho", &ContourSpec::rho)
      .def_readwrite("abs_tol", &ContourSpec::abs_tol);
  m.def("choose_strip",
        [](const Eigen::MatrixXcd& t0) { return choose_strip(t0); });

  py::class_<DichotomyResult>(m, "DichotomyResult")
      .def_readonly("Lplus", &DichotomyResult::Lplus)
      .def_readonly("Lminus", &DichotomyResult::Lminus)
      .def_readonly("Pplus", &DichotomyResult::Pplus)
      .def_readonly("Pminus", &DichotomyResult::Pminus)
      .def_readonly("basis_plus", &DichotomyResult::basis_plus)
      .def_readonly("basis_minus", &DichotomyResult::basis_minus)
      .def_readonly("stable_count", &DichotomyResult::stable_count)
      .def_readonly("quadrature_error_estimate",
                    &DichotomyResult::quadrature_error_estimate);
  m.def("dichotomy_projections", [](const Eigen::MatrixXcd& t0, const ContourSpec& spec) {
    const Eigen::VectorXcd eigs =
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(t0, false).eigenvalues();
    const ContourIntegral lp = contour_L(t0, spec, +1);
    const ContourIntegral lm = contour_L(t0, spec, -1);
    return projections(t0, lp, lm, eigs);
  });

  py::class_<OracleProjections>(m, "OracleProjections")
      .def_readonly("Pplus", &OracleProjections::Pplus)
      .def_readonly("Pminus", &OracleProjections::Pminus)
      .def_readonly("eigen_gap", &OracleProjections::eigen_gap)
      .def_readonly("used_schur_fallback", &OracleProjections::used_schur_fallback);
  m.def("oracle_projections",
        [](const Eigen::MatrixXcd& t0) { return oracle_projections(t0); });

  m.def("principal_value_difference",
        [](const Eigen::MatrixXcd& t0, const ContourSpec& spec) {
          return principal_value_difference(t0, spec).value;
        });

  m.def("graph_check", [](const Eigen::MatrixXcd& basis) {
    const GraphCheck g = graph_check(basis);
    return py::make_tuple(g.is_graph, g.margin);
  });
  m.def("angular_operator",
        [](const Eigen::MatrixXcd& basis) { return angular_operator(basis).X; });
  m.def("riccati_residual",
        [](const SystemData& sys, const Eigen::MatrixXcd& x) {
          const HilbertScale scale = HilbertScale::build(sys.A);
          const ResidualReport rep = riccati_residual(sys, scale, x);
          return py::make_tuple(rep.weighted, rep.plain, rep.weighted_rel, rep.plain_rel);
        });
  m.def("closed_loop_matrix", [](const SystemData& sys, const Eigen::MatrixXcd& x) {
    return Eigen::MatrixXcd(sys.A - sys.B * sys.B.adjoint() * x);
  });
  m.def("scalar_oracle", [](double a, double b, double c) {
    const ScalarSolution sol = scalar_oracle(a, b, c);
    return py::make_tuple(sol.x_minus, sol.x_plus,
                          std::vector<Cx>{sol.spectrum[0], sol.spectrum[1]});
  });
  m.def("newton_kleinman", [](const SystemData& sys) { return newton_kleinman(sys); });

  py::enum_<ProblemKind>(m, "ProblemKind")
      .value("scalar", ProblemKind::scalar)
      .value("random_stable", ProblemKind::random_stable)
      .value("random_shifted", ProblemKind::random_shifted)
      .value("heat1d", ProblemKind::heat1d)
      .value("axis_eigen_detect", ProblemKind::axis_eigen_detect)
      .value("custom", ProblemKind::custom);

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init<>())
      .def_readwrite("kind", &ProblemSpec::kind)
      .def_readwrite("n", &ProblemSpec::n)
      .def_readwrite("m", &ProblemSpec::m)
      .def_readwrite("p", &ProblemSpec::p)
      .def_readwrite("r", &ProblemSpec::r)
      .def_readwrite("s", &ProblemSpec::s)
      .def_readwrite("seed", &ProblemSpec::seed)
      .def_readwrite("label", &ProblemSpec::label)
      .def_readwrite("a", &ProblemSpec::a)
      .def_readwrite("b", &ProblemSpec::b)
      .def_readwrite("c", &ProblemSpec::c)
      .def_readwrite("margin", &ProblemSpec::margin)
      .def_readwrite("mu", &ProblemSpec::mu)
      .def_readwrite("k_unstable", &ProblemSpec::k_unstable)
      .def_readwrite("control_node", &ProblemSpec::control_node)
      .def_readwrite("obs_node", &ProblemSpec::obs_node)
      .def_readwrite("omega", &ProblemSpec::omega)
      .def_readwrite("axis_zero_obs", &ProblemSpec::axis_zero_obs);
  m.def("generate", [](const ProblemSpec& spec) { return generate(spec); });

  py::class_<PipelineFlags>(m, "PipelineFlags")
      .def(py::init<>())
      .def_readwrite("symmetry", &PipelineFlags::symmetry)
      .def_readwrite("sq_identity", &PipelineFlags::sq_identity)
      .def_readwrite("decay_scan", &PipelineFlags::decay_scan)
      .def_readwrite("f1f2", &PipelineFlags::f1f2)
      .def_readwrite("closed_loop_scan", &PipelineFlags::closed_loop_scan);

  m.def(
      "solve",
      [](const ProblemSpec& spec, const NumericPolicy& policy, const PipelineFlags& flags) {
        RunConfig config;
        config.problem = spec;
        config.policy = policy;
        config.flags = flags;
        const RunReport rep = run_solve(config);
        py::dict out = json_loads(render_json(rep));
        out["x0minus"] = rep.x0minus;
        if (rep.x0plus) out["x0plus"] = *rep.x0plus;
        if (rep.y0plus) out["y0plus"] = *rep.y0plus;
        return out;
      },
      py::arg("spec"), py::arg("policy") = NumericPolicy(),
      py::arg("flags") = PipelineFlags());

  m.def(
      "compare",
      [](const ProblemSpec& spec, const NumericPolicy& policy) {
        RunConfig config;
        config.problem = spec;
        config.policy = policy;
        const CompareReport rep = run_compare(config);
        return json_loads(render_compare_json(rep));
      },
      py::arg("spec"), py::arg("policy") = NumericPolicy());
}
