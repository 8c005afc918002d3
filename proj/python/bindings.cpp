#include "localflow/flow.hpp"
#include "localflow/landscape.hpp"
#include "localflow/reproduce.hpp"
#include "localflow/schmidt.hpp"
#include "localflow/state_io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>

namespace py = pybind11;
using namespace localflow;

namespace {

DensityMatrix as_density(const Matrix& m) {
  // kets are accepted wherever a density matrix is expected
  if (m.cols() == 1) return DensityMatrix::pure(PureState::normalized(m.col(0)));
  return DensityMatrix(m);
}

UnitaryOp as_unitary(const std::optional<Matrix>& u, int n) {
  return u ? UnitaryOp(*u) : UnitaryOp::identity(n);
}

FlowConfig make_config(std::uint64_t seed, int max_steps, double grad_tol, bool saddle_kicks) {
  FlowConfig cfg;
  cfg.seed = seed;
  cfg.max_steps = max_steps;
  cfg.grad_tol = grad_tol;
  cfg.saddle_kicks = saddle_kicks;
  cfg.validate();
  return cfg;
}

py::dict spectrum_dict(const HessianSpectrum& s) {
  py::dict d;
  d["eigenvalues"] = s.eigenvalues;
  d["signature"] = std::string(to_string(s.signature));
  d["gradient_norm"] = s.gradient_norm;
  d["reliable"] = s.reliable;
  return d;
}

}  // namespace

PYBIND11_MODULE(_localflow, m) {
  m.doc() = "Local-unitary gradient flows and canonical forms for multi-qubit pure states";

  py::register_exception<FlowError>(m, "FlowError", PyExc_RuntimeError);

  py::class_<FlowTrace>(m, "FlowTrace")
      .def_property_readonly("fidelity",
                             [](const FlowTrace& t) {
                               std::vector<double> v;
                               for (const auto& s : t.samples) v.push_back(s.fidelity);
                               return v;
                             })
      .def_property_readonly("grad_norm",
                             [](const FlowTrace& t) {
                               std::vector<double> v;
                               for (const auto& s : t.samples) v.push_back(s.grad_norm);
                               return v;
                             })
      .def_property_readonly("final_fidelity", &FlowTrace::final_fidelity)
      .def_property_readonly("outcome", [](const FlowTrace& t) { return std::string(to_string(t.outcome)); })
      .def_property_readonly("final_unitary", [](const FlowTrace& t) { return t.final_unitary.matrix(); })
      .def_readonly("steps", &FlowTrace::steps)
      .def_readonly("kicks_used", &FlowTrace::kicks_used);

  py::class_<SchmidtForm>(m, "SchmidtForm")
      .def_readonly("n", &SchmidtForm::n)
      .def_readonly("lambdas", &SchmidtForm::lambdas)
      .def_readonly("phase_phi", &SchmidtForm::phase_phi)
      .def_property_readonly("canonical_state", [](const SchmidtForm& f) { return f.canonical_state.amplitudes(); })
      .def_property_readonly("optimal_product", [](const SchmidtForm& f) { return f.optimal_product.amplitudes(); })
      .def_property_readonly("diagonalizer", [](const SchmidtForm& f) { return f.diagonalizer.factors(); })
      .def_readonly("max_fidelity", &SchmidtForm::max_fidelity)
      .def_readonly("strictly_dominant", &SchmidtForm::strictly_dominant)
      .def_readonly("verified", &SchmidtForm::verified)
      .def_readonly("via_svd", &SchmidtForm::via_svd)
      .def_readonly("warnings", &SchmidtForm::warnings);

  m.def("schmidt_state", [](double theta) { return schmidt_state_2q(theta).matrix(); }, py::arg("theta"));
  m.def("schmidt_vector", [](double theta) { return schmidt_vector_2q(theta).amplitudes(); }, py::arg("theta"));
  m.def("optimal_fidelity", &optimal_fidelity, py::arg("theta"));
  m.def("bures_entanglement_2q", &bures_entanglement_2q, py::arg("theta"));

  m.def(
      "fidelity",
      [](const Matrix& rho0, const Matrix& rhoT, const std::optional<Matrix>& u) {
        const DensityMatrix r0 = as_density(rho0);
        return fidelity(r0, as_unitary(u, r0.qubits()), as_density(rhoT));
      },
      py::arg("rho0"), py::arg("rhoT"), py::arg("u") = py::none());

  m.def(
      "local_gradient",
      [](const Matrix& rho0, const Matrix& rhoT, const std::optional<Matrix>& u) {
        const DensityMatrix r0 = as_density(rho0);
        return gradient_local(r0, as_unitary(u, r0.qubits()), as_density(rhoT)).matrix();
      },
      py::arg("rho0"), py::arg("rhoT"), py::arg("u") = py::none());

  m.def(
      "local_hessian",
      [](const Matrix& rho0, const Matrix& rhoT, const std::optional<Matrix>& u) {
        const DensityMatrix r0 = as_density(rho0);
        return spectrum_dict(hessian_matrix_local(r0, as_unitary(u, r0.qubits()), as_density(rhoT)));
      },
      py::arg("rho0"), py::arg("rhoT"), py::arg("u") = py::none());

  m.def("hessian_spectrum_schmidt_pair", &hessian_spectrum_schmidt_pair, py::arg("theta"), py::arg("phi"));
  m.def("hessian_spectrum_submanifold", &hessian_spectrum_submanifold, py::arg("theta"), py::arg("x"));
  m.def("submanifold_state", [](double x) { return submanifold_state(x).matrix(); }, py::arg("x"));
  m.def(
      "critical_residual", [](const Matrix& rho, double theta) { return critical_residual(as_density(rho), theta); },
      py::arg("rho"), py::arg("theta"));

  m.def(
      "run_flow",
      [](const Matrix& rho0, const Matrix& rhoT, const std::optional<Matrix>& u0, std::uint64_t seed, int max_steps,
         double grad_tol, bool saddle_kicks) {
        const DensityMatrix r0 = as_density(rho0);
        return run_flow(r0, as_density(rhoT), as_unitary(u0, r0.qubits()),
                        make_config(seed, max_steps, grad_tol, saddle_kicks));
      },
      py::arg("rho0"), py::arg("rhoT"), py::arg("u0") = py::none(), py::arg("seed") = 0,
      py::arg("max_steps") = FlowConfig{}.max_steps, py::arg("grad_tol") = FlowConfig{}.grad_tol,
      py::arg("saddle_kicks") = true);

  m.def(
      "limiting_state",
      [](const FlowTrace& t, const Matrix& rho0) { return limiting_state(t, as_density(rho0)).matrix(); },
      py::arg("trace"), py::arg("rho0"));

  m.def(
      "extract_schmidt",
      [](const Vector& psi, std::uint64_t seed, int restarts, int max_steps) {
        ExtractOptions opts;
        opts.restarts = restarts;
        return extract_schmidt(PureState::normalized(psi), make_config(seed, max_steps, FlowConfig{}.grad_tol, true),
                               opts);
      },
      py::arg("psi"), py::arg("seed") = 0, py::arg("restarts") = ExtractOptions{}.restarts,
      py::arg("max_steps") = FlowConfig{}.max_steps);

  m.def(
      "bures_entanglement",
      [](const SchmidtForm& f) {
        const BuresResult b = bures_entanglement_nq(f);
        return py::make_tuple(b.value, b.reliable);
      },
      py::arg("form"));

  m.def(
      "schmidt_oracle_2q",
      [](const Vector& psi) {
        const SchmidtOracle2q o = schmidt_oracle_2q(PureState::normalized(psi));
        return py::make_tuple(o.theta, Eigen::Vector2d(o.coefficients), o.frame.factors());
      },
      py::arg("psi"));

  m.def(
      "rank1_oracle",
      [](const Vector& psi, int restarts, std::uint64_t seed) {
        const Rank1Result r = rank1_oracle_nq(PureState::normalized(psi), restarts, seed);
        return py::make_tuple(r.lambda1, r.product_state.amplitudes());
      },
      py::arg("psi"), py::arg("restarts") = 8, py::arg("seed") = 0);

  m.def("read_state_file", [](const std::filesystem::path& p) { return read_state_file(p).amplitudes(); },
        py::arg("path"));
  m.def(
      "write_state_file",
      [](const std::filesystem::path& p, const Vector& psi) { write_state_file(p, PureState::normalized(psi)); },
      py::arg("path"), py::arg("psi"));

  m.def(
      "reproduce",
      [](const std::string& scenario, const std::filesystem::path& out_dir, std::uint64_t seed) {
        const ReproduceReport r = reproduce(scenario, out_dir, seed);
        py::list checks;
        for (const auto& c : r.checks) {
          checks.append(py::dict(py::arg("name") = c.name, py::arg("value") = c.value,
                                 py::arg("expected") = c.expected, py::arg("tolerance") = c.tolerance,
                                 py::arg("pass") = c.pass));
        }
        return py::dict(py::arg("scenario") = r.scenario, py::arg("passed") = r.passed(), py::arg("checks") = checks,
                        py::arg("notes") = r.notes, py::arg("files") = r.files);
      },
      py::arg("scenario"), py::arg("out_dir"), py::arg("seed") = 0);
  m.def("reproduce_scenarios", [] {
    std::vector<std::string> v;
    for (auto s : reproduce_scenarios()) v.emplace_back(s);
    return v;
  });
}
