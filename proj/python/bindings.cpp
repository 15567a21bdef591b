#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlocality/errors.hpp"
#include "qlocality/io.hpp"
#include "qlocality/locality.hpp"
#include "qlocality/quantum.hpp"
#include "qlocality/separability.hpp"

namespace py = pybind11;
using namespace qlocality;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray& a) {
    if (a.ndim() != 2) throw ShapeError("expected a 2-d array");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return ComplexMatrix(rows, cols, std::vector<Complex>(a.data(), a.data() + rows * cols));
}

ComplexArray to_array(const ComplexMatrix& m) {
    ComplexArray out({m.rows(), m.cols()});
    std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
    return out;
}

DensityOperator to_state(const ComplexArray& a, std::pair<std::size_t, std::size_t> dims, double tol) {
    return DensityOperator(to_matrix(a), dims.first, dims.second, tol);
}

BellKind parse_kind(const std::string& k) {
    if (k == "phi+") return BellKind::PhiPlus;
    if (k == "phi-") return BellKind::PhiMinus;
    if (k == "psi+") return BellKind::PsiPlus;
    if (k == "psi-") return BellKind::PsiMinus;
    throw DomainError("unknown Bell state \"" + k + "\"");
}

// Behaviors cross the boundary as arrays of shape (settingsA, settingsB, outcomesA, outcomesB).
BehaviorTable to_behavior(const RealArray& a) {
    if (a.ndim() != 4) throw ShapeError("behavior must have shape (sA, sB, oA, oB)");
    const Scenario s{static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                     static_cast<std::size_t>(a.shape(2)), static_cast<std::size_t>(a.shape(3))};
    return BehaviorTable(s, std::vector<double>(a.data(), a.data() + a.size()));
}

RealArray to_array(const BehaviorTable& b) {
    const auto& s = b.scenario();
    RealArray out({s.settingsA, s.settingsB, s.outcomesA, s.outcomesB});
    std::copy(b.values().begin(), b.values().end(), out.mutable_data());
    return out;
}

std::vector<ProjectiveMeasurement> qubit_settings(const std::vector<std::array<double, 3>>& dirs) {
    std::vector<ProjectiveMeasurement> out;
    for (const auto& d : dirs) out.push_back(ProjectiveMeasurement::qubit_direction(d));
    return out;
}

py::dict report(const io::Json& j) {
    return py::module_::import("json").attr("loads")(j.dump()).cast<py::dict>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Separability, CHSH and local-hidden-variable analysis of two-party states";

    auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", base.ptr());

    m.def("werner_state", [](double p) { return to_array(werner_state(p).matrix()); }, py::arg("p"));
    m.def("bell_state", [](const std::string& kind) { return to_array(bell_state(parse_kind(kind)).matrix()); },
          py::arg("kind") = "psi-");
    m.def("random_density", [](std::size_t dim, std::uint64_t seed) { return to_array(random_density(dim, seed).matrix()); },
          py::arg("dim"), py::arg("seed") = kDefaultSeed);
    m.def("partial_transpose",
          [](const ComplexArray& a, std::size_t dimA, std::size_t dimB) {
              return to_array(partial_transpose(to_matrix(a), dimA, dimB, Party::B));
          },
          py::arg("matrix"), py::arg("dimA"), py::arg("dimB"));
    m.def("eigenvalues", [](const ComplexArray& a) { return hermitian_eigenvalues(to_matrix(a)); }, py::arg("matrix"));

    m.def("ppt_test",
          [](const ComplexArray& rho, std::pair<std::size_t, std::size_t> dims, double tol) {
              return report(io::to_json(ppt_test(to_state(rho, dims, tol), tol)));
          },
          py::arg("rho"), py::arg("dims") = std::pair<std::size_t, std::size_t>{2, 2},
          py::arg("tol") = kDefaultTolerance);
    m.def("chsh_max",
          [](const ComplexArray& rho) { return chsh_max(to_state(rho, {2, 2}, kDefaultTolerance)); },
          py::arg("rho"));
    m.def("chsh_optimum",
          [](const ComplexArray& rho) { return report(io::to_json(chsh_optimum(to_state(rho, {2, 2}, kDefaultTolerance)))); },
          py::arg("rho"));
    m.def("qubit_behavior",
          [](const ComplexArray& rho, const std::vector<std::array<double, 3>>& a,
             const std::vector<std::array<double, 3>>& b) {
              return to_array(behavior_from_state(to_state(rho, {2, 2}, kDefaultTolerance),
                                                  qubit_settings(a), qubit_settings(b)));
          },
          py::arg("rho"), py::arg("directionsA"), py::arg("directionsB"));
    m.def("chsh_value", [](const RealArray& b) { return chsh_value(to_behavior(b)); }, py::arg("behavior"));
    m.def("no_signaling_residual", [](const RealArray& b) { return no_signaling_residual(to_behavior(b)); },
          py::arg("behavior"));
    m.def("lhv_membership",
          [](const RealArray& b, double tol) { return report(io::to_json(lhv_membership(to_behavior(b), tol))); },
          py::arg("behavior"), py::arg("tol") = kLpTolerance);

    m.def("werner_ppt_threshold", &werner_ppt_threshold, py::arg("tol") = 1e-9);
    m.def("werner_chsh_threshold", &werner_chsh_threshold, py::arg("tol") = 1e-9);
    m.def("scan_werner",
          [](const std::vector<double>& grid, double tol) {
              return report(io::to_json(scan_family(StateFamily::werner(), grid, {tol, 1e-6})));
          },
          py::arg("grid"), py::arg("tol") = kDefaultTolerance);

    m.def("simulate",
          [](const std::string& model_json, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
              const auto model = io::model_from_json(io::parse(model_json));
              const auto r = sample_local_model(model, trials, seed, default_schedule(model.scenario()), workers);
              return report(io::to_json(r));
          },
          py::arg("model_json"), py::arg("trials"), py::arg("seed") = kDefaultSeed, py::arg("workers") = 1);
}
