#include "ac/gallery.hpp"
#include "ac/io.hpp"
#include "ac/pipeline.hpp"
#include "ac/suites.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

ac::PipelineConfig config(double gamma2) {
    ac::PipelineConfig cfg;
    cfg.gamma2 = gamma2;
    return cfg;
}

py::tuple commute(const ac::CMat& A, const ac::CMat& B, double gamma2) {
    const ac::CommuteReport r = ac::commute_hermitian_pair(A, B, config(gamma2));
    return py::make_tuple(r.A_prime, r.B_prime, ac::to_json(r).dump());
}

}  // namespace

PYBIND11_MODULE(_acmat, m) {
    m.doc() = "Nearby commuting matrices: pipeline, bounds suites and gallery objects";

    m.def("op_norm", &ac::op_norm, py::arg("M"), "Operator 2-norm.");
    m.def("commutator", &ac::commutator, py::arg("A"), py::arg("B"), "AB - BA.");
    m.def("choose_exponents",
          [](double gamma2, bool finite_range) {
              const ac::Exponents e = ac::choose_exponents(gamma2, finite_range);
              return py::dict(py::arg("gamma0") = e.gamma0, py::arg("gamma1") = e.gamma1, py::arg("gamma") = e.gamma,
                              py::arg("finite_range") = e.finite_range);
          },
          py::arg("gamma2"), py::arg("finite_range") = true, "Exponent bookkeeping for a given gamma2.");
    m.def("_commute", &commute, py::arg("A"), py::arg("B"), py::arg("gamma2") = 1.0);
    m.def("_sweep",
          [](const ac::CMat& A0, const ac::CMat& B0, const ac::CMat& X, const ac::CMat& Y,
             std::vector<double> scales) { return ac::to_json(ac::sweep(A0, B0, X, Y, std::move(scales))).dump(); },
          py::arg("A0"), py::arg("B0"), py::arg("X"), py::arg("Y"), py::arg("scales"));
    m.def("_run_suite",
          [](const std::string& id, unsigned long long seed, int trials) {
              return ac::to_json(ac::run_suite(id, seed, trials)).dump();
          },
          py::arg("suite"), py::arg("seed") = 7, py::arg("trials") = 100);
    m.def("suite_ids", &ac::suite_ids, "Names accepted by run_suite.");
    m.def("voiculescu", &ac::voiculescu, py::arg("n"), "Clock and shift unitaries of size n.");
    m.def("_winding",
          [](const ac::CMat& U, const ac::CMat& V, const ac::CMat& Up, const ac::CMat& Vp, int steps) {
              return ac::to_json(ac::winding_number(U, V, Up, Vp, steps)).dump();
          },
          py::arg("U"), py::arg("V"), py::arg("Up"), py::arg("Vp"), py::arg("steps") = 512);
    m.def("quarter_tridiag",
          [](int n) {
              const ac::QuarterTridiag q = ac::quarter_tridiag(n);
              return py::make_tuple(q.J, q.leakage, q.top_eigenvalue);
          },
          py::arg("n"), "Returns (J, leakage vector, top eigenvalue).");
    m.def("tn_lift", [](const ac::CMat& A, int N) { return ac::tn_lift(A, N); }, py::arg("A"), py::arg("N"),
          "Symmetrized average of A over N tensor factors.");
    m.def("fnv1a", [](const ac::CMat& M) { return ac::hash_hex(ac::fnv1a(M)); }, py::arg("M"));
}
