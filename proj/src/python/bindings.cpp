#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsp/errors.hpp"
#include "qsp/harness.hpp"
#include "qsp/io.hpp"
#include "qsp/rmatrix.hpp"

namespace py = pybind11;
using namespace qsp;

namespace {

std::shared_ptr<const RootDatum> datum_of(const std::string& label) {
  return std::make_shared<const RootDatum>(parse_root_datum(label));
}

cplx hbar_of(double q) { return QParams(q).hbar(); }

std::string report_json(const Report& r) { return to_json(r).dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum symmetric pairs: representations, R- and K-matrices, monodromy and braid checks";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("root_datum", [](const std::string& label) { return root_datum_to_json(parse_root_datum(label)).dump(); },
        py::arg("algebra"), "Root datum as a JSON string");

  m.def(
      "check_diagram",
      [](const std::string& diagram_json) {
        const auto S = diagram_from_json(json::parse(diagram_json));
        json j = diagram_to_json(S);
        j["hermitian_type"] = to_string(hermitian_type(S).kind);
        return j.dump();
      },
      py::arg("diagram"), "Validate a Satake diagram given as JSON; raises InputError if not admissible");

  m.def(
      "list_diagrams",
      [](const std::string& type, int rank) {
        json a = json::array();
        for (auto& S : enumerate_admissible(parse_root_datum(type + std::to_string(rank)))) a.push_back(diagram_to_json(S));
        return a.dump();
      },
      py::arg("type"), py::arg("rank"));

  m.def(
      "irrep",
      [](const std::string& algebra, const IWeight& weight, double q) {
        const auto M = build_irrep(datum_of(algebra), weight, QParams(q));
        std::vector<CMat> K;
        for (int r = 0; r < M.D().rank(); ++r) K.push_back(M.Kr(r));
        py::dict d;
        d["E"] = M.E;
        d["F"] = M.F;
        d["K"] = K;
        d["relation_residual"] = relation_residuals(M).max();
        return d;
      },
      py::arg("algebra"), py::arg("weight"), py::arg("q") = 0.7);

  m.def(
      "rmatrix",
      [](const std::string& algebra, const IWeight& v, const IWeight& w, double q) {
        const auto D = datum_of(algebra);
        return rmat(build_irrep(D, v, QParams(q)), build_irrep(D, w, QParams(q))).matrix;
      },
      py::arg("algebra"), py::arg("v"), py::arg("w"), py::arg("q") = 0.7);

  m.def(
      "ybe_residual",
      [](const std::string& algebra, const IWeight& v, double q) { return ybe_residual(build_irrep(datum_of(algebra), v, QParams(q))); },
      py::arg("algebra"), py::arg("v"), py::arg("q") = 0.7);

  m.def("coideal_braid", &coideal_braid, py::arg("q"), py::arg("t"), "su2 K-matrix on V_{1/2} for the character chi_t");
  m.def(
      "lambda_from_trace",
      [](const CMat& C, double q) {
        const auto l = lambda_from_trace(C, q);
        return py::make_tuple(l.plus, l.minus, l.scalar);
      },
      py::arg("C"), py::arg("q"));
  m.def("t_of_lambda", &t_of_lambda, py::arg("q"), py::arg("lam"));
  m.def("lambda_of_t", &lambda_of_t, py::arg("q"), py::arg("t"));

  m.def(
      "kz_braid",
      [](double lambda, double q) {
        const auto T = split_tensors(su2_theta());
        return kz_braid(T, T.character(lambda), classical_irrep(1), hbar_of(q));
      },
      py::arg("lam"), py::arg("q") = 0.7, "su2 KZ braid on chi_lambda (x) V_{1/2}");

  m.def(
      "psi",
      [](const CMat& a, const CMat& b_plus, const CMat& b_minus) {
        MonodromyProblem P;
        P.a = a;
        P.b_plus = b_plus;
        P.b_minus = b_minus;
        const auto r = psi(P);
        return py::make_tuple(r.psi, r.spread, r.truncation_error);
      },
      py::arg("a"), py::arg("b_plus"), py::arg("b_minus"), "Connection matrix Psi with its match-point spread and tail bound");

  m.def(
      "vogan_e_matrix",
      [](double r, double q, int levels) {
        const auto M = build_Mr(r, QParams(q), levels);
        return e_matrix(M, build_irrep(datum_of("A1"), IWeight{1}, QParams(q)));
      },
      py::arg("r"), py::arg("q") = 0.7, py::arg("levels") = 20, "E on M_r (x) V_{1/2}, basis e_n (x) e_{+-}");

  m.def(
      "verify_rank_one", [](double q, double r, int levels) { return report_json(run_rank_one(q, r, levels)); },
      py::arg("q") = 0.7, py::arg("r") = 0.25, py::arg("levels") = 20);
  m.def(
      "verify_axioms", [](const std::string& source, double q) { return report_json(verify_axioms(source, q)); },
      py::arg("source"), py::arg("q") = 0.7);
  m.def(
      "verify_kz", [](double q) { return report_json(verify_kz(q)); }, py::arg("q") = 0.7);
}
