#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "llull/io.hpp"

namespace py = pybind11;
using namespace llull;

namespace {

py::object as_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

LlullMatrix make_matrix(const std::vector<std::string>& labels,
                        const std::vector<std::vector<double>>& rows, double tol) {
  return LlullMatrix::from_rows(OptionSet(labels), rows, tol);
}

Subset indices(const OptionSet& o, const std::vector<std::string>& labels) {
  Subset out;
  for (const auto& l : labels) out.push_back(o.index_of(l));
  return out;
}

RatesConfig rates_config(double tol, std::size_t max_iter) {
  RatesConfig cfg;
  cfg.solver.tol = tol;
  cfg.solver.max_iter = max_iter;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_llull, m) {
  m.doc() = "Fraction-like rates from ballots and Llull matrices";

  static py::exception<Error> error(m, "LlullError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::tuple args = py::make_tuple(std::string(errc_name(e.code())), e.what());
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  py::class_<LlullMatrix>(m, "Matrix")
      .def(py::init(&make_matrix), py::arg("options"), py::arg("rows"),
           py::arg("tol") = LlullMatrix::kDefaultTolerance)
      .def_property_readonly("options",
                             [](const LlullMatrix& x) { return x.options().labels(); })
      .def("rows", &LlullMatrix::rows)
      .def("__getitem__",
           [](const LlullMatrix& x, std::pair<std::string, std::string> k) {
             return x(x.options().index_of(k.first), x.options().index_of(k.second));
           })
      .def("__len__", &LlullMatrix::size)
      .def("__eq__", [](const LlullMatrix& a, const LlullMatrix& b) { return a == b; })
      .def("is_complete", &LlullMatrix::is_complete, py::arg("tol") = 1e-12)
      .def("is_vanishing", &LlullMatrix::is_vanishing)
      .def("to_json", [](const LlullMatrix& x) { return to_json(x).dump(); })
      .def("to_csv", &matrix_csv);

  py::class_<BallotSet>(m, "BallotSet")
      .def_property_readonly("options",
                             [](const BallotSet& b) { return b.options().labels(); })
      .def_property_readonly("total_weight", &BallotSet::total_weight)
      .def("__len__", [](const BallotSet& b) { return b.ballots().size(); })
      .def("__str__", &format_ballots);

  py::class_<ProjectionResult>(m, "Projection")
      .def_readonly("matrix", &ProjectionResult::matrix)
      .def_readonly("fixed_point", &ProjectionResult::fixed_point)
      .def_property_readonly("order", [](const ProjectionResult& r) {
        std::vector<std::string> out;
        for (auto i : r.order) out.push_back(r.matrix.options().label(i));
        return out;
      });

  py::class_<RateReport>(m, "RateReport")
      .def_property_readonly("options",
                             [](const RateReport& r) { return r.fraction.options.labels(); })
      .def_property_readonly("fraction", [](const RateReport& r) { return r.fraction.values; })
      .def_property_readonly("rank_like", [](const RateReport& r) { return r.rank_like.values; })
      .def_readonly("projection", &RateReport::projection)
      .def_readonly("warnings", &RateReport::warnings)
      .def_property_readonly("diagnostics",
                             [](const RateReport& r) { return as_python(to_json(r.diagnostics)); })
      .def("to_dict", [](const RateReport& r) { return as_python(to_json(r)); });

  m.def("parse_ballots", [](const std::string& text) { return parse_ballots(text); });
  m.def("parse_matrix", [](const std::string& text, double tol) { return parse_matrix(text, tol); },
        py::arg("text"), py::arg("tol") = LlullMatrix::kDefaultTolerance);
  m.def("aggregate",
        [](const BallotSet& b, const std::string& ties) {
          return aggregate(b, parse_tie_policy(ties));
        },
        py::arg("ballots"), py::arg("ties") = "half");
  m.def("mean_preference_scores",
        [](const LlullMatrix& x) { return mean_preference_scores(x).values; });
  m.def("mean_ranks", [](const LlullMatrix& x) { return mean_ranks(x).values; });
  m.def("indirect_scores", [](const LlullMatrix& x) {
    const auto s = indirect_scores(x);
    std::vector<std::vector<double>> out(x.size(), std::vector<double>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) out[i][j] = s(i, j);
    }
    return out;
  });
  m.def("analyze", [](const LlullMatrix& x) { return as_python(to_json(analyze(x), x.options())); });
  m.def("check_clc", [](const LlullMatrix& x, const std::vector<std::string>& order) {
    return as_python(to_json(check_clc(x, indices(x.options(), order)), x.options()));
  });
  m.def("clc_project", [](const LlullMatrix& x) { return clc_project(x); });
  m.def("solve",
        [](const LlullMatrix& x, double tol, std::size_t max_iter) {
          return as_python(to_json(solve(x, rates_config(tol, max_iter).solver)));
        },
        py::arg("matrix"), py::arg("tol") = 1e-12, py::arg("max_iter") = 100000);
  m.def("fraction_like_rates",
        [](const LlullMatrix& x, double tol, std::size_t max_iter) {
          return fraction_like_rates(x, rates_config(tol, max_iter));
        },
        py::arg("matrix"), py::arg("tol") = 1e-12, py::arg("max_iter") = 100000);
  m.def("eigenvector_rates", [](const LlullMatrix& x) { return eigenvector_rates(x).values; });
  m.def("check_clone_consistency",
        [](const BallotSet& b, const std::vector<std::string>& clones, const std::string& rep) {
          return as_python(to_json(check_clone_consistency(b, indices(b.options(), clones), rep)));
        });
  m.def("check_decomposition", [](const BallotSet& b, const RateReport& r) {
    return as_python(to_json(check_decomposition(b, r)));
  });
}
