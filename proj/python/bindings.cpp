#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/complex.h>
#include <pybind11/operators.h>

#include "streamkoop/batch.hpp"
#include "streamkoop/csv.hpp"
#include "streamkoop/errors.hpp"
#include "streamkoop/experiment.hpp"
#include "streamkoop/predictor.hpp"
#include "streamkoop/spectral.hpp"
#include "streamkoop/stream.hpp"
#include "streamkoop/systems.hpp"

namespace py = pybind11;
using namespace streamkoop;

namespace {

nlohmann::json parse_json(const std::string& text) {
  return text.empty() ? nlohmann::json::object() : nlohmann::json::parse(text);
}

SnapshotPairs simulate(const std::string& system, const std::string& params) {
  const auto doc = parse_json(params);
  switch (parse_system(system)) {
    case SystemKind::Vdp:
      return simulate_vdp(VanDerPolConfig::from_json(doc));
    case SystemKind::Ring:
      return simulate_ring(RingOscillatorConfig::from_json(doc));
    case SystemKind::Burgers:
      return simulate_burgers(BurgersConfig::from_json(doc));
    case SystemKind::CsvInput:
      break;
  }
  throw ContractError("simulate: csv-input is not a simulator");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Streaming Koopman operator identification";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ContractError>(m, "ContractError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  auto io = py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", numerical.ptr());
  py::register_exception<ParseError>(m, "ParseError", io.ptr());

  m.def("pinv", &pinv, py::arg("a"), py::arg("rcond") = kDefaultRcond);
  m.def("lstsq", &lstsq, py::arg("a"), py::arg("b"), py::arg("rcond") = kDefaultRcond);
  m.def("eig", [](const Matrix& a) {
    const auto e = eig(a);
    return py::make_tuple(e.eigenvalues, e.right, e.left);
  }, py::arg("a"), "Returns (eigenvalues, right eigenvectors, left eigenvectors).");

  py::class_<Dictionary>(m, "Dictionary")
      .def_static("linear", &Dictionary::linear, py::arg("state_dim"))
      .def_static("gaussian_rbf", &Dictionary::gaussian_rbf, py::arg("centers"), py::arg("sigma"),
                  py::arg("include_state") = false)
      .def_static("rbf_from_data", &Dictionary::rbf_from_data, py::arg("states"), py::arg("count"),
                  py::arg("sigma"), py::arg("seed"), py::arg("include_state") = false)
      .def_property_readonly("state_dim", &Dictionary::state_dim)
      .def_property_readonly("feature_dim", &Dictionary::feature_dim)
      .def_property_readonly("centers", &Dictionary::centers)
      .def_property_readonly("sigma", &Dictionary::sigma)
      .def_property_readonly("kind", [](const Dictionary& d) { return to_string(d.kind()); })
      .def("lift", &Dictionary::lift, py::arg("x"))
      .def("lift_batch", &Dictionary::lift_batch, py::arg("states"))
      .def("to_json", [](const Dictionary& d) { return d.to_json().dump(); })
      .def_static("from_json", [](const std::string& s) { return Dictionary::from_json(parse_json(s)); })
      .def(py::self == py::self);

  py::class_<SnapshotPairs>(m, "SnapshotPairs")
      .def(py::init<Matrix, Matrix>(), py::arg("past"), py::arg("future"))
      .def_static("from_trajectory", &SnapshotPairs::from_trajectory, py::arg("states"))
      .def_property_readonly("past", &SnapshotPairs::past)
      .def_property_readonly("future", &SnapshotPairs::future)
      .def_property_readonly("state_dim", &SnapshotPairs::state_dim)
      .def("__len__", &SnapshotPairs::size)
      .def("head", &SnapshotPairs::head, py::arg("count"))
      .def("trajectory", &SnapshotPairs::trajectory);

  py::class_<KoopmanModel>(m, "KoopmanModel")
      .def(py::init<Matrix, Dictionary, Index, double>(), py::arg("operator"), py::arg("dictionary"),
           py::arg("sample_count") = 0, py::arg("regularization") = 0.0)
      .def_property_readonly("matrix", &KoopmanModel::matrix)
      .def_property_readonly("dictionary", &KoopmanModel::dictionary)
      .def_property_readonly("sample_count", &KoopmanModel::sample_count)
      .def_property_readonly("regularization", &KoopmanModel::regularization)
      .def("to_json", [](const KoopmanModel& k) { return k.to_json().dump(); })
      .def_static("from_json", [](const std::string& s) { return KoopmanModel::from_json(parse_json(s)); });

  m.def("edmd_fit", &edmd_fit, py::arg("data"), py::arg("dictionary"), py::arg("rcond") = kDefaultRcond);
  m.def("ridge_fit", &ridge_fit, py::arg("data"), py::arg("dictionary"), py::arg("delta"));
  m.def("dmd_fit", &dmd_fit, py::arg("data"), py::arg("rcond") = kDefaultRcond);

  py::class_<StreamState>(m, "StreamState")
      .def(py::init<Dictionary, double>(), py::arg("dictionary"), py::arg("delta") = kDefaultDelta)
      .def("update", &StreamState::update, py::arg("x"), py::arg("y"))
      .def("update_lifted", &StreamState::update_lifted, py::arg("a"), py::arg("b"))
      .def("current_operator", &StreamState::current_operator)
      .def("operator_matrix", &StreamState::operator_matrix)
      .def_property_readonly("phi_inv", &StreamState::phi_inv)
      .def_property_readonly("z", &StreamState::z)
      .def_property_readonly("count", &StreamState::count)
      .def_property_readonly("delta", &StreamState::delta)
      .def("to_json", [](const StreamState& s) { return s.to_json().dump(); })
      .def_static("from_json", [](const std::string& s) { return StreamState::from_json(parse_json(s)); });

  m.def("fit_stream", [](const SnapshotPairs& data, const Dictionary& d, double delta, Index every) {
    std::vector<std::pair<Index, KoopmanModel>> out;
    for (auto& cp : fit_stream(data, d, delta, every)) out.emplace_back(cp.count, std::move(cp.model));
    return out;
  }, py::arg("data"), py::arg("dictionary"), py::arg("delta") = kDefaultDelta, py::arg("snapshot_every") = 1);

  py::class_<Predictor>(m, "Predictor")
      .def(py::init<KoopmanModel, Matrix>(), py::arg("model"), py::arg("output_map"))
      .def_static("fit", &Predictor::fit, py::arg("states"), py::arg("model"), py::arg("rcond") = kDefaultRcond)
      .def_property_readonly("output_map", &Predictor::output_map)
      .def("predict", &Predictor::predict, py::arg("x0"), py::arg("steps"));
  m.def("rolling_mse", &rolling_mse, py::arg("truth"), py::arg("pred"));
  m.def("per_step_mse", &per_step_mse, py::arg("truth"), py::arg("pred"));

  m.def("spectrum", [](const KoopmanModel& model) { return spectrum(model).eigenvalues; }, py::arg("model"));
  m.def("eigenfunction_on_grid",
        [](const KoopmanModel& model, Index which, std::array<double, 2> x1, Index n1, std::array<double, 2> x2,
           Index n2) {
          const auto f = eigenfunction_on_grid(model, which, GridSpec{x1[0], x1[1], n1, x2[0], x2[1], n2});
          return py::make_tuple(f.grid_x1, f.grid_x2, f.values, f.eigenvalue);
        },
        py::arg("model"), py::arg("which") = 0, py::arg("x1_range") = std::array<double, 2>{-3.0, 3.0},
        py::arg("x1_count") = 100, py::arg("x2_range") = std::array<double, 2>{-3.0, 3.0},
        py::arg("x2_count") = 100, "Returns (grid_x1, grid_x2, values, eigenvalue).");

  m.def("simulate", &simulate, py::arg("system"), py::arg("params_json") = "");
  m.def("ring_laplacian", &ring_laplacian, py::arg("n"));
  m.def("save_snapshots_csv", [](const std::string& path, const SnapshotPairs& data) {
    save_snapshots_csv(path, data);
  }, py::arg("path"), py::arg("data"));
  m.def("ingest_csv", [](const std::string& path) { return ingest_csv(path); }, py::arg("path"));
}
