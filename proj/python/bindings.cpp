#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rankbm/experiments.hpp"
#include "rankbm/rbm_algebra.hpp"
#include "rankbm/stationary_laws.hpp"

namespace py = pybind11;
using namespace rankbm;

namespace {

py::array_t<double> to_array(const Matrix& m) {
  py::array_t<double> out({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), out.mutable_data());
  return out;
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict report_to_py(const experiments::VerdictReport& r) {
  return json_to_py(r.to_json()).cast<py::dict>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rank-based Brownian particle systems";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<StabilityError>(m, "StabilityError", PyExc_ValueError);
  py::register_exception<BoundError>(m, "BoundError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

  py::class_<DriftSpec>(m, "DriftSpec")
      .def(py::init<std::vector<double>, double>(), py::arg("prefix"), py::arg("tail"))
      .def_static("atlas", &DriftSpec::atlas)
      .def_static("driftless", &DriftSpec::driftless)
      .def_static("inverted_atlas", &DriftSpec::inverted_atlas)
      .def_static("named", [](const std::string& name) { return experiments::named_drift(name); })
      .def_property_readonly("prefix", &DriftSpec::prefix)
      .def_property_readonly("tail", &DriftSpec::tail)
      .def("drift", &DriftSpec::drift, py::arg("rank"))
      .def("truncate", &DriftSpec::truncate, py::arg("count"))
      .def("__eq__", [](const DriftSpec& a, const DriftSpec& b) { return a == b; })
      .def("__repr__", [](const DriftSpec& d) {
        return "DriftSpec(" + experiments::drift_to_json(d).dump() + ")";
      });

  m.def("stability_check", py::overload_cast<const DriftSpec&, std::size_t>(&stationary::stability_check),
        py::arg("spec"), py::arg("particles"));
  m.def("a_lower_bound", &stationary::a_lower_bound, py::arg("spec"));
  m.def("finite_stationary_rates",
        [](const DriftSpec& spec, std::size_t n) {
          return stationary::finite_stationary_rates(spec, n).rates();
        },
        py::arg("spec"), py::arg("particles"));
  m.def("infinite_rates",
        [](const DriftSpec& spec, double a, std::size_t depth, bool allow_degenerate) {
          return stationary::infinite_rates(spec, a, depth, allow_degenerate).rates();
        },
        py::arg("spec"), py::arg("a"), py::arg("depth") = stationary::kDefaultDepth,
        py::arg("allow_degenerate") = false);
  m.def("approximant",
        [](const DriftSpec& spec, double a, std::size_t mm) {
          const auto ap = stationary::approximant(spec, a, mm);
          py::dict d;
          d["drifts"] = ap.drifts;
          d["tail_drift"] = ap.tail_drift;
          d["rates"] = ap.rates;
          return d;
        },
        py::arg("spec"), py::arg("a"), py::arg("m"));
  m.def("sample_gaps",
        [](const std::vector<double>& rates, std::size_t count, std::uint64_t seed,
           std::uint64_t stream) {
          return to_array(stationary::sample_gaps(GapLaw(rates), count, {seed, stream}));
        },
        py::arg("rates"), py::arg("count"), py::arg("seed"), py::arg("stream") = 0);
  m.def("general_solution_residual", &rbm::general_solution_residual, py::arg("spec"),
        py::arg("a"), py::arg("n"));
  m.def("singularity_statistic",
        [](const std::vector<double>& gaps, const DriftSpec& spec, double a) {
          return stats::singularity_statistic(gaps, spec, a);
        },
        py::arg("gaps"), py::arg("spec"), py::arg("a"));
  m.def("ks_exponential",
        [](const std::vector<double>& samples, double rate) {
          const auto r = stats::ks_exponential(samples, rate);
          return py::make_tuple(r.statistic, r.p_value);
        },
        py::arg("samples"), py::arg("rate"));
  m.def("simulate_stationary",
        [](const std::vector<double>& drifts, const std::vector<double>& rates, double horizon,
           double dt, std::size_t trajectories, std::uint64_t seed) {
          sim::SimConfig c;
          c.drifts = drifts;
          c.initial_gaps = GapLaw(rates);
          c.horizon = horizon;
          c.dt = dt;
          c.trajectories = trajectories;
          c.rng = {seed, 0};
          for (std::size_t k = 0; k < drifts.size(); ++k) c.record.displacement_ranks.push_back(k);
          const auto result = sim::simulate_ensemble(c);
          py::dict d;
          d["names"] = result.raw.names;
          d["values"] = to_array(result.raw.values);
          return d;
        },
        py::arg("drifts"), py::arg("rates"), py::arg("horizon") = 1.0, py::arg("dt") = 1e-3,
        py::arg("trajectories") = 1, py::arg("seed") = 0);
  m.def("verify",
        [](const std::filesystem::path& config, std::optional<std::filesystem::path> out,
           std::optional<std::string> only) {
          const auto specs = experiments::load_config(config, out);
          py::list reports;
          for (const auto& r : experiments::run_suite(specs, only)) reports.append(report_to_py(r));
          return reports;
        },
        py::arg("config"), py::arg("out") = py::none(), py::arg("only") = py::none());
}
