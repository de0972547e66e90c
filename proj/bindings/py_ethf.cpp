#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ethf/entanglement.hpp"
#include "ethf/experiments.hpp"
#include "ethf/fock.hpp"
#include "ethf/goe.hpp"
#include "ethf/report_io.hpp"
#include "ethf/rng.hpp"
#include "ethf/thermal.hpp"

namespace py = pybind11;
using namespace ethf;

namespace {

EigenstateSpec make_spec(const std::vector<int>& occupied) {
  EigenstateSpec spec;
  spec.occupied = occupied;
  return spec;
}

Subsystem make_subsystem(const std::vector<int>& sites) {
  Subsystem sub;
  sub.sites = sites;
  return sub;
}

}  // namespace

PYBIND11_MODULE(_ethf, m) {
  m.doc() = "random free-fermion ensemble toolkit";

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int n, double alpha, double eta) {
             return ModelParams{n, alpha, eta};
           }),
           py::arg("n_sites"), py::arg("alpha"), py::arg("eta"))
      .def_readwrite("n_sites", &ModelParams::n_sites)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("eta", &ModelParams::eta)
      .def("radius", &ModelParams::radius)
      .def("validate", &ModelParams::validate);

  py::class_<FreeFermionModel>(m, "FreeFermionModel")
      .def_readonly("params", &FreeFermionModel::params)
      .def_readonly("energies", &FreeFermionModel::energies)
      .def_readonly("modes", &FreeFermionModel::modes)
      .def_readonly("spectrum_flagged", &FreeFermionModel::spectrum_flagged);

  py::class_<CorrelationMatrix>(m, "CorrelationMatrix")
      .def("dim", &CorrelationMatrix::dim)
      .def("trace", &CorrelationMatrix::trace)
      .def("dense", &CorrelationMatrix::dense)
      .def("__getitem__", [](const CorrelationMatrix& c, std::pair<int, int> ij) {
        return c(ij.first, ij.second);
      });

  py::class_<ThermalAverages>(m, "ThermalAverages")
      .def_readonly("beta", &ThermalAverages::beta)
      .def_readonly("n_mean", &ThermalAverages::n_mean)
      .def_readonly("n_sq_mean", &ThermalAverages::n_sq_mean);

  m.def("sample_goe",
        [](int n, double sigma, std::uint64_t seed) { return sample_goe(n, sigma, seed).dense(); },
        py::arg("n"), py::arg("sigma"), py::arg("seed"));
  m.def("semicircle_pdf", &semicircle_pdf, py::arg("lam"), py::arg("radius"));
  m.def("semicircle_cdf", &semicircle_cdf, py::arg("lam"), py::arg("radius"));
  m.def("semicircle_moment", &semicircle_moment, py::arg("k"), py::arg("radius"));

  m.def("build_model", &build_model, py::arg("params"), py::arg("seed"));
  m.def("sample_occupation",
        [](int n, int np, std::uint64_t seed) { return sample_occupation(n, np, seed).occupied; },
        py::arg("n_sites"), py::arg("n_particles"), py::arg("seed"));
  m.def("eigenstate_energy",
        [](const FreeFermionModel& model, const std::vector<int>& occupied) {
          return eigenstate_energy(model, make_spec(occupied));
        },
        py::arg("model"), py::arg("occupied"));
  m.def("correlation_matrix",
        [](const FreeFermionModel& model, const std::vector<int>& occupied) {
          return correlation_matrix(model, make_spec(occupied));
        },
        py::arg("model"), py::arg("occupied"));

  m.def("fermi_occupation", &fermi_occupation, py::arg("energy"), py::arg("beta"));
  m.def("avg_occupation", &avg_occupation, py::arg("params"), py::arg("beta"),
        py::arg("order") = 256);
  m.def("avg_occupation_high_t", &avg_occupation_high_t, py::arg("params"), py::arg("beta"));
  m.def("avg_occupation_low_t", &avg_occupation_low_t, py::arg("params"), py::arg("beta"));
  m.def("bessel_i1", &bessel_i1, py::arg("x"));
  m.def("thermal_correlation_matrix", &thermal_correlation_matrix, py::arg("model"),
        py::arg("beta"));
  m.def("effective_beta", &effective_beta, py::arg("params"), py::arg("filling"),
        py::arg("order") = 256);

  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def("entanglement_entropy",
        [](const CorrelationMatrix& c, const std::vector<int>& sites) {
          return entanglement_entropy(c, make_subsystem(sites));
        },
        py::arg("correlation"), py::arg("sites"));
  m.def("exact_reduced_entropy",
        [](const FreeFermionModel& model, const std::vector<int>& occupied,
           const std::vector<int>& sites) {
          return exact_reduced_entropy(model, make_spec(occupied), make_subsystem(sites));
        },
        py::arg("model"), py::arg("occupied"), py::arg("sites"));
  m.def("predicted_entropy_single", &predicted_entropy_single, py::arg("n_sites"), py::arg("m"));
  m.def("predicted_entropy_multi", &predicted_entropy_multi, py::arg("n_sites"),
        py::arg("n_particles"), py::arg("m"));

  py::class_<FockSector>(m, "FockSector")
      .def_readonly("n_sites", &FockSector::n_sites)
      .def_readonly("n_particles", &FockSector::n_particles)
      .def_readonly("basis", &FockSector::basis)
      .def("dim", &FockSector::dim)
      .def("index_of", &FockSector::index_of);

  m.def("binomial", &binomial, py::arg("n"), py::arg("k"));
  m.def("build_sector", &build_sector, py::arg("n_sites"), py::arg("n_particles"),
        py::arg("cap") = 1000000);
  m.def("hopping_element",
        [](std::uint32_t state, int i, int j) -> py::object {
          const auto hop = hopping_element(state, i, j);
          if (!hop) return py::none();
          return py::make_tuple(hop->state, hop->sign);
        },
        py::arg("state"), py::arg("i"), py::arg("j"));
  m.def("sector_operator_dense",
        [](const FockSector& sector, int i, int j) {
          return sector_number_operator(sector, i, j).dense();
        },
        py::arg("sector"), py::arg("i"), py::arg("j"));
  m.def("sample_haar_vector", &sample_haar_vector, py::arg("dim"), py::arg("seed"));
  m.def("random_state_correlation", &random_state_correlation, py::arg("sector"), py::arg("psi"));
  m.def("match_etabar", &match_etabar, py::arg("params"), py::arg("n_particles"));

  py::enum_<ExperimentMode>(m, "ExperimentMode")
      .value("eth_correlators", ExperimentMode::eth_correlators)
      .value("entropy_scan", ExperimentMode::entropy_scan)
      .value("thermal_compare", ExperimentMode::thermal_compare)
      .value("random_fock_compare", ExperimentMode::random_fock_compare)
      .value("spectrum_stats", ExperimentMode::spectrum_stats);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("mode", &ExperimentConfig::mode)
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("np", &ExperimentConfig::np)
      .def_readwrite("filling", &ExperimentConfig::filling)
      .def_readwrite("alpha", &ExperimentConfig::alpha)
      .def_readwrite("eta", &ExperimentConfig::eta)
      .def_readwrite("beta", &ExperimentConfig::beta)
      .def_readwrite("realizations", &ExperimentConfig::realizations)
      .def_readwrite("sizes", &ExperimentConfig::sizes)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("workers", &ExperimentConfig::workers)
      .def_readwrite("include_flagged", &ExperimentConfig::include_flagged)
      .def_readwrite("quadrature_order", &ExperimentConfig::quadrature_order)
      .def_readwrite("sector_cap", &ExperimentConfig::sector_cap)
      .def("validate", &ExperimentConfig::validate);

  py::class_<ReportRecord>(m, "ReportRecord")
      .def_readonly("name", &ReportRecord::name)
      .def_readonly("samples", &ReportRecord::samples)
      .def_readonly("measured_mean", &ReportRecord::measured_mean)
      .def_readonly("measured_variance", &ReportRecord::measured_variance)
      .def_readonly("standard_error", &ReportRecord::standard_error)
      .def_readonly("predicted", &ReportRecord::predicted)
      .def_readonly("prediction_eq", &ReportRecord::prediction_eq)
      .def_readonly("z", &ReportRecord::z)
      .def_readonly("flagged", &ReportRecord::flagged)
      .def_readonly("note", &ReportRecord::note);

  py::class_<EnsembleReport>(m, "EnsembleReport")
      .def_readonly("schema_version", &EnsembleReport::schema_version)
      .def_readonly("config", &EnsembleReport::config)
      .def_readonly("excluded_realizations", &EnsembleReport::excluded_realizations)
      .def_readonly("flagged_realizations", &EnsembleReport::flagged_realizations)
      .def_readonly("wall_seconds", &EnsembleReport::wall_seconds)
      .def_readonly("records", &EnsembleReport::records)
      .def("find",
           [](const EnsembleReport& report, const std::string& name) -> py::object {
             const ReportRecord* rec = report.find(name);
             if (!rec) return py::none();
             return py::cast(*rec);
           },
           py::arg("name"));

  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("report_json", &report_json, py::arg("report"));
  m.def("summary_table", &summary_table, py::arg("report"));
  m.def("format_double", &format_double, py::arg("x"));
}
