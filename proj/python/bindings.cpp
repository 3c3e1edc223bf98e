#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "risrelay/baselines.hpp"
#include "risrelay/sim_harness.hpp"

namespace py = pybind11;
using namespace risrelay;

namespace {

PhaseVector phases_from(const std::vector<double>& angles) {
  return PhaseVector::from_angles(angles);
}

py::dict row_dict(const ResultRow& r) {
  py::dict d;
  d["mode"] = r.mode;
  d["solver"] = r.solver;
  d["phase_solver"] = r.phase_solver;
  d["sweep_value"] = r.sweep_value;
  d["trial_index"] = r.trial_index;
  d["seed"] = r.seed;
  d["total_power_mw"] = r.total_power_mw;
  d["total_power_dbm"] = r.total_power_dbm;
  d["outer_iterations"] = r.outer_iterations;
  d["converged"] = r.converged;
  d["achieved_min_rate"] = r.achieved_min_rate;
  return d;
}

SolverOptions options_for(const std::string& solver, int max_outer) {
  SolverOptions o;
  o.relay_solver = parse_relay_solver(solver);
  o.max_outer = max_outer;
  return o;
}

}  // namespace

PYBIND11_MODULE(_risrelay, m) {
  m.doc() = "RIS and decode-and-forward relay transmit power minimisation";

  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<SingularError>(m, "SingularError", PyExc_RuntimeError);
  py::register_exception<SearchSpaceError>(m, "SearchSpaceError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::enum_<Scheme>(m, "Scheme")
      .value("HalfDuplex", Scheme::HalfDuplex)
      .value("FullDuplex", Scheme::FullDuplex)
      .value("RisOnly", Scheme::RisOnly);

  py::class_<FadingParams>(m, "FadingParams")
      .def(py::init<>())
      .def_readwrite("rician_k", &FadingParams::rician_k)
      .def_readwrite("noise_power", &FadingParams::noise_power)
      .def_readwrite("alpha_los", &FadingParams::alpha_los)
      .def_readwrite("alpha_nlos", &FadingParams::alpha_nlos);

  py::class_<SystemGeometry>(m, "SystemGeometry")
      .def_static("make", &SystemGeometry::make, py::arg("M"), py::arg("N"), py::arg("K"),
                  py::arg("L"))
      .def_readonly("M", &SystemGeometry::M)
      .def_readonly("N", &SystemGeometry::N)
      .def_readonly("K", &SystemGeometry::K)
      .def_readonly("L", &SystemGeometry::L)
      .def_readwrite("bs_position", &SystemGeometry::bs_position)
      .def_readwrite("relay_position", &SystemGeometry::relay_position)
      .def_readwrite("ris_position", &SystemGeometry::ris_position);

  py::class_<ChannelSet>(m, "ChannelSet")
      .def_readwrite("H_TR", &ChannelSet::H_TR)
      .def_readwrite("H_TI", &ChannelSet::H_TI)
      .def_readwrite("H_IR", &ChannelSet::H_IR)
      .def_readwrite("h_T", &ChannelSet::h_T)
      .def_readwrite("h_R", &ChannelSet::h_R)
      .def_readwrite("h_I", &ChannelSet::h_I)
      .def_readwrite("noise_power", &ChannelSet::noise_power)
      .def_property_readonly("M", &ChannelSet::M)
      .def_property_readonly("N", &ChannelSet::N)
      .def_property_readonly("K", &ChannelSet::K)
      .def_property_readonly("L", &ChannelSet::L)
      .def("without_ris", &ChannelSet::without_ris);

  m.def("generate_scenario", &generate_scenario, py::arg("geometry"),
        py::arg("params") = FadingParams{}, py::arg("seed") = 1);

  py::class_<PhaseVector>(m, "PhaseVector")
      .def_static("identity", &PhaseVector::identity)
      .def_static("from_angles", &phases_from)
      .def("reflection", &PhaseVector::reflection)
      .def("angles", [](const PhaseVector& p) { return extract_phases(p); })
      .def_property_readonly("size", &PhaseVector::size);

  py::class_<WaterFilling>(m, "WaterFilling")
      .def_readonly("W", &WaterFilling::W)
      .def_readonly("powers", &WaterFilling::powers)
      .def_readonly("eigenvalues", &WaterFilling::eigenvalues)
      .def_readonly("water_level", &WaterFilling::water_level);
  m.def("svd_waterfilling", &svd_waterfilling, py::arg("H"), py::arg("noise_power"),
        py::arg("rate_target"), py::arg("num_columns"), py::arg("max_modes") = -1);
  m.def("relay_rate", &relay_rate, py::arg("H"), py::arg("W"), py::arg("noise_power"));

  m.def(
      "duality_beamforming",
      [](const CMatrix& rows, const std::vector<double>& noise, const std::vector<double>& targets) {
        return duality_beamforming(rows, noise, targets).U;
      },
      py::arg("rows"), py::arg("noise"), py::arg("targets"));
  m.def(
      "zero_forcing",
      [](const CMatrix& rows, const std::vector<double>& targets, const std::vector<double>& noise) {
        return zero_forcing(rows, targets, noise);
      },
      py::arg("rows"), py::arg("targets"), py::arg("noise"));

  py::class_<HalfDuplexSolution>(m, "HalfDuplexSolution")
      .def_readonly("W", &HalfDuplexSolution::W)
      .def_readonly("U", &HalfDuplexSolution::U)
      .def_readonly("theta1", &HalfDuplexSolution::theta1)
      .def_readonly("theta2", &HalfDuplexSolution::theta2)
      .def_readonly("total_power", &HalfDuplexSolution::total_power)
      .def_readonly("relay_rate", &HalfDuplexSolution::relay_rate)
      .def_readonly("user_rates", &HalfDuplexSolution::user_rates)
      .def_readonly("power_history", &HalfDuplexSolution::power_history)
      .def_readonly("converged", &HalfDuplexSolution::converged)
      .def_readonly("outer_iterations", &HalfDuplexSolution::outer_iterations);

  py::class_<FullDuplexSolution>(m, "FullDuplexSolution")
      .def_readonly("W", &FullDuplexSolution::W)
      .def_readonly("U", &FullDuplexSolution::U)
      .def_readonly("theta", &FullDuplexSolution::theta)
      .def_readonly("total_power", &FullDuplexSolution::total_power)
      .def_readonly("relay_rate", &FullDuplexSolution::relay_rate)
      .def_readonly("user_rates", &FullDuplexSolution::user_rates)
      .def_readonly("power_history", &FullDuplexSolution::power_history)
      .def_readonly("converged", &FullDuplexSolution::converged)
      .def_readonly("outer_iterations", &FullDuplexSolution::outer_iterations);

  py::class_<RisOnlySolution>(m, "RisOnlySolution")
      .def_readonly("W", &RisOnlySolution::W)
      .def_readonly("theta", &RisOnlySolution::theta)
      .def_readonly("total_power", &RisOnlySolution::total_power)
      .def_readonly("user_rates", &RisOnlySolution::user_rates)
      .def_readonly("power_history", &RisOnlySolution::power_history)
      .def_readonly("converged", &RisOnlySolution::converged)
      .def_readonly("outer_iterations", &RisOnlySolution::outer_iterations);

  py::class_<DiscreteSolution>(m, "DiscreteSolution")
      .def_readonly("bits", &DiscreteSolution::bits)
      .def_readonly("levels1", &DiscreteSolution::levels1)
      .def_readonly("levels2", &DiscreteSolution::levels2)
      .def_readonly("W", &DiscreteSolution::W)
      .def_readonly("U", &DiscreteSolution::U)
      .def_readonly("total_power", &DiscreteSolution::total_power)
      .def_readonly("power_history", &DiscreteSolution::power_history)
      .def_readonly("sweeps", &DiscreteSolution::sweeps)
      .def_readonly("evaluations", &DiscreteSolution::evaluations);

  m.def(
      "solve_half_duplex",
      [](const ChannelSet& ch, double rth, const std::string& solver, int max_outer) {
        return solve_half_duplex(ch, rth, options_for(solver, max_outer));
      },
      py::arg("channels"), py::arg("rate_threshold"), py::arg("solver") = "duality",
      py::arg("max_outer") = 50);
  m.def(
      "solve_full_duplex",
      [](const ChannelSet& ch, double rth, const std::string& solver, int max_outer) {
        return solve_full_duplex(ch, rth, options_for(solver, max_outer));
      },
      py::arg("channels"), py::arg("rate_threshold"), py::arg("solver") = "duality",
      py::arg("max_outer") = 50);
  m.def(
      "solve_ris_only",
      [](const ChannelSet& ch, double rth, int max_outer) {
        return solve_ris_only(ch, rth, options_for("duality", max_outer));
      },
      py::arg("channels"), py::arg("rate_threshold"), py::arg("max_outer") = 50);
  m.def(
      "solve_relay_only_half_duplex",
      [](const ChannelSet& ch, double rth, const std::string& solver) {
        return solve_relay_only_half_duplex(ch, rth, options_for(solver, 50));
      },
      py::arg("channels"), py::arg("rate_threshold"), py::arg("solver") = "duality");
  m.def(
      "solve_relay_only_full_duplex",
      [](const ChannelSet& ch, double rth, const std::string& solver) {
        return solve_relay_only_full_duplex(ch, rth, options_for(solver, 50));
      },
      py::arg("channels"), py::arg("rate_threshold"), py::arg("solver") = "duality");

  m.def(
      "quantize_levels",
      [](const std::vector<double>& angles, int bits) { return quantize_levels(angles, bits); },
      py::arg("angles"), py::arg("bits"));
  m.def(
      "evaluate_discrete",
      [](const ChannelSet& ch, Scheme scheme, int bits, const std::vector<int>& levels1,
         const std::vector<int>& levels2, double rth) {
        return evaluate_discrete(ch, scheme, bits, levels1, levels2, rth);
      },
      py::arg("channels"), py::arg("scheme"), py::arg("bits"), py::arg("levels1"),
      py::arg("levels2") = std::vector<int>{}, py::arg("rate_threshold") = 1.0);
  m.def(
      "successive_refinement",
      [](const ChannelSet& ch, Scheme scheme, double rth, int bits, const std::vector<int>& init1,
         const std::vector<int>& init2, int max_sweeps) {
        return successive_refinement(ch, scheme, rth, bits, init1, init2, {}, max_sweeps);
      },
      py::arg("channels"), py::arg("scheme"), py::arg("rate_threshold"), py::arg("bits"),
      py::arg("init1"), py::arg("init2") = std::vector<int>{}, py::arg("max_sweeps") = 3);
  m.def(
      "brute_force_oracle",
      [](const ChannelSet& ch, Scheme scheme, double rth, int bits) {
        return brute_force_oracle(ch, scheme, rth, bits);
      },
      py::arg("channels"), py::arg("scheme"), py::arg("rate_threshold"), py::arg("bits"));

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const ExperimentResult r = run_experiment(ExperimentConfig::from_json_text(config_json));
        py::list rows;
        for (const ResultRow& row : r.rows) rows.append(row_dict(row));
        return rows;
      },
      py::arg("config_json"),
      "Run a sweep from a flat JSON config; returns one dict per trial.");
  m.def(
      "normalize_config",
      [](const std::string& config_json) {
        return ExperimentConfig::from_json_text(config_json).to_json_text();
      },
      py::arg("config_json"));

  m.def("mw_to_dbm", &mw_to_dbm);
  m.def("dbm_to_mw", &dbm_to_mw);
}
