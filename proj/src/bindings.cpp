#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "miw/csv_io.hpp"
#include "miw/density.hpp"
#include "miw/run_config.hpp"
#include "miw/scenarios.hpp"
#include "miw/stencil.hpp"

namespace py = pybind11;
using namespace miw;

namespace {

StencilCoefficients build_stencil_py(int order, const std::optional<std::vector<int>>& offsets) {
    const OffsetSet set = offsets ? OffsetSet(*offsets) : OffsetSet::symmetric(order / 2);
    return build_stencil(set, order);
}

PotentialSpec spec_from_strings(const std::string& kind, int order, const std::string& edge) {
    const EdgePolicy policy =
        edge == "one_sided" ? EdgePolicy::OneSidedStencil : EdgePolicy::SkipBoundaryTerms;
    if (kind == "toy") return PotentialSpec::toy();
    if (kind == "rational") return PotentialSpec::rational_smoothing(order, policy);
    if (kind == "equivariance") return PotentialSpec::equivariance(policy);
    throw ConfigError("unknown potential kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "many-interacting-worlds harmonic-trap simulations";

    py::register_exception<Error>(m, "MiwError", PyExc_RuntimeError);

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init<>())
        .def(py::init([](double mass, double hbar, double omega) {
                 PhysicalParams p{mass, hbar, omega};
                 p.validate();
                 return p;
             }),
             py::arg("mass"), py::arg("hbar"), py::arg("omega"))
        .def_readwrite("mass", &PhysicalParams::mass)
        .def_readwrite("hbar", &PhysicalParams::hbar)
        .def_readwrite("omega", &PhysicalParams::omega)
        .def("__repr__", [](const PhysicalParams& p) {
            return "PhysicalParams(mass=" + format_real(p.mass) + ", hbar=" + format_real(p.hbar) +
                   ", omega=" + format_real(p.omega) + ")";
        });

    m.def("dimensionless_params", &dimensionless_params);
    m.def("to_dimensionless", &to_dimensionless, py::arg("x"), py::arg("params"));
    m.def("from_dimensionless", &from_dimensionless, py::arg("X"), py::arg("params"));
    m.def("to_dimensionless_time", &to_dimensionless_time, py::arg("t"), py::arg("params"));
    m.def("from_dimensionless_time", &from_dimensionless_time, py::arg("T"), py::arg("params"));

    py::class_<WorldEnsemble>(m, "WorldEnsemble")
        .def(py::init<>())
        .def_static("at_rest", &WorldEnsemble::at_rest, py::arg("positions"))
        .def_readwrite("positions", &WorldEnsemble::positions)
        .def_readwrite("momenta", &WorldEnsemble::momenta)
        .def_readwrite("pinned", &WorldEnsemble::pinned)
        .def("__len__", &WorldEnsemble::size);

    py::enum_<DensityKind>(m, "DensityKind")
        .value("HarmonicGround", DensityKind::HarmonicGround)
        .value("HarmonicFirstExcited", DensityKind::HarmonicFirstExcited);

    py::class_<DensityModel>(m, "DensityModel")
        .def(py::init([](const std::string& kind) {
                 return DensityModel(density_kind_from_string(kind));
             }),
             py::arg("kind"))
        .def("density", &DensityModel::density, py::arg("x"))
        .def("cdf", &DensityModel::cdf, py::arg("x"))
        .def("inverse_cdf", &DensityModel::inverse_cdf, py::arg("u"))
        .def("sample_worlds", &DensityModel::sample_worlds, py::arg("n"))
        .def("bohmian_force", &DensityModel::bohmian_force, py::arg("x"));

    py::class_<StencilCoefficients>(m, "StencilCoefficients")
        .def_readonly("offsets", &StencilCoefficients::offsets)
        .def_readonly("order", &StencilCoefficients::order)
        .def_readonly("alpha", &StencilCoefficients::alpha)
        .def("at", &StencilCoefficients::at, py::arg("c_index"), py::arg("l"));

    m.def("build_stencil", &build_stencil_py, py::arg("order"),
          py::arg("offsets") = std::nullopt);
    m.def("stencil_residual", &stencil_residual, py::arg("stencil"));

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def_static("make", &spec_from_strings, py::arg("kind"), py::arg("order") = 4,
                    py::arg("edge_policy") = "skip")
        .def("describe", &PotentialSpec::describe)
        .def("term_halfwidth", &PotentialSpec::term_halfwidth);

    py::class_<EquivarianceCoefficients>(m, "EquivarianceCoefficients")
        .def_readonly("a", &EquivarianceCoefficients::a)
        .def_readonly("b", &EquivarianceCoefficients::b)
        .def_readonly("c", &EquivarianceCoefficients::c)
        .def_readonly("d", &EquivarianceCoefficients::d)
        .def("value_at", &EquivarianceCoefficients::value_at, py::arg("x"))
        .def("slope_at", &EquivarianceCoefficients::slope_at, py::arg("x"));

    m.def("equivariance_coefficients", &equivariance_coefficients, py::arg("ensemble"),
          py::arg("n"));

    m.def(
        "interworld_potential",
        [](const PotentialSpec& spec, const WorldEnsemble& ensemble, const PhysicalParams& p) {
            require_valid(ensemble);
            return interworld_potential(spec, ensemble.positions, p);
        },
        py::arg("spec"), py::arg("ensemble"), py::arg("params") = dimensionless_params());
    m.def(
        "interworld_forces",
        [](const PotentialSpec& spec, const WorldEnsemble& ensemble, const PhysicalParams& p) {
            require_valid(ensemble);
            std::vector<double> out(ensemble.size());
            interworld_forces(spec, ensemble.positions, p, out);
            return out;
        },
        py::arg("spec"), py::arg("ensemble"), py::arg("params") = dimensionless_params());

    py::class_<ExternalPotential>(m, "ExternalPotential")
        .def_static("none", &ExternalPotential::none)
        .def_static("harmonic", &ExternalPotential::harmonic, py::arg("omega"));

    py::class_<SimulationConfig>(m, "SimulationConfig")
        .def(py::init<>())
        .def_readwrite("potential", &SimulationConfig::potential)
        .def_readwrite("external", &SimulationConfig::external)
        .def_readwrite("dt", &SimulationConfig::dt)
        .def_readwrite("steps", &SimulationConfig::steps)
        .def_readwrite("record_every", &SimulationConfig::record_every)
        .def_readwrite("pinned_left", &SimulationConfig::pinned_left)
        .def_readwrite("pinned_right", &SimulationConfig::pinned_right);

    py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
        .def_readonly("kinetic", &EnergyBreakdown::kinetic)
        .def_readonly("external", &EnergyBreakdown::external)
        .def_readonly("interworld", &EnergyBreakdown::interworld)
        .def_readonly("total", &EnergyBreakdown::total);

    m.def("total_energy", &total_energy, py::arg("ensemble"), py::arg("config"),
          py::arg("params") = dimensionless_params());
    m.def("step", &step, py::arg("ensemble"), py::arg("config"),
          py::arg("params") = dimensionless_params());

    py::class_<CollapseDiagnosis>(m, "CollapseDiagnosis")
        .def_readonly("step", &CollapseDiagnosis::step)
        .def_readonly("lower_world", &CollapseDiagnosis::lower_world)
        .def_readonly("time", &CollapseDiagnosis::time);

    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_readonly("steps", &TrajectoryRecord::steps)
        .def_readonly("times", &TrajectoryRecord::times)
        .def_readonly("snapshots", &TrajectoryRecord::snapshots)
        .def_readonly("energies", &TrajectoryRecord::energies)
        .def_readonly("collapse", &TrajectoryRecord::collapse)
        .def("frame_count", &TrajectoryRecord::frame_count);

    m.def(
        "run",
        [](const WorldEnsemble& initial, const SimulationConfig& cfg, const PhysicalParams& p) {
            return run(initial, cfg, p);
        },
        py::arg("ensemble"), py::arg("config"), py::arg("params") = dimensionless_params());

    py::enum_<Outcome>(m, "Outcome")
        .value("Stationary", Outcome::Stationary)
        .value("Oscillatory", Outcome::Oscillatory)
        .value("NodeCollapse", Outcome::NodeCollapse)
        .value("Aborted", Outcome::Aborted);

    py::class_<ScenarioReport>(m, "ScenarioReport")
        .def_readonly("name", &ScenarioReport::name)
        .def_readonly("model", &ScenarioReport::model)
        .def_readonly("outcome", &ScenarioReport::outcome)
        .def_readonly("trajectory", &ScenarioReport::trajectory)
        .def_readonly("initial", &ScenarioReport::initial)
        .def_readonly("free_worlds", &ScenarioReport::free_worlds)
        .def_readonly("amplitudes", &ScenarioReport::amplitudes)
        .def_readonly("metrics", &ScenarioReport::metrics)
        .def_readonly("diagnosis", &ScenarioReport::diagnosis);

    m.def(
        "run_scenario",
        [](const std::string& name, std::optional<double> dt, std::optional<long long> steps,
           std::optional<long long> record_every, std::optional<int> n_worlds, bool full) {
            ScenarioOverrides overrides;
            overrides.dt = dt;
            overrides.steps = steps;
            overrides.record_every = record_every;
            overrides.n_worlds = n_worlds;
            overrides.full = full;
            return run_scenario(name, overrides);
        },
        py::arg("name"), py::arg("dt") = std::nullopt, py::arg("steps") = std::nullopt,
        py::arg("record_every") = std::nullopt, py::arg("n_worlds") = std::nullopt,
        py::arg("full") = false);
    m.def("scenario_names", &scenario_names);
    m.def("node_gap_width", &node_gap_width, py::arg("ensemble"));
    m.def("oscillation_amplitude", &oscillation_amplitude, py::arg("trajectory"),
          py::arg("world"));
    m.def("outcome_name", [](Outcome o) { return to_string(o); });
}
