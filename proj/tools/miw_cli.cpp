#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "miw/csv_io.hpp"
#include "miw/density.hpp"
#include "miw/run_config.hpp"
#include "miw/scenarios.hpp"
#include "miw/stencil.hpp"

namespace fs = std::filesystem;
using namespace miw;

namespace {

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnitsOpts {
    bool physical = false;
    double mass = 1.0;
    double omega = 1.0;
    double hbar = 1.0;
};

void add_units_flags(CLI::App* cmd, UnitsOpts& units) {
    cmd->add_flag("--physical", units.physical,
                  "write positions/momenta/times in physical units");
    cmd->add_option("--mass", units.mass, "particle mass (with --physical)")
        ->capture_default_str();
    cmd->add_option("--omega", units.omega, "trap frequency (with --physical)")
        ->capture_default_str();
    cmd->add_option("--hbar", units.hbar, "Planck constant (with --physical)")
        ->capture_default_str();
}

OutputUnits make_units(const UnitsOpts& opts) {
    OutputUnits units;
    units.physical = opts.physical;
    units.params = PhysicalParams{opts.mass, opts.hbar, opts.omega};
    if (units.physical) units.params.validate();
    return units;
}

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write '" + path.string() + "'");
    return out;
}

void write_outputs(const fs::path& dir, const ScenarioReport& report, const RunConfig& cfg,
                   const OutputUnits& units) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create '" + dir.string() + "': " + ec.message());

    const auto has_format = [&](const char* f) {
        for (const auto& item : cfg.output_formats)
            if (item == f) return true;
        return false;
    };

    if (has_format("csv")) {
        auto samples = open_for_write(dir / "samples.csv");
        write_samples_csv(samples, report.initial, units);
        auto traj = open_for_write(dir / "trajectory.csv");
        write_trajectory_csv(traj, report.trajectory, units);
        auto energy = open_for_write(dir / "energy.csv");
        write_energy_csv(energy, report.trajectory, units);
    }
    if (has_format("json")) {
        auto summary = open_for_write(dir / "summary.json");
        summary << summary_json(report);
    }
    auto echo = open_for_write(dir / "config_echo.ini");
    echo << render_config_echo(report, cfg);
}

int report_outcome(const ScenarioReport& report, const fs::path& dir) {
    std::cout << (report.name.empty() ? std::string("run") : report.name) << ": "
              << to_string(report.outcome);
    if (const auto it = report.metrics.find("steps_run"); it != report.metrics.end())
        std::cout << " after " << static_cast<long long>(it->second) << " steps";
    std::cout << "; outputs in " << dir.string() << "\n";
    if (report.outcome == Outcome::Aborted) {
        std::cerr << "aborted: " << report.diagnosis << "\n";
        return 3;
    }
    if (!report.diagnosis.empty()) std::cout << "  " << report.diagnosis << "\n";
    return 0;
}

DensityKind parse_model(const std::string& name) {
    try {
        return density_kind_from_string(name);
    } catch (const Error& err) {
        throw ConfigError(err.what());
    }
}

WorldEnsemble configured_ensemble(const RunConfig& cfg, const char* who) {
    if (!cfg.ensemble_model || !cfg.ensemble_n)
        throw ConfigError(std::string(who) + " needs [ensemble] model and n in the config");
    const DensityModel model(parse_model(*cfg.ensemble_model));
    return model.sample_worlds(*cfg.ensemble_n);
}

int cmd_coeffs(int order, std::vector<int> offsets, bool exact) {
    const OffsetSet set = offsets.empty() ? OffsetSet::symmetric(order / 2)
                                          : OffsetSet(std::move(offsets));
    std::cout << "offset";
    for (int l = 1; l <= order; ++l) std::cout << ",alpha_" << l;
    std::cout << "\n";
    if (exact) {
        const auto rows = build_stencil_exact(set, order);
        for (std::size_t c = 0; c < rows.size(); ++c) {
            std::cout << set.values()[c];
            for (const auto& r : rows[c]) std::cout << ',' << r.str();
            std::cout << "\n";
        }
    } else {
        const auto stencil = build_stencil(set, order);
        for (int c = 0; c < stencil.count(); ++c) {
            std::cout << stencil.offsets[static_cast<std::size_t>(c)];
            for (int l = 1; l <= order; ++l) std::cout << ',' << format_real(stencil.at(c, l));
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_sample(const std::string& model_name, int n, const std::string& out_path,
               const UnitsOpts& units_opts) {
    const DensityModel model(parse_model(model_name));
    const auto ensemble = model.sample_worlds(n);
    const auto units = make_units(units_opts);
    if (out_path.empty()) {
        write_samples_csv(std::cout, ensemble, units);
    } else {
        auto out = open_for_write(out_path);
        write_samples_csv(out, ensemble, units);
    }
    return 0;
}

int cmd_run(const std::string& config_path, std::string out_dir, const UnitsOpts& units_opts) {
    RunConfig cfg = load_run_config(config_path);
    if (!out_dir.empty()) cfg.output_directory = out_dir;

    ScenarioReport report;
    if (cfg.scenario_name) {
        if (cfg.pinned_left || cfg.pinned_right)
            throw ConfigError("pinned counts are fixed by the scenario; "
                              "drop them or drop [scenario] name");
        report = run_scenario(*cfg.scenario_name, to_scenario_overrides(cfg));
    } else {
        auto ensemble = configured_ensemble(cfg, "run without a scenario");
        SimulationConfig sim;
        sim.potential = resolve_potential(cfg, PotentialSpec::toy());
        sim.external = ExternalPotential::harmonic(dimensionless_params().omega);
        sim.dt = cfg.dt.value_or(1e-5);
        sim.steps = cfg.steps.value_or(1000);
        sim.record_every = cfg.record_every.value_or(1);
        sim.pinned_left = cfg.pinned_left.value_or(0);
        sim.pinned_right = cfg.pinned_right.value_or(0);
        report = run_custom(ensemble, sim, *cfg.ensemble_model);
    }

    const fs::path dir = cfg.output_directory;
    write_outputs(dir, report, cfg, make_units(units_opts));
    return report_outcome(report, dir);
}

int cmd_forces(const std::string& config_path, const std::string& out_path,
               const UnitsOpts& units_opts) {
    const RunConfig cfg = load_run_config(config_path);
    const auto ensemble = configured_ensemble(cfg, "forces");
    const auto spec = resolve_potential(cfg, PotentialSpec::toy());
    const DensityModel model(parse_model(*cfg.ensemble_model));

    const int n = static_cast<int>(ensemble.size());
    std::vector<double> forces(static_cast<std::size_t>(n), 0.0);
    interworld_forces(spec, ensemble.positions, dimensionless_params(), forces);

    const int edge = 2 * spec.term_halfwidth();
    const bool excited = model.kind() == DensityKind::HarmonicFirstExcited;
    std::vector<ForceRow> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& row = rows[static_cast<std::size_t>(i)];
        const double x = ensemble.positions[static_cast<std::size_t>(i)];
        row.world = i + 1;
        row.position = x;
        row.interworld_force = forces[static_cast<std::size_t>(i)];
        row.oracle_force = model.bohmian_force(x);
        row.relative_error = std::abs(row.interworld_force - row.oracle_force) /
                             std::max(std::abs(row.oracle_force), 1.0);
        if (i < edge || i >= n - edge)
            row.flag = "boundary";
        else if (excited && n % 2 == 0 && (i == n / 2 - 1 || i == n / 2))
            row.flag = "near_node";
    }

    const auto units = make_units(units_opts);
    if (out_path.empty()) {
        write_forces_csv(std::cout, rows, units);
    } else {
        auto out = open_for_write(out_path);
        write_forces_csv(out, rows, units);
    }
    return 0;
}

int cmd_scenario(const std::string& name, bool list, const ScenarioOverrides& overrides,
                 std::string out_dir, const UnitsOpts& units_opts) {
    if (list) {
        for (const auto& s : scenario_names()) std::cout << s << "\n";
        return 0;
    }
    if (name.empty()) throw ConfigError("scenario needs a name (or --list)");
    const auto report = run_scenario(name, overrides);

    RunConfig cfg;
    cfg.scenario_name = name;
    cfg.full = overrides.full;
    if (out_dir.empty()) out_dir = (fs::path("out") / name).string();
    cfg.output_directory = out_dir;

    const fs::path dir = out_dir;
    write_outputs(dir, report, cfg, make_units(units_opts));
    return report_outcome(report, dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"many-interacting-worlds trap simulations"};
    app.require_subcommand(1);
    int exit_code = 0;

    auto* coeffs = app.add_subcommand("coeffs", "print derivative stencil weights");
    int order = 2;
    std::vector<int> offsets;
    bool exact = false;
    coeffs->add_option("--L,--order", order, "derivative order (even)")->required();
    coeffs->add_option("--offsets", offsets, "neighbour offsets (default symmetric)")
        ->delimiter(',');
    coeffs->add_flag("--exact", exact, "print exact rationals instead of doubles");
    coeffs->callback([&] { exit_code = cmd_coeffs(order, offsets, exact); });

    auto* sample = app.add_subcommand("sample", "equal-weight worlds for a density model");
    std::string sample_model;
    int sample_n = 0;
    std::string sample_out;
    UnitsOpts sample_units;
    sample->add_option("model", sample_model, "ground | excited")->required();
    sample->add_option("N", sample_n, "number of worlds")->required();
    sample->add_option("--out", sample_out, "output file (default stdout)");
    add_units_flags(sample, sample_units);
    sample->callback([&] { exit_code = cmd_sample(sample_model, sample_n, sample_out, sample_units); });

    auto* run_cmd = app.add_subcommand("run", "integrate a configured ensemble");
    std::string run_config_path, run_out_dir;
    UnitsOpts run_units;
    run_cmd->add_option("--config", run_config_path, "INI run configuration")->required();
    run_cmd->add_option("--out-dir", run_out_dir, "output directory (overrides config)");
    add_units_flags(run_cmd, run_units);
    run_cmd->callback([&] { exit_code = cmd_run(run_config_path, run_out_dir, run_units); });

    auto* forces = app.add_subcommand("forces", "interworld forces vs the stationary oracle");
    std::string forces_config_path, forces_out;
    UnitsOpts forces_units;
    forces->add_option("--config", forces_config_path, "INI run configuration")->required();
    forces->add_option("--out", forces_out, "output file (default stdout)");
    add_units_flags(forces, forces_units);
    forces->callback([&] { exit_code = cmd_forces(forces_config_path, forces_out, forces_units); });

    auto* scenario = app.add_subcommand("scenario", "run a canned experiment");
    std::string scenario_name, scenario_out_dir;
    bool scenario_list = false;
    bool scenario_full = false;
    double scenario_dt = 0.0;
    long long scenario_steps = 0, scenario_record = 0;
    int scenario_n = 0;
    UnitsOpts scenario_units;
    scenario->add_option("name", scenario_name, "scenario name (see --list)");
    scenario->add_flag("--list", scenario_list, "list scenario names");
    scenario->add_option("--dt", scenario_dt, "time step override");
    scenario->add_option("--steps", scenario_steps, "step count override");
    scenario->add_option("--record-every", scenario_record, "snapshot stride override");
    scenario->add_option("--n-worlds", scenario_n, "ensemble size override");
    scenario->add_flag("--full", scenario_full, "full horizon instead of desk scale");
    scenario->add_option("--out-dir", scenario_out_dir, "output directory (default out/<name>)");
    add_units_flags(scenario, scenario_units);
    scenario->callback([&] {
        ScenarioOverrides overrides;
        if (scenario_dt > 0.0) overrides.dt = scenario_dt;
        if (scenario_steps > 0) overrides.steps = scenario_steps;
        if (scenario_record > 0) overrides.record_every = scenario_record;
        if (scenario_n > 0) overrides.n_worlds = scenario_n;
        overrides.full = scenario_full;
        exit_code = cmd_scenario(scenario_name, scenario_list, overrides, scenario_out_dir,
                                 scenario_units);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const IoFailure& err) {
        std::cerr << "io error: " << err.what() << "\n";
        return 4;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
    return exit_code;
}
