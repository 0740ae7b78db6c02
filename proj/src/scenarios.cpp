#include "miw/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace miw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class PotentialFamily { Toy, Rational4, Rational6, Equivariance };

struct ScenarioDef {
    const char* name;
    DensityKind model;
    int sample_n;
    int window;        // keep only the central `window` worlds (0 = all)
    int central_free;  // pin everything except the central block (0 = all free)
    int pinned_side;   // boundary worlds pinned per side (after windowing)
    PotentialFamily family;
    double dt;
    long long steps_desk;
    long long steps_full;
    long long record_every;
    bool has_node;
};

// Desk-scale horizons keep every run in seconds-to-minutes; overrides.full
// restores the one-period horizon. Collapsing runs stop at the event anyway.
const ScenarioDef kScenarios[] = {
    {"fig1_ground_toy", DensityKind::HarmonicGround, 50, 0, 0, 0,
     PotentialFamily::Toy, 1e-5, 100000, 100000, 1000, false},
    {"fig2_excited_toy", DensityKind::HarmonicFirstExcited, 40, 0, 0, 0,
     PotentialFamily::Toy, 1e-6, 300000, 1000000, 1000, true},
    {"fig3_truncated_toy", DensityKind::HarmonicFirstExcited, 5000, 20, 0, 5,
     PotentialFamily::Toy, 1e-8, 12000000, 100000000, 10000, true},
    {"fig4_two_free_L4", DensityKind::HarmonicFirstExcited, 5000, 0, 2, 0,
     PotentialFamily::Rational4, 1e-9, 10000000, 1000000000, 100000, true},
    {"fig5_ten_free_L4", DensityKind::HarmonicFirstExcited, 5000, 0, 10, 0,
     PotentialFamily::Rational4, 1e-9, 10000000, 1000000000, 100000, true},
    {"fig6_ten_free_L6", DensityKind::HarmonicFirstExcited, 5000, 0, 10, 0,
     PotentialFamily::Rational6, 1e-9, 10000000, 1000000000, 100000, true},
    {"figA1_two_free_equiv", DensityKind::HarmonicFirstExcited, 5000, 0, 2, 0,
     PotentialFamily::Equivariance, 1e-9, 10000000, 1000000000, 100000, true},
};

const ScenarioDef& find_scenario(const std::string& name) {
    for (const auto& def : kScenarios)
        if (name == def.name) return def;
    std::ostringstream msg;
    msg << "unknown scenario '" << name << "'; known:";
    for (const auto& def : kScenarios) msg << ' ' << def.name;
    throw ConfigError(msg.str());
}

PotentialSpec family_spec(PotentialFamily family) {
    switch (family) {
        case PotentialFamily::Toy:
            return PotentialSpec::toy();
        case PotentialFamily::Rational4:
            return PotentialSpec::rational_smoothing(4);
        case PotentialFamily::Rational6:
            return PotentialSpec::rational_smoothing(6);
        case PotentialFamily::Equivariance:
            return PotentialSpec::equivariance();
    }
    return PotentialSpec::toy();
}

WorldEnsemble central_window(const WorldEnsemble& full, int window) {
    const int n = static_cast<int>(full.size());
    if (window >= n) return full;
    const int start = (n - window) / 2;
    WorldEnsemble out;
    out.positions.assign(full.positions.begin() + start, full.positions.begin() + start + window);
    out.momenta.assign(static_cast<std::size_t>(window), 0.0);
    out.pinned.assign(static_cast<std::size_t>(window), 0);
    return out;
}

bool straddles_zero(const WorldEnsemble& ensemble) {
    const int n = static_cast<int>(ensemble.size());
    if (n < 2 || n % 2 != 0) return false;
    return ensemble.positions[static_cast<std::size_t>(n / 2 - 1)] < 0.0 &&
           ensemble.positions[static_cast<std::size_t>(n / 2)] > 0.0;
}

ScenarioReport run_with_report(const std::string& name, const std::string& model,
                               const WorldEnsemble& ensemble, const SimulationConfig& cfg,
                               bool track_node) {
    const int n = static_cast<int>(ensemble.size());

    ScenarioReport report;
    report.name = name;
    report.model = model;
    report.config = cfg;
    report.initial = ensemble;

    // observer state: per-step amplitude tracking and the node-gap rule
    std::vector<int> free_worlds;  // 0-based here; exported 1-based
    {
        const auto pinned = [&](int i) {
            if (i < cfg.pinned_left || i >= n - cfg.pinned_right) return true;
            return !ensemble.pinned.empty() && ensemble.pinned[static_cast<std::size_t>(i)] != 0;
        };
        for (int i = 0; i < n; ++i)
            if (!pinned(i)) free_worlds.push_back(i);
    }
    std::vector<double> x0;
    for (int i : free_worlds) x0.push_back(ensemble.positions[static_cast<std::size_t>(i)]);
    report.amplitudes.assign(free_worlds.size(), 0.0);

    track_node = track_node && straddles_zero(ensemble);
    const int node_left = n / 2 - 1;
    const double gap_initial = track_node ? node_gap_width(ensemble) : 0.0;
    double gap_now = gap_initial;
    double gap_min = gap_initial;
    bool gap_collapsed = false;
    long long gap_collapse_step = 0;

    const auto observer = [&](long long step_index, std::span<const double> x) {
        for (std::size_t t = 0; t < free_worlds.size(); ++t) {
            const double d = std::abs(x[static_cast<std::size_t>(free_worlds[t])] - x0[t]);
            if (d > report.amplitudes[t]) report.amplitudes[t] = d;
        }
        if (track_node) {
            gap_now = x[static_cast<std::size_t>(node_left) + 1] -
                      x[static_cast<std::size_t>(node_left)];
            gap_min = std::min(gap_min, gap_now);
            if (gap_now < 0.5 * gap_initial) {
                gap_collapsed = true;
                gap_collapse_step = step_index;
                return false;
            }
        }
        return true;
    };

    try {
        report.trajectory = run(ensemble, cfg, dimensionless_params(), observer);
    } catch (const Error& err) {
        report.outcome = Outcome::Aborted;
        report.diagnosis = err.what();
        return report;
    }

    for (int i : free_worlds) report.free_worlds.push_back(i + 1);

    // classification: collapse rules first, then displacement of the central
    // 80% of free worlds against a fifth of their local spacing
    if (report.trajectory.collapse) {
        report.outcome = Outcome::NodeCollapse;
        report.diagnosis = "world ordering violated";
    } else if (gap_collapsed) {
        report.outcome = Outcome::NodeCollapse;
        report.diagnosis = "node gap fell below half its initial width";
    } else {
        const std::size_t m = free_worlds.size();
        const std::size_t skirt = m / 10;
        bool stationary = true;
        for (std::size_t t = skirt; t < m - skirt; ++t) {
            const int i = free_worlds[t];
            double spacing = std::numeric_limits<double>::infinity();
            if (i > 0)
                spacing = ensemble.positions[static_cast<std::size_t>(i)] -
                          ensemble.positions[static_cast<std::size_t>(i) - 1];
            if (i + 1 < n)
                spacing = std::min(spacing, ensemble.positions[static_cast<std::size_t>(i) + 1] -
                                                ensemble.positions[static_cast<std::size_t>(i)]);
            if (report.amplitudes[t] > 0.2 * spacing) {
                stationary = false;
                break;
            }
        }
        report.outcome = stationary ? Outcome::Stationary : Outcome::Oscillatory;
    }

    double drift = 0.0;
    const auto& energies = report.trajectory.energies;
    if (!energies.empty() && energies.front().total != 0.0) {
        for (const auto& e : energies)
            drift = std::max(drift, std::abs(e.total - energies.front().total) /
                                        std::abs(energies.front().total));
    }

    auto& metrics = report.metrics;
    metrics["worlds"] = n;
    metrics["free_count"] = static_cast<double>(free_worlds.size());
    metrics["dt"] = cfg.dt;
    metrics["steps_run"] = report.trajectory.steps.empty()
                               ? 0.0
                               : static_cast<double>(report.trajectory.steps.back());
    metrics["energy_drift_rel"] = drift;
    metrics["amplitude_max"] =
        report.amplitudes.empty()
            ? 0.0
            : *std::max_element(report.amplitudes.begin(), report.amplitudes.end());
    if (track_node) {
        metrics["gap_width_initial"] = gap_initial;
        metrics["gap_width_final"] = gap_now;
        metrics["gap_width_min"] = gap_min;
    }
    if (report.trajectory.collapse) {
        metrics["collapse_step"] = static_cast<double>(report.trajectory.collapse->step);
        metrics["collapse_time"] = report.trajectory.collapse->time;
    } else if (gap_collapsed) {
        metrics["collapse_step"] = static_cast<double>(gap_collapse_step);
        metrics["collapse_time"] = static_cast<double>(gap_collapse_step) * cfg.dt;
    }
    if (report.trajectory.stats.min_denominator_scale >= 0.0) {
        metrics["min_denominator_scale"] = report.trajectory.stats.min_denominator_scale;
        metrics["conditioning_warnings"] =
            static_cast<double>(report.trajectory.stats.conditioning_warnings);
    }
    return report;
}

}  // namespace

std::string to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Stationary:
            return "Stationary";
        case Outcome::Oscillatory:
            return "Oscillatory";
        case Outcome::NodeCollapse:
            return "NodeCollapse";
        case Outcome::Aborted:
            return "Aborted";
    }
    return "Aborted";
}

std::vector<std::string> scenario_names() {
    std::vector<std::string> names;
    for (const auto& def : kScenarios) names.emplace_back(def.name);
    return names;
}

double node_gap_width(const WorldEnsemble& ensemble) {
    const int n = static_cast<int>(ensemble.size());
    if (n < 2 || n % 2 != 0)
        throw DomainError("node gap needs an even number of worlds");
    const double left = ensemble.positions[static_cast<std::size_t>(n / 2 - 1)];
    const double right = ensemble.positions[static_cast<std::size_t>(n / 2)];
    if (!(left < 0.0 && 0.0 < right))
        throw DomainError("the two central worlds do not straddle x = 0");
    return right - left;
}

double oscillation_amplitude(const TrajectoryRecord& trajectory, int world) {
    if (trajectory.snapshots.empty()) throw DomainError("empty trajectory");
    const auto n = trajectory.snapshots.front().size();
    if (world < 1 || static_cast<std::size_t>(world) > n)
        throw DomainError("world index out of range");
    const auto i = static_cast<std::size_t>(world - 1);
    const double x0 = trajectory.snapshots.front().positions[i];
    double amp = 0.0;
    for (const auto& snap : trajectory.snapshots)
        amp = std::max(amp, std::abs(snap.positions[i] - x0));
    return amp;
}

ScenarioReport run_custom(const WorldEnsemble& ensemble, const SimulationConfig& config,
                          const std::string& model) {
    return run_with_report("", model, ensemble, config, straddles_zero(ensemble));
}

ScenarioReport run_scenario(const std::string& name, const ScenarioOverrides& overrides) {
    const auto& def = find_scenario(name);

    const int sample_n = overrides.n_worlds.value_or(def.sample_n);
    const DensityModel model(def.model);
    auto ensemble = model.sample_worlds(sample_n);
    if (def.window > 0) ensemble = central_window(ensemble, def.window);
    const int n = static_cast<int>(ensemble.size());

    if (def.central_free > 0 && def.central_free < n) {
        const int start = (n - def.central_free) / 2;
        for (int i = 0; i < n; ++i)
            ensemble.pinned[static_cast<std::size_t>(i)] =
                static_cast<unsigned char>(i < start || i >= start + def.central_free);
    }

    SimulationConfig cfg;
    cfg.potential = overrides.potential.value_or(family_spec(def.family));
    cfg.external = ExternalPotential::harmonic(kTwoPi);
    cfg.dt = overrides.dt.value_or(def.dt);
    cfg.steps = overrides.steps.value_or(overrides.full ? def.steps_full : def.steps_desk);
    cfg.record_every = overrides.record_every.value_or(def.record_every);
    cfg.pinned_left = def.pinned_side;
    cfg.pinned_right = def.pinned_side;

    return run_with_report(def.name, to_string(def.model), ensemble, cfg, def.has_node);
}

}  // namespace miw
