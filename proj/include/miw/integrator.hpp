#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "miw/core.hpp"
#include "miw/potential.hpp"

namespace miw {

/// External one-body potential added to the interworld term.
struct ExternalPotential {
    enum class Kind { None, Harmonic };
    Kind kind = Kind::None;
    double omega = 0.0;  ///< Harmonic: V(x) = m omega^2 x^2 / 2

    static ExternalPotential none() { return {}; }
    static ExternalPotential harmonic(double omega) { return {Kind::Harmonic, omega}; }
};

struct SimulationConfig {
    PotentialSpec potential;
    ExternalPotential external;
    double dt = 1e-5;            ///< in dimensionless time (trap period = 1)
    long long steps = 1;
    long long record_every = 1;  ///< snapshot stride; 0 and the last step always recorded
    int pinned_left = 0;         ///< boundary worlds held fixed, in addition
    int pinned_right = 0;        ///< to the ensemble's own pinned flags

    void validate(std::size_t n_worlds) const;
};

struct EnergyBreakdown {
    double kinetic = 0;
    double external = 0;
    double interworld = 0;
    double total = 0;
};

/// Kinetic + external + interworld energy of a configuration.
EnergyBreakdown total_energy(const WorldEnsemble& ensemble, const SimulationConfig& cfg,
                             const PhysicalParams& params);

/// One velocity-Verlet step (half kick, drift, half kick). Pinned worlds
/// keep position and momentum bit-exactly. Throws CollapseError if the
/// drift breaks the strict world ordering.
WorldEnsemble step(const WorldEnsemble& ensemble, const SimulationConfig& cfg,
                   const PhysicalParams& params);

struct CollapseDiagnosis {
    long long step = 0;    ///< step at which ordering failed (1-based)
    int lower_world = 0;   ///< worlds lower_world, lower_world+1 crossed (1-based)
    double time = 0.0;     ///< step * dt
};

/// Time series produced by run(): snapshot k holds the state after
/// times[k]/dt steps, with its energy breakdown alongside.
struct TrajectoryRecord {
    std::vector<long long> steps;
    std::vector<double> times;
    std::vector<WorldEnsemble> snapshots;
    std::vector<EnergyBreakdown> energies;
    std::optional<CollapseDiagnosis> collapse;
    EvalStats stats;

    std::size_t frame_count() const { return times.size(); }
};

/// Called after every step with the current state; return false to stop
/// the run early (the current state still gets recorded).
using StepObserver = std::function<bool(long long step, std::span<const double> positions)>;

/// Integrates the ensemble for cfg.steps velocity-Verlet steps, recording
/// snapshots at stride cfg.record_every. A collapse ends the run cleanly:
/// the record keeps everything up to the last valid state plus a diagnosis.
TrajectoryRecord run(const WorldEnsemble& initial, const SimulationConfig& cfg,
                     const PhysicalParams& params, const StepObserver& observer = {});

}  // namespace miw
