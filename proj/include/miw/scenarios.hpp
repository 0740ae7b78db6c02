#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "miw/density.hpp"
#include "miw/integrator.hpp"

namespace miw {

enum class Outcome {
    Stationary,
    Oscillatory,
    NodeCollapse,
    Aborted,
};

std::string to_string(Outcome outcome);

/// Partial overrides applied on top of a scenario's defaults.
struct ScenarioOverrides {
    std::optional<double> dt;
    std::optional<long long> steps;
    std::optional<long long> record_every;
    std::optional<PotentialSpec> potential;
    std::optional<int> n_worlds;
    bool full = false;  ///< paper-scale horizon (one period) instead of desk scale
};

struct ScenarioReport {
    std::string name;
    std::string model;  ///< density model the ensemble was drawn from
    Outcome outcome = Outcome::Aborted;
    TrajectoryRecord trajectory;
    SimulationConfig config;
    WorldEnsemble initial;
    std::vector<int> free_worlds;        ///< 1-based indices of unpinned worlds
    std::vector<double> amplitudes;      ///< per free world, max |x(t) - x(0)| (every step)
    std::map<std::string, double> metrics;
    std::string diagnosis;               ///< empty unless collapsed/aborted
};

/// Canned experiment setups. Names:
///   fig1_ground_toy      50 ground worlds, toy potential, one period
///   fig2_excited_toy     40 excited worlds, toy potential, collapses at the node
///   fig3_truncated_toy   central 20 of 5000 excited worlds, 5 pinned per side
///   fig4_two_free_L4     5000 excited worlds, only the node pair free, order-4 stencil
///   fig5_ten_free_L4     as fig4 with the central 10 free
///   fig6_ten_free_L6     as fig5 with an order-6 stencil
///   figA1_two_free_equiv as fig4 with the equivariance potential
/// Default horizons are desk-scale (shortened); overrides.full restores the
/// full period. Runs stop early at a node collapse.
ScenarioReport run_scenario(const std::string& name, const ScenarioOverrides& overrides = {});

/// Runs an arbitrary ensemble/config with the same online tracking, outcome
/// classification and metrics as the canned scenarios. The node-gap rule is
/// applied whenever the ensemble has an even size and a pair straddling x = 0.
ScenarioReport run_custom(const WorldEnsemble& ensemble, const SimulationConfig& config,
                          const std::string& model = "custom");

std::vector<std::string> scenario_names();

/// Distance between the two worlds straddling x = 0 (indices N/2, N/2+1,
/// 1-based). Requires even N and a straddling pair.
double node_gap_width(const WorldEnsemble& ensemble);

/// Max |x_world(t) - x_world(0)| over the recorded snapshots (1-based index).
double oscillation_amplitude(const TrajectoryRecord& trajectory, int world);

}  // namespace miw
