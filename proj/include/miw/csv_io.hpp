#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "miw/integrator.hpp"
#include "miw/scenarios.hpp"

namespace miw {

/// Shortest round-trippable decimal (17 significant digits, %.17g).
/// All writers below use it, so identical data gives identical bytes.
std::string format_real(double v);

/// When set, positions/momenta/times are mapped back to physical units
/// with the given parameters before writing.
struct OutputUnits {
    bool physical = false;
    PhysicalParams params;

    double position(double X) const;
    double momentum(double P) const;
    double time(double T) const;
};

/// header: index,position_dimensionless  (or index,position when physical)
void write_samples_csv(std::ostream& os, const WorldEnsemble& ensemble,
                       const OutputUnits& units = {});

/// header: step,T,world_index,position,momentum,pinned
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record,
                          const OutputUnits& units = {});

/// header: step,T,kinetic,external,interworld,total
void write_energy_csv(std::ostream& os, const TrajectoryRecord& record,
                      const OutputUnits& units = {});

struct ForceRow {
    int world = 0;  ///< 1-based
    double position = 0;
    double interworld_force = 0;
    double oracle_force = 0;
    double relative_error = 0;
    std::string flag;  ///< "", "boundary" or "near_node"
};

/// header: world_index,position,interworld_force,oracle_force,relative_error,flag
void write_forces_csv(std::ostream& os, const std::vector<ForceRow>& rows,
                      const OutputUnits& units = {});

/// Stable-keyed JSON summary of a scenario run: outcome, gap_width_initial,
/// gap_width_final, amplitude_max, energy_drift_rel, plus per-world
/// amplitudes and any collapse diagnosis.
std::string summary_json(const ScenarioReport& report);

}  // namespace miw
