#include "miw/csv_io.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace miw {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double OutputUnits::position(double X) const {
    return physical ? from_dimensionless(X, params) : X;
}

double OutputUnits::momentum(double P) const {
    return physical ? from_dimensionless_momentum(P, params) : P;
}

double OutputUnits::time(double T) const {
    return physical ? from_dimensionless_time(T, params) : T;
}

void write_samples_csv(std::ostream& os, const WorldEnsemble& ensemble,
                       const OutputUnits& units) {
    os << (units.physical ? "index,position\n" : "index,position_dimensionless\n");
    for (std::size_t i = 0; i < ensemble.size(); ++i)
        os << (i + 1) << ',' << format_real(units.position(ensemble.positions[i])) << '\n';
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record,
                          const OutputUnits& units) {
    os << "step,T,world_index,position,momentum,pinned\n";
    for (std::size_t k = 0; k < record.frame_count(); ++k) {
        const auto& snap = record.snapshots[k];
        const std::string t = format_real(units.time(record.times[k]));
        for (std::size_t i = 0; i < snap.size(); ++i) {
            const int pinned = snap.pinned.empty() ? 0 : snap.pinned[i];
            os << record.steps[k] << ',' << t << ',' << (i + 1) << ','
               << format_real(units.position(snap.positions[i])) << ','
               << format_real(units.momentum(snap.momenta[i])) << ',' << pinned << '\n';
        }
    }
}

void write_energy_csv(std::ostream& os, const TrajectoryRecord& record,
                      const OutputUnits& units) {
    os << "step,T,kinetic,external,interworld,total\n";
    for (std::size_t k = 0; k < record.frame_count(); ++k) {
        const auto& e = record.energies[k];
        os << record.steps[k] << ',' << format_real(units.time(record.times[k])) << ','
           << format_real(e.kinetic) << ',' << format_real(e.external) << ','
           << format_real(e.interworld) << ',' << format_real(e.total) << '\n';
    }
}

void write_forces_csv(std::ostream& os, const std::vector<ForceRow>& rows,
                      const OutputUnits& units) {
    os << "world_index,position,interworld_force,oracle_force,relative_error,flag\n";
    for (const auto& row : rows)
        os << row.world << ',' << format_real(units.position(row.position)) << ','
           << format_real(row.interworld_force) << ',' << format_real(row.oracle_force) << ','
           << format_real(row.relative_error) << ',' << row.flag << '\n';
}

std::string summary_json(const ScenarioReport& report) {
    nlohmann::ordered_json j;
    j["scenario"] = report.name;
    j["model"] = report.model;
    j["outcome"] = to_string(report.outcome);
    j["worlds"] = report.initial.size();
    j["free_worlds"] = report.free_worlds;
    j["frames"] = report.trajectory.frame_count();

    nlohmann::ordered_json metrics;
    for (const auto& [key, value] : report.metrics) metrics[key] = value;
    j["metrics"] = metrics;

    j["amplitudes"] = report.amplitudes;
    if (report.trajectory.collapse) {
        const auto& c = *report.trajectory.collapse;
        j["collapse"] = {{"step", c.step}, {"lower_world", c.lower_world}, {"time", c.time}};
    }
    if (!report.diagnosis.empty()) j["diagnosis"] = report.diagnosis;
    return j.dump(2) + "\n";
}

}  // namespace miw
