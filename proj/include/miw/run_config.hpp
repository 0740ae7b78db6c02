#pragma once

#include <optional>
#include <string>
#include <vector>

#include "miw/scenarios.hpp"

namespace miw {

/// Parsed run configuration file. INI-style sections; parsing is strict:
/// unknown sections or keys, duplicate keys and malformed values are errors.
///
///   [scenario]            # which canned setup to run
///   name = fig1_ground_toy
///   full = false
///   [ensemble]            # direct model/size (required by `forces`,
///   model = ground        # optional world-count override for `run`)
///   n = 5000
///   [potential]           # override the scenario's interworld potential
///   kind = rational       # toy | rational | equivariance
///   order = 4             # rational only, even
///   edge_policy = skip    # skip | one_sided
///   [integration]
///   dt = 1e-8
///   steps = 1000000
///   record_every = 10000
///   pinned_left = 5
///   pinned_right = 5
///   [output]
///   directory = out
///   formats = csv,json
struct RunConfig {
    std::optional<std::string> scenario_name;
    bool full = false;

    std::optional<std::string> ensemble_model;
    std::optional<int> ensemble_n;

    std::optional<std::string> potential_kind;
    std::optional<int> potential_order;
    std::optional<std::string> edge_policy;

    std::optional<double> dt;
    std::optional<long long> steps;
    std::optional<long long> record_every;
    std::optional<int> pinned_left;
    std::optional<int> pinned_right;

    std::string output_directory = "out";
    std::vector<std::string> output_formats = {"csv", "json"};
};

RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Maps the [potential] section onto a spec; returns fallback when absent.
PotentialSpec resolve_potential(const RunConfig& cfg, const PotentialSpec& fallback);

/// Scenario overrides implied by the config file.
ScenarioOverrides to_scenario_overrides(const RunConfig& cfg);

/// Fully resolved configuration echoed next to every run's outputs.
std::string render_config_echo(const ScenarioReport& report, const RunConfig& cfg);

}  // namespace miw
