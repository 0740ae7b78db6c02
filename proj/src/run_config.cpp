#include "miw/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include "miw/csv_io.hpp"

namespace miw {

namespace {

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto a = s.find_first_not_of(ws);
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(ws);
    return std::string(s.substr(a, b - a + 1));
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_number(int line, const std::string& key, const std::string& value) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        fail(line, "cannot parse value '" + value + "' for '" + key + "'");
    return out;
}

bool parse_bool(int line, const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    fail(line, "expected true/false for '" + key + "', got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::set<std::string> seen;
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "scenario" && section != "ensemble" && section != "potential" &&
                section != "integration" && section != "output")
                fail(lineno, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (section.empty()) fail(lineno, "key '" + key + "' appears before any section");
        if (key.empty()) fail(lineno, "missing key before '='");
        if (value.empty()) fail(lineno, "missing value for '" + key + "'");
        if (!seen.insert(section + "." + key).second)
            fail(lineno, "duplicate key '" + key + "' in [" + section + "]");

        if (section == "scenario") {
            if (key == "name") {
                cfg.scenario_name = value;
            } else if (key == "full") {
                cfg.full = parse_bool(lineno, key, value);
            } else {
                fail(lineno, "unknown key '" + key + "' in [scenario]");
            }
        } else if (section == "ensemble") {
            if (key == "model") {
                if (value != "ground" && value != "excited")
                    fail(lineno, "model must be 'ground' or 'excited', got '" + value + "'");
                cfg.ensemble_model = value;
            } else if (key == "n") {
                const int n = parse_number<int>(lineno, key, value);
                if (n < 2) fail(lineno, "n must be at least 2");
                cfg.ensemble_n = n;
            } else {
                fail(lineno, "unknown key '" + key + "' in [ensemble]");
            }
        } else if (section == "potential") {
            if (key == "kind") {
                if (value != "toy" && value != "rational" && value != "equivariance")
                    fail(lineno, "kind must be toy, rational or equivariance");
                cfg.potential_kind = value;
            } else if (key == "order") {
                const int order = parse_number<int>(lineno, key, value);
                if (order < 2 || order % 2 != 0)
                    fail(lineno, "order must be an even integer >= 2");
                cfg.potential_order = order;
            } else if (key == "edge_policy") {
                if (value != "skip" && value != "one_sided")
                    fail(lineno, "edge_policy must be 'skip' or 'one_sided'");
                cfg.edge_policy = value;
            } else {
                fail(lineno, "unknown key '" + key + "' in [potential]");
            }
        } else if (section == "integration") {
            if (key == "dt") {
                const double dt = parse_number<double>(lineno, key, value);
                if (!(dt > 0.0) || !std::isfinite(dt)) fail(lineno, "dt must be positive");
                cfg.dt = dt;
            } else if (key == "steps") {
                const auto steps = parse_number<long long>(lineno, key, value);
                if (steps < 1) fail(lineno, "steps must be at least 1");
                cfg.steps = steps;
            } else if (key == "record_every") {
                const auto every = parse_number<long long>(lineno, key, value);
                if (every < 1) fail(lineno, "record_every must be at least 1");
                cfg.record_every = every;
            } else if (key == "pinned_left" || key == "pinned_right") {
                const int count = parse_number<int>(lineno, key, value);
                if (count < 0) fail(lineno, key + " must be non-negative");
                (key == "pinned_left" ? cfg.pinned_left : cfg.pinned_right) = count;
            } else {
                fail(lineno, "unknown key '" + key + "' in [integration]");
            }
        } else {  // output
            if (key == "directory") {
                cfg.output_directory = value;
            } else if (key == "formats") {
                auto items = split_list(value);
                if (items.empty()) fail(lineno, "formats must list csv and/or json");
                for (const auto& item : items)
                    if (item != "csv" && item != "json")
                        fail(lineno, "unknown output format '" + item + "'");
                cfg.output_formats = std::move(items);
            } else {
                fail(lineno, "unknown key '" + key + "' in [output]");
            }
        }
    }

    if (cfg.potential_order && cfg.potential_kind != "rational")
        throw ConfigError("potential.order applies only to kind = rational");
    if (cfg.edge_policy && (!cfg.potential_kind || *cfg.potential_kind == "toy"))
        throw ConfigError("potential.edge_policy applies to rational or equivariance kinds");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config_text(buffer.str());
}

PotentialSpec resolve_potential(const RunConfig& cfg, const PotentialSpec& fallback) {
    if (!cfg.potential_kind) return fallback;
    const EdgePolicy policy = (cfg.edge_policy && *cfg.edge_policy == "one_sided")
                                  ? EdgePolicy::OneSidedStencil
                                  : EdgePolicy::SkipBoundaryTerms;
    if (*cfg.potential_kind == "toy") return PotentialSpec::toy();
    if (*cfg.potential_kind == "rational")
        return PotentialSpec::rational_smoothing(cfg.potential_order.value_or(4), policy);
    return PotentialSpec::equivariance(policy);
}

ScenarioOverrides to_scenario_overrides(const RunConfig& cfg) {
    ScenarioOverrides overrides;
    overrides.dt = cfg.dt;
    overrides.steps = cfg.steps;
    overrides.record_every = cfg.record_every;
    overrides.n_worlds = cfg.ensemble_n;
    overrides.full = cfg.full;
    if (cfg.potential_kind) overrides.potential = resolve_potential(cfg, PotentialSpec::toy());
    return overrides;
}

std::string render_config_echo(const ScenarioReport& report, const RunConfig& cfg) {
    std::ostringstream os;
    os << "# resolved configuration\n";
    if (!report.name.empty())
        os << "[scenario]\nname = " << report.name << "\nfull = " << (cfg.full ? "true" : "false")
           << "\n\n";
    os << "[ensemble]\nmodel = " << report.model << "\nn = " << report.initial.size() << "\n\n";

    const auto& spec = report.config.potential;
    os << "[potential]\nkind = ";
    switch (spec.kind) {
        case PotentialSpec::Kind::Toy:
            os << "toy\n";
            break;
        case PotentialSpec::Kind::RationalSmoothing:
            os << "rational\norder = " << spec.stencil.order << "\n";
            break;
        case PotentialSpec::Kind::Equivariance:
            os << "equivariance\n";
            break;
    }
    if (spec.kind != PotentialSpec::Kind::Toy)
        os << "edge_policy = "
           << (spec.edge_policy == EdgePolicy::SkipBoundaryTerms ? "skip" : "one_sided") << "\n";
    os << "\n[integration]\ndt = " << format_real(report.config.dt)
       << "\nsteps = " << report.config.steps << "\nrecord_every = " << report.config.record_every
       << "\npinned_left = " << report.config.pinned_left
       << "\npinned_right = " << report.config.pinned_right << "\n";

    os << "\n[output]\ndirectory = " << cfg.output_directory << "\nformats = ";
    for (std::size_t i = 0; i < cfg.output_formats.size(); ++i)
        os << (i ? "," : "") << cfg.output_formats[i];
    os << "\n";
    return os.str();
}

}  // namespace miw
