#include "miw/integrator.hpp"

#include <cmath>
#include <sstream>

namespace miw {

namespace {

double external_energy(const ExternalPotential& ext, const PhysicalParams& params,
                       std::span<const double> x) {
    if (ext.kind != ExternalPotential::Kind::Harmonic) return 0.0;
    const double k = 0.5 * params.mass * ext.omega * ext.omega;
    double sum = 0.0;
    for (double xi : x) sum += k * xi * xi;
    return sum;
}

std::vector<unsigned char> merged_pinned(const WorldEnsemble& ensemble,
                                         const SimulationConfig& cfg) {
    const std::size_t n = ensemble.size();
    auto pinned = ensemble.pinned;
    pinned.resize(n, 0);
    for (int i = 0; i < cfg.pinned_left; ++i) pinned[static_cast<std::size_t>(i)] = 1;
    for (int i = 0; i < cfg.pinned_right; ++i) pinned[n - 1 - static_cast<std::size_t>(i)] = 1;
    return pinned;
}

// Integration state. Forces are evaluated only for free worlds; the force
// found at the end of a step is reused as the start-of-step force of the
// next one, so each step costs one force evaluation.
struct Stepper {
    const SimulationConfig& cfg;
    const PhysicalParams& params;
    std::vector<double> x, p;
    std::vector<unsigned char> pinned;
    std::vector<int> free_worlds;
    std::vector<double> force;
    EvalStats stats;
    double inv_mass;
    double ext_spring;  // m omega^2, 0 when no external potential

    Stepper(const WorldEnsemble& initial, const SimulationConfig& cfg_,
            const PhysicalParams& params_)
        : cfg(cfg_), params(params_), x(initial.positions), p(initial.momenta),
          pinned(merged_pinned(initial, cfg_)) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (pinned[i])
                p[i] = 0.0;  // pinned worlds carry no momentum
            else
                free_worlds.push_back(static_cast<int>(i));
        }
        force.resize(free_worlds.size());
        inv_mass = 1.0 / params.mass;
        ext_spring = cfg.external.kind == ExternalPotential::Kind::Harmonic
                         ? params.mass * cfg.external.omega * cfg.external.omega
                         : 0.0;
    }

    void compute_forces() {
        interworld_forces_at(cfg.potential, x, params, free_worlds, force, &stats);
        if (ext_spring != 0.0) {
            for (std::size_t t = 0; t < free_worlds.size(); ++t)
                force[t] -= ext_spring * x[static_cast<std::size_t>(free_worlds[t])];
        }
    }

    void kick(double h) {
        for (std::size_t t = 0; t < free_worlds.size(); ++t)
            p[static_cast<std::size_t>(free_worlds[t])] += h * force[t];
    }

    // returns the 1-based lower world of the first broken pair, or 0
    int drift(double dt) {
        for (int m : free_worlds) {
            const auto i = static_cast<std::size_t>(m);
            x[i] += dt * p[i] * inv_mass;
        }
        const int n = static_cast<int>(x.size());
        for (int m : free_worlds) {
            if (m > 0 && !(x[static_cast<std::size_t>(m) - 1] < x[static_cast<std::size_t>(m)]))
                return m;  // pair (m, m+1) in 1-based labels
            if (m + 1 < n && !(x[static_cast<std::size_t>(m)] < x[static_cast<std::size_t>(m) + 1]))
                return m + 1;
        }
        return 0;
    }

    WorldEnsemble snapshot() const {
        WorldEnsemble e;
        e.positions = x;
        e.momenta = p;
        e.pinned = pinned;
        return e;
    }

    EnergyBreakdown energy() const {
        EnergyBreakdown e;
        for (double pi : p) e.kinetic += 0.5 * pi * pi * inv_mass;
        e.external = external_energy(cfg.external, params, x);
        e.interworld = interworld_potential(cfg.potential, x, params, nullptr);
        e.total = e.kinetic + e.external + e.interworld;
        return e;
    }
};

}  // namespace

void SimulationConfig::validate(std::size_t n_worlds) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive and finite");
    if (steps < 1) throw ConfigError("step count must be at least 1");
    if (record_every < 1) throw ConfigError("record_every must be at least 1");
    if (pinned_left < 0 || pinned_right < 0) throw ConfigError("pinned counts must be non-negative");
    if (static_cast<std::size_t>(pinned_left) + static_cast<std::size_t>(pinned_right) >= n_worlds)
        throw ConfigError("at least one world must remain free");
    if (external.kind == ExternalPotential::Kind::Harmonic && !(external.omega > 0.0))
        throw ConfigError("harmonic trap frequency must be positive");
}

EnergyBreakdown total_energy(const WorldEnsemble& ensemble, const SimulationConfig& cfg,
                             const PhysicalParams& params) {
    require_valid(ensemble);
    params.validate();
    EnergyBreakdown e;
    for (double pi : ensemble.momenta) e.kinetic += 0.5 * pi * pi / params.mass;
    e.external = external_energy(cfg.external, params, ensemble.positions);
    e.interworld = interworld_potential(cfg.potential, ensemble.positions, params, nullptr);
    e.total = e.kinetic + e.external + e.interworld;
    return e;
}

WorldEnsemble step(const WorldEnsemble& ensemble, const SimulationConfig& cfg,
                   const PhysicalParams& params) {
    require_valid(ensemble);
    params.validate();
    cfg.validate(ensemble.size());

    Stepper s(ensemble, cfg, params);
    s.compute_forces();
    s.kick(0.5 * cfg.dt);
    if (const int lower = s.drift(cfg.dt)) {
        std::ostringstream msg;
        msg << "worlds " << lower << " and " << lower + 1 << " crossed during the step";
        throw CollapseError(msg.str(), 1, lower);
    }
    s.compute_forces();
    s.kick(0.5 * cfg.dt);
    return s.snapshot();
}

TrajectoryRecord run(const WorldEnsemble& initial, const SimulationConfig& cfg,
                     const PhysicalParams& params, const StepObserver& observer) {
    require_valid(initial);
    params.validate();
    cfg.validate(initial.size());

    Stepper s(initial, cfg, params);
    TrajectoryRecord record;
    const auto record_frame = [&](long long k) {
        record.steps.push_back(k);
        record.times.push_back(static_cast<double>(k) * cfg.dt);
        record.snapshots.push_back(s.snapshot());
        record.energies.push_back(s.energy());
    };

    s.compute_forces();
    record_frame(0);
    for (long long k = 1; k <= cfg.steps; ++k) {
        s.kick(0.5 * cfg.dt);
        if (const int lower = s.drift(cfg.dt)) {
            std::ostringstream msg;
            msg << "worlds " << lower << " and " << lower + 1 << " crossed at step " << k;
            record.collapse = CollapseDiagnosis{k, lower, static_cast<double>(k) * cfg.dt};
            break;
        }
        s.compute_forces();
        s.kick(0.5 * cfg.dt);

        const bool keep_going = !observer || observer(k, s.x);
        if (k % cfg.record_every == 0 || k == cfg.steps || !keep_going) record_frame(k);
        if (!keep_going) break;
    }
    record.stats = s.stats;
    return record;
}

}  // namespace miw
