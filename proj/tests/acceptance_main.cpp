// Acceptance gate: exercises the full stack end to end and prints one
// pass/fail line per criterion with the measured numbers. Exits nonzero
// if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "miw/density.hpp"
#include "miw/integrator.hpp"
#include "miw/potential.hpp"
#include "miw/scenarios.hpp"
#include "miw/stencil.hpp"
#include "reference_values.hpp"

using namespace miw;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int failures = 0;

void report_line(int id, const char* label, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("criterion %2d (%s): %s  [%s]\n", id, label, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

WorldEnsemble random_ensemble(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> gap(0.3, 1.2);
    std::uniform_real_distribution<double> start(-3.0, 0.0);
    WorldEnsemble e;
    double x = start(rng);
    for (int i = 0; i < n; ++i) {
        e.positions.push_back(x);
        x += gap(rng);
    }
    e.momenta.assign(static_cast<std::size_t>(n), 0.0);
    e.pinned.assign(static_cast<std::size_t>(n), 0);
    return e;
}

double potential_of(const PotentialSpec& spec, const std::vector<double>& x) {
    return interworld_potential(spec, x, dimensionless_params());
}

std::vector<double> forces_of(const PotentialSpec& spec, const std::vector<double>& x) {
    std::vector<double> f(x.size());
    interworld_forces(spec, x, dimensionless_params(), f);
    return f;
}

// Fourth-order central difference of the potential along coordinate i.
double fd_force(const PotentialSpec& spec, std::vector<double> x, std::size_t i, double h) {
    const auto at = [&](double dx) {
        const double keep = x[i];
        x[i] = keep + dx;
        const double u = potential_of(spec, x);
        x[i] = keep;
        return u;
    };
    return -(8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
}

double gradient_error(const PotentialSpec& spec, const WorldEnsemble& e) {
    const auto f = forces_of(spec, e.positions);
    double scale = 1.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < e.positions.size(); ++i)
        min_gap = std::min(min_gap, e.positions[i] - e.positions[i - 1]);
    const double h = 1e-4 * min_gap;
    double worst = 0.0;
    for (std::size_t i = 0; i < e.positions.size(); ++i)
        worst = std::max(worst, std::abs(f[i] - fd_force(spec, e.positions, i, h)) / scale);
    return worst;
}

// --- criterion 1: the weight solver reproduces the known matrices exactly
void criterion_stencils() {
    bool exact = true;
    const auto l2 = build_stencil_exact(OffsetSet::symmetric(1), 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            exact = exact && l2[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].str() ==
                                 refvals::kStencilL2Exact[r][c];
    const auto l4 = build_stencil_exact(OffsetSet::symmetric(2), 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            exact = exact && l4[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].str() ==
                                 refvals::kStencilL4Exact[r][c];
    double worst = 0.0;
    for (int order : {2, 4, 6, 8})
        worst = std::max(worst, stencil_residual(build_stencil(OffsetSet::symmetric(order / 2),
                                                               order)));
    const bool pass = exact && worst <= 1e-12;
    report_line(1, "stencil exactness", pass,
                std::string("order 2/4 weights ") + (exact ? "exact" : "WRONG") +
                    "; max moment residual " + num(worst) + " over orders {2,4,6,8}");
}

// --- criterion 2: analytic forces match finite differences of the energy
void criterion_gradients() {
    std::mt19937 rng(20260815u);
    double worst_main = 0.0;
    double worst_equiv = 0.0;
    int ensembles = 0;
    for (int trial = 0; trial < 120; ++trial) {
        // first ten trials cover the smallest sizes; the rest leave room
        // for the widest stencil so every family sees >= 100 ensembles
        const int n = trial < 10 ? 5 + trial % 2
                                 : std::uniform_int_distribution<int>(7, 50)(rng);
        const auto e = random_ensemble(rng, n);
        worst_main = std::max(worst_main, gradient_error(PotentialSpec::toy(), e));
        worst_main = std::max(worst_main, gradient_error(PotentialSpec::rational_smoothing(2), e));
        worst_main = std::max(worst_main, gradient_error(PotentialSpec::rational_smoothing(4), e));
        if (n >= 7)
            worst_main =
                std::max(worst_main, gradient_error(PotentialSpec::rational_smoothing(6), e));
        worst_equiv = std::max(worst_equiv, gradient_error(PotentialSpec::equivariance(), e));
        ++ensembles;
    }
    const bool pass = worst_main <= 1e-6 && worst_equiv <= 1e-5;
    report_line(2, "gradient correctness", pass,
                std::to_string(ensembles) + " ensembles, N in 5..50; worst rel err " +
                    num(worst_main) + " (toy/rational), " + num(worst_equiv) + " (equivariance)");
}

// --- criterion 3: translation invariance, 1/lambda^2 scaling, force balance
void criterion_symmetries() {
    std::mt19937 rng(7u);
    const auto e = random_ensemble(rng, 30);
    const std::vector<PotentialSpec> all = {
        PotentialSpec::toy(), PotentialSpec::rational_smoothing(2),
        PotentialSpec::rational_smoothing(4), PotentialSpec::rational_smoothing(6),
        PotentialSpec::equivariance()};
    const double shift = 17.25;
    const double lambda = 3.7;
    double translation_err = 0.0;
    double scaling_err = 0.0;
    double balance_err = 0.0;
    for (const auto& spec : all) {
        const double u = potential_of(spec, e.positions);
        const auto f = forces_of(spec, e.positions);
        double f_scale = 1.0;
        double f_sum = 0.0;
        double f_abs = 0.0;
        for (double v : f) {
            f_scale = std::max(f_scale, std::abs(v));
            f_sum += v;
            f_abs += std::abs(v);
        }
        balance_err = std::max(balance_err, std::abs(f_sum) / f_abs);

        std::vector<double> shifted = e.positions;
        for (double& v : shifted) v += shift;
        translation_err =
            std::max(translation_err, std::abs(potential_of(spec, shifted) - u) / std::abs(u));
        const auto ft = forces_of(spec, shifted);
        for (std::size_t i = 0; i < f.size(); ++i)
            translation_err = std::max(translation_err, std::abs(ft[i] - f[i]) / f_scale);

        if (spec.kind != PotentialSpec::Kind::Equivariance) {
            std::vector<double> scaled = e.positions;
            for (double& v : scaled) v *= lambda;
            const double us = potential_of(spec, scaled);
            scaling_err = std::max(scaling_err, std::abs(us * lambda * lambda - u) / std::abs(u));
        }
    }
    const bool pass = translation_err <= 1e-10 && scaling_err <= 1e-9 && balance_err <= 1e-8;
    report_line(3, "symmetry suite", pass,
                "translation " + num(translation_err) + ", 1/lambda^2 scaling " +
                    num(scaling_err) + ", net force " + num(balance_err));
}

// --- criteria 4+5 share one ground-state run over a full period
void criteria_ground_run(const ScenarioReport& fig1) {
    const double drift = fig1.metrics.at("energy_drift_rel");

    const auto initial = DensityModel(DensityKind::HarmonicGround).sample_worlds(50);
    SimulationConfig cfg;
    cfg.potential = PotentialSpec::toy();
    cfg.external = ExternalPotential::harmonic(kTwoPi);
    cfg.dt = 1e-5;
    cfg.steps = 1000;
    cfg.record_every = 1000;
    const auto forward = run(initial, cfg, dimensionless_params());
    WorldEnsemble turned = forward.snapshots.back();
    for (double& p : turned.momenta) p = -p;
    const auto back = run(turned, cfg, dimensionless_params());
    double comeback = 0.0;
    for (std::size_t i = 0; i < initial.size(); ++i)
        comeback = std::max(comeback, std::abs(back.snapshots.back().positions[i] -
                                               initial.positions[i]));
    const bool pass4 = drift <= 1e-6 && comeback <= 1e-10;
    report_line(4, "energy conservation", pass4,
                "rel drift " + num(drift) + " over 1e5 steps; reversibility gap " +
                    num(comeback) + " after 2x1000 steps");

    // inner 40 of the 50 free worlds stay within 20% of their local spacing
    double worst_ratio = 0.0;
    const auto& x0 = fig1.initial.positions;
    for (std::size_t t = 5; t < 45; ++t) {
        const std::size_t i = static_cast<std::size_t>(fig1.free_worlds[t] - 1);
        double spacing = std::numeric_limits<double>::infinity();
        if (i > 0) spacing = x0[i] - x0[i - 1];
        if (i + 1 < x0.size()) spacing = std::min(spacing, x0[i + 1] - x0[i]);
        worst_ratio = std::max(worst_ratio, fig1.amplitudes[t] / spacing);
    }
    report_line(5, "ground-state stationarity", worst_ratio <= 0.2,
                "max inner-world displacement " + num(worst_ratio * 100.0) +
                    "% of local spacing over one period");
}

// --- criterion 6: sampled mean energy approaches the half-quantum
void criterion_energy_convergence() {
    const auto mean_at = [](int n) {
        const auto e = DensityModel(DensityKind::HarmonicGround).sample_worlds(n);
        SimulationConfig cfg;
        cfg.potential = PotentialSpec::toy();
        cfg.external = ExternalPotential::harmonic(kTwoPi);
        return total_energy(e, cfg, dimensionless_params()).total / n;
    };
    const double mean100 = mean_at(100);
    const double mean1000 = mean_at(1000);
    const double dev100 = (mean100 - refvals::kMeanEnergyTarget) / refvals::kMeanEnergyTarget;
    const double dev1000 = (mean1000 - refvals::kMeanEnergyTarget) / refvals::kMeanEnergyTarget;
    const bool agrees = std::abs(mean100 - refvals::kToyMeanEnergyN100) <= 1e-8 &&
                        std::abs(mean1000 - refvals::kToyMeanEnergyN1000) <= 1e-8;
    const bool pass = std::abs(dev1000) < std::abs(dev100) && std::abs(dev1000) <= 0.10 && agrees;
    report_line(6, "ground-state energy convergence", pass,
                "rel deviation " + num(dev100) + " at N=100 -> " + num(dev1000) +
                    " at N=1000" + (agrees ? "" : "; MISMATCH vs frozen reference"));
}

// --- criterion 7: the nearest-neighbour model loses the node
void criterion_node_failure() {
    const auto coarse = run_scenario("fig3_truncated_toy");
    ScenarioOverrides fine;
    fine.dt = 1e-9;
    const auto refined = run_scenario("fig3_truncated_toy", fine);
    const bool coarse_ok = coarse.outcome == Outcome::NodeCollapse &&
                           coarse.metrics.at("collapse_time") < 0.1;
    const bool fine_ok = refined.outcome == Outcome::NodeCollapse &&
                         refined.metrics.at("collapse_time") < 0.1;
    report_line(7, "toy node failure", coarse_ok && fine_ok,
                "collapse at T=" + num(coarse.metrics.at("collapse_time")) + " (dt 1e-8), T=" +
                    num(refined.metrics.at("collapse_time")) + " (dt 1e-9)");
}

// --- criterion 8: order 4 keeps the node pair in place (desk horizon)
double criterion_node_stability() {
    const auto fig4 = run_scenario("fig4_two_free_L4");
    const double amp = fig4.metrics.at("amplitude_max");
    const double gap = fig4.metrics.at("gap_width_initial");
    const bool pass = fig4.outcome != Outcome::NodeCollapse && amp <= 0.1 * gap;
    report_line(8, "order-4 node stability", pass,
                "max amplitude " + num(amp) + " = " + num(amp / gap * 100.0) +
                    "% of the node gap " + num(gap));
    return amp;
}

// --- criterion 9: raising the order shrinks every world's oscillation
void criterion_order_improves() {
    const auto l4 = run_scenario("fig5_ten_free_L4");
    const auto l6 = run_scenario("fig6_ten_free_L6");
    bool strict = l4.amplitudes.size() == l6.amplitudes.size();
    double worst_ratio = 0.0;
    if (strict)
        for (std::size_t t = 0; t < l4.amplitudes.size(); ++t) {
            strict = strict && l6.amplitudes[t] < l4.amplitudes[t];
            worst_ratio = std::max(worst_ratio, l6.amplitudes[t] / l4.amplitudes[t]);
        }
    const auto held = [](const ScenarioReport& r) {
        return r.outcome != Outcome::NodeCollapse &&
               r.metrics.at("gap_width_min") >= 0.5 * r.metrics.at("gap_width_initial");
    };
    const bool pass = strict && held(l4) && held(l6);
    report_line(9, "higher order damps oscillations", pass,
                "order-6 amplitude <= " + num(worst_ratio * 100.0) +
                    "% of order-4 per world; no collapse in either run");
}

// --- criterion 10: equal-area fits hold and the fit-based run stays open
void criterion_equivariance(double fig4_amplitude) {
    double worst_area = 0.0;
    const std::vector<WorldEnsemble> probes = {
        DensityModel(DensityKind::HarmonicFirstExcited).sample_worlds(40),
        DensityModel(DensityKind::HarmonicGround).sample_worlds(51)};
    for (const auto& e : probes) {
        const int n_worlds = static_cast<int>(e.size());
        for (int n = 3; n <= n_worlds - 2; ++n) {
            const auto c = equivariance_coefficients(e, n);
            const auto integral = [&](double x) {
                return x * (c.a + x * (c.b / 2 + x * (c.c / 3 + x * c.d / 4)));
            };
            for (int k = 0; k < 4; ++k) {
                const auto lo = e.positions[static_cast<std::size_t>(n - 3 + k)];
                const auto hi = e.positions[static_cast<std::size_t>(n - 2 + k)];
                worst_area =
                    std::max(worst_area, std::abs(integral(hi) - integral(lo) - 1.0 / n_worlds));
            }
        }
    }
    const auto figA1 = run_scenario("figA1_two_free_equiv");
    const double amp = figA1.metrics.at("amplitude_max");
    const bool pass = worst_area <= 1e-10 && figA1.outcome != Outcome::NodeCollapse &&
                      amp > fig4_amplitude;
    report_line(10, "equivariance equal areas and stability", pass,
                "max equal-area violation " + num(worst_area) + "; amplitude " + num(amp) +
                    " vs " + num(fig4_amplitude) + " for order 4, no collapse");
}

// --- criterion 11: force error vs the stationary oracle falls with order
void criterion_force_trend() {
    const DensityModel model(DensityKind::HarmonicGround);
    struct Trend {
        double e2, e4, e6;
    };
    const auto trend_at = [&](int n) {
        const auto e = model.sample_worlds(n);
        const int lo = n / 10;
        const int hi = n - n / 10;
        const auto rel_rms = [&](int order) {
            const auto f = forces_of(PotentialSpec::rational_smoothing(order), e.positions);
            double dev2 = 0.0;
            double ref2 = 0.0;
            for (int i = lo; i < hi; ++i) {
                const double oracle = model.bohmian_force(e.positions[static_cast<std::size_t>(i)]);
                const double d = f[static_cast<std::size_t>(i)] - oracle;
                dev2 += d * d;
                ref2 += oracle * oracle;
            }
            return std::sqrt(dev2 / ref2);
        };
        return Trend{rel_rms(2), rel_rms(4), rel_rms(6)};
    };
    const auto t5000 = trend_at(5000);
    const bool pass = t5000.e2 > t5000.e4 && t5000.e4 > t5000.e6;
    std::string detail = "central-80% rel RMS vs +m*omega^2*x at N=5000: L2=" + num(t5000.e2) +
                         ", L4=" + num(t5000.e4) + ", L6=" + num(t5000.e6);
    if (!pass) {
        const auto t200 = trend_at(200);
        detail += "; not decreasing: at this N the 1-ulp rounding of the sampled positions, "
                  "amplified by reciprocal gap powers that grow with N and order, exceeds the "
                  "truncation error; the trend holds where truncation dominates, e.g. N=200: L2=" +
                  num(t200.e2) + ", L4=" + num(t200.e4) + ", L6=" + num(t200.e6);
    }
    report_line(11, "force-oracle trend", pass, detail);
}

}  // namespace

int main() {
    try {
        criterion_stencils();
        criterion_gradients();
        criterion_symmetries();
        const auto fig1 = run_scenario("fig1_ground_toy");
        criteria_ground_run(fig1);
        criterion_energy_convergence();
        criterion_node_failure();
        const double fig4_amplitude = criterion_node_stability();
        criterion_order_improves();
        criterion_equivariance(fig4_amplitude);
        criterion_force_trend();
    } catch (const std::exception& err) {
        std::printf("acceptance run aborted: %s\n", err.what());
        return 2;
    }
    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
