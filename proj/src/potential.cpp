#include "miw/potential.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace miw {

namespace {

double kappa_of(const PhysicalParams& params) {
    return params.hbar * params.hbar / (8.0 * params.mass);
}

// ---------------------------------------------------------------- toy family
//
// U/kappa = sum_n s_n^2, s_n = r_n - r_{n-1}, r_i = 1/(x_{i+1} - x_i),
// reciprocals beyond the ends count as zero. Differentiating,
//   -dU/dx_m / kappa = 2 r_m^2 (s_{m+1} - s_m) + 2 r_{m-1}^2 (s_{m-1} - s_m).

struct ToyView {
    std::span<const double> x;
    int n;

    double r(int i) const {
        if (i < 0 || i >= n - 1) return 0.0;
        const double gap = x[static_cast<std::size_t>(i) + 1] - x[static_cast<std::size_t>(i)];
        if (!(gap > 0.0)) throw SingularityError("coincident worlds: zero gap", i + 1);
        return 1.0 / gap;
    }
    double s(int i) const {
        if (i < 0 || i > n - 1) return 0.0;
        return r(i) - r(i - 1);
    }
};

double toy_energy_span(std::span<const double> x, double kappa) {
    const ToyView view{x, static_cast<int>(x.size())};
    double sum = 0.0;
    double prev_r = 0.0;
    for (int i = 0; i < view.n; ++i) {
        const double ri = view.r(i);
        const double si = ri - prev_r;
        sum += si * si;
        prev_r = ri;
    }
    return kappa * sum;
}

void toy_forces_targets(std::span<const double> x, double kappa, std::span<const int> targets,
                        std::span<double> out) {
    const ToyView view{x, static_cast<int>(x.size())};
    if (targets.empty()) return;

    // A target needs the four reciprocal gaps m-2..m+1. When the targets sit
    // in a narrow window (the usual case: a free block inside pinned worlds)
    // share them through a stack buffer instead of recomputing per world.
    int lo = targets[0], hi = targets[0];
    for (int m : targets) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    constexpr int kBuf = 4096;
    const int gap_lo = std::max(0, lo - 2);
    const int gap_hi = std::min(view.n - 2, hi + 1);
    const int width = gap_hi - gap_lo + 1;
    if (width > 0 && width <= kBuf) {
        double r[kBuf];
        for (int i = gap_lo; i <= gap_hi; ++i) r[i - gap_lo] = view.r(i);
        const auto rr = [&](int i) { return i < gap_lo || i > gap_hi ? 0.0 : r[i - gap_lo]; };
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const int m = targets[t];
            const double r2 = rr(m - 2), r1 = rr(m - 1), r0 = rr(m), rp = rr(m + 1);
            const double sl = r1 - r2, sm = r0 - r1, sh = rp - r0;
            out[t] = kappa * (2.0 * r0 * r0 * (sh - sm) + 2.0 * r1 * r1 * (sl - sm));
        }
        return;
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const int m = targets[t];
        const double rm = view.r(m);
        const double rl = view.r(m - 1);
        const double sm = view.s(m);
        out[t] = kappa * (2.0 * rm * rm * (view.s(m + 1) - sm) + 2.0 * rl * rl * (view.s(m - 1) - sm));
    }
}

// ---------------------------------------------------- rational smoothing
//
// Per-world term (D2_n / D1_n^2)^2 with Dl_n = sum_c alpha_{c,l}(x_{n+c}-x_n).
// SkipBoundaryTerms drops incomplete windows; OneSidedStencil rebuilds the
// weights on the offsets that fit (nearest |c| first, ties to the left).

struct RationalPlan {
    const StencilCoefficients* base = nullptr;
    EdgePolicy policy = EdgePolicy::SkipBoundaryTerms;
    int n = 0;
    int need_left = 0;    // neighbours the base window wants on the left
    int need_right = 0;
    int reach = 0;        // widest |offset| any term may use
    std::map<int, StencilCoefficients> boundary;  // term index -> rebuilt stencil

    bool active(int i) const {
        if (i >= need_left && i <= n - 1 - need_right) return true;
        return policy == EdgePolicy::OneSidedStencil;
    }
    const StencilCoefficients& term(int i) const {
        const auto it = boundary.find(i);
        return it == boundary.end() ? *base : it->second;
    }
};

StencilCoefficients build_boundary_stencil(int i, int n, int count, int order) {
    // pick `count` offsets by |c| ascending, negative first, within [ -i, n-1-i ]
    std::vector<int> picked;
    for (int a = 1; a <= n - 1 && static_cast<int>(picked.size()) < count; ++a) {
        if (a <= i) picked.push_back(-a);
        if (static_cast<int>(picked.size()) < count && a <= n - 1 - i) picked.push_back(a);
    }
    if (static_cast<int>(picked.size()) < count) {
        std::ostringstream msg;
        msg << "ensemble of " << n << " worlds is too small for a " << count << "-point stencil";
        throw SizeError(msg.str());
    }
    return build_stencil(OffsetSet(std::move(picked)), order);
}

RationalPlan make_rational_plan(const StencilCoefficients& stencil, EdgePolicy policy, int n) {
    if (stencil.order < 2 || stencil.count() < stencil.order)
        throw DomainError("stencil must provide at least order >= 2 and as many offsets");
    RationalPlan plan;
    plan.base = &stencil;
    plan.policy = policy;
    plan.n = n;
    for (int c : stencil.offsets) {
        plan.need_left = std::max(plan.need_left, -c);
        plan.need_right = std::max(plan.need_right, c);
    }
    plan.reach = stencil.max_offset();
    if (policy == EdgePolicy::SkipBoundaryTerms) {
        if (n - plan.need_left - plan.need_right < 1) {
            std::ostringstream msg;
            msg << "no world has the full stencil window inside an ensemble of " << n;
            throw SizeError(msg.str());
        }
        return plan;
    }
    const int count = stencil.count();
    if (n - 1 < count) {
        std::ostringstream msg;
        msg << "one-sided stencils need at least " << count + 1 << " worlds, got " << n;
        throw SizeError(msg.str());
    }
    for (int i = 0; i < n; ++i) {
        if (i >= plan.need_left && i <= n - 1 - plan.need_right) continue;
        auto rebuilt = build_boundary_stencil(i, n, count, stencil.order);
        plan.reach = std::max(plan.reach, rebuilt.max_offset());
        plan.boundary.emplace(i, std::move(rebuilt));
    }
    return plan;
}

struct RationalTerm {
    double d1 = 0, d2 = 0;
    const StencilCoefficients* stencil = nullptr;
};

RationalTerm rational_term(const RationalPlan& plan, std::span<const double> x, int i,
                           EvalStats* stats) {
    RationalTerm term;
    term.stencil = &plan.term(i);
    const auto& st = *term.stencil;
    const double xi = x[static_cast<std::size_t>(i)];
    for (int k = 0; k < st.count(); ++k) {
        const double diff = x[static_cast<std::size_t>(i + st.offsets[static_cast<std::size_t>(k)])] - xi;
        term.d1 += st.at(k, 1) * diff;
        term.d2 += st.at(k, 2) * diff;
    }
    const int lo = st.offsets.front();
    const int hi = st.offsets.back();
    const double span_x = x[static_cast<std::size_t>(i + hi)] - x[static_cast<std::size_t>(i + lo)];
    const double gap_scale = span_x / (hi - lo);
    if (stats) stats->observe(gap_scale > 0.0 ? std::abs(term.d1) / gap_scale : 0.0);
    if (term.d1 == 0.0)
        throw SingularityError("stencil first-derivative estimate vanished", i + 1);
    return term;
}

double rational_energy_span(std::span<const double> x, const RationalPlan& plan, double kappa,
                            EvalStats* stats) {
    double sum = 0.0;
    for (int i = 0; i < plan.n; ++i) {
        if (!plan.active(i)) continue;
        const auto term = rational_term(plan, x, i, stats);
        const double q = term.d2 / (term.d1 * term.d1);
        sum += q * q;
    }
    return kappa * sum;
}

void rational_forces_targets(std::span<const double> x, const RationalPlan& plan, double kappa,
                             std::span<const int> targets, std::span<double> out,
                             EvalStats* stats) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const int m = targets[t];
        double force = 0.0;
        for (int i = std::max(0, m - plan.reach); i <= std::min(plan.n - 1, m + plan.reach); ++i) {
            if (!plan.active(i)) continue;
            const auto term = rational_term(plan, x, i, stats);
            const auto& st = *term.stencil;
            double dd1 = 0.0, dd2 = 0.0;
            if (i == m) {
                for (int k = 0; k < st.count(); ++k) {
                    dd1 -= st.at(k, 1);
                    dd2 -= st.at(k, 2);
                }
            } else {
                bool touches = false;
                for (int k = 0; k < st.count(); ++k) {
                    if (i + st.offsets[static_cast<std::size_t>(k)] == m) {
                        dd1 = st.at(k, 1);
                        dd2 = st.at(k, 2);
                        touches = true;
                        break;
                    }
                }
                if (!touches) continue;
            }
            const double d1 = term.d1;
            const double q = term.d2 / (d1 * d1);
            // d/dx (q^2) = 2q (dd2 - 2 q d1 dd1) / d1^2
            force -= kappa * 2.0 * q * (dd2 - 2.0 * q * d1 * dd1) / (d1 * d1);
        }
        out[t] = force;
    }
}

// ------------------------------------------------------------- equivariance
//
// Work in the frame of world i (xi_j = x_{b+j} - x_i, window base b), where
// the fitted density and slope at the world are just the local coefficients
// a, b of the cubic: every position dependence flows through the 4x4
// equal-area system K beta = (1/N) 1. Differentiating the solve,
//   d beta / dx_m = -K^{-1} (dK/dx_m) beta,
// so with the adjoint w solving K^T w = dT/dbeta each neighbour costs one
// sparse contraction. The local frame keeps translations exact.

struct LU4 {
    double a[4][4];
    int piv[4];

    void factor() {
        for (int i = 0; i < 4; ++i) piv[i] = i;
        for (int col = 0; col < 4; ++col) {
            int best = col;
            for (int row = col + 1; row < 4; ++row)
                if (std::abs(a[row][col]) > std::abs(a[best][col])) best = row;
            if (best != col) {
                for (int j = 0; j < 4; ++j) std::swap(a[col][j], a[best][j]);
                std::swap(piv[col], piv[best]);
            }
            if (a[col][col] == 0.0) throw SingularSystemError("singular equal-area system");
            for (int row = col + 1; row < 4; ++row) {
                const double f = a[row][col] / a[col][col];
                a[row][col] = f;
                for (int j = col + 1; j < 4; ++j) a[row][j] -= f * a[col][j];
            }
        }
    }
    // solve A x = b given PA = LU
    void solve(const double b[4], double out[4]) const {
        double y[4];
        for (int i = 0; i < 4; ++i) {
            y[i] = b[piv[i]];
            for (int j = 0; j < i; ++j) y[i] -= a[i][j] * y[j];
        }
        for (int i = 3; i >= 0; --i) {
            for (int j = i + 1; j < 4; ++j) y[i] -= a[i][j] * out[j];
            out[i] = y[i] / a[i][i];
        }
    }
    // solve A^T x = b via U^T z = b, L^T y = z, x = P^T y
    void solve_transposed(const double b[4], double out[4]) const {
        double z[4];
        for (int i = 0; i < 4; ++i) {
            z[i] = b[i];
            for (int j = 0; j < i; ++j) z[i] -= a[j][i] * z[j];
            z[i] /= a[i][i];
        }
        double y[4];
        for (int i = 3; i >= 0; --i) {
            y[i] = z[i];
            for (int j = i + 1; j < 4; ++j) y[i] -= a[j][i] * y[j];
        }
        for (int i = 0; i < 4; ++i) out[piv[i]] = y[i];
    }
};

struct EquivTerm {
    double xi[5];     // window positions relative to world i
    int base = 0;     // window start (0-based world index)
    int eval = 0;     // index of world i inside the window
    LU4 lu;
    double beta[4];   // local cubic coefficients (a, b, c, d)
};

EquivTerm equivariance_term(std::span<const double> x, int i, EdgePolicy policy,
                            EvalStats* stats) {
    const int n = static_cast<int>(x.size());
    EquivTerm term;
    term.base = policy == EdgePolicy::OneSidedStencil ? std::clamp(i - 2, 0, n - 5) : i - 2;
    term.eval = i - term.base;
    const double xi_world = x[static_cast<std::size_t>(i)];
    for (int j = 0; j < 5; ++j) term.xi[j] = x[static_cast<std::size_t>(term.base + j)] - xi_world;

    for (int r = 0; r < 4; ++r) {
        double lo = term.xi[r], hi = term.xi[r + 1];
        double plo = lo, phi = hi;
        for (int k = 0; k < 4; ++k) {
            term.lu.a[r][k] = (phi - plo) / (k + 1);
            plo *= lo;
            phi *= hi;
        }
    }
    term.lu.factor();
    const double rhs[4] = {1.0 / n, 1.0 / n, 1.0 / n, 1.0 / n};
    term.lu.solve(rhs, term.beta);

    const double gap_scale = (term.xi[4] - term.xi[0]) / 4.0;
    if (stats) stats->observe(gap_scale > 0.0 ? std::abs(term.beta[0]) * gap_scale * n : 0.0);
    if (!(term.beta[0] > 0.0))
        throw NonpositiveDensityError("fitted density is not positive at a world", i + 1);
    return term;
}

double equivariance_energy_span(std::span<const double> x, EdgePolicy policy, double kappa,
                                EvalStats* stats) {
    const int n = static_cast<int>(x.size());
    if (n < 5) throw SizeError("equivariance potential needs at least 5 worlds");
    const int lo = policy == EdgePolicy::OneSidedStencil ? 0 : 2;
    const int hi = policy == EdgePolicy::OneSidedStencil ? n - 1 : n - 3;
    double sum = 0.0;
    for (int i = lo; i <= hi; ++i) {
        const auto term = equivariance_term(x, i, policy, stats);
        const double ratio = term.beta[1] / term.beta[0];
        sum += ratio * ratio;
    }
    return kappa * sum;
}

void equivariance_forces_targets(std::span<const double> x, EdgePolicy policy, double kappa,
                                 std::span<const int> targets, std::span<double> out,
                                 EvalStats* stats) {
    const int n = static_cast<int>(x.size());
    if (n < 5) throw SizeError("equivariance potential needs at least 5 worlds");
    const int term_lo = policy == EdgePolicy::OneSidedStencil ? 0 : 2;
    const int term_hi = policy == EdgePolicy::OneSidedStencil ? n - 1 : n - 3;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const int m = targets[t];
        double force = 0.0;
        for (int i = std::max(term_lo, m - 4); i <= std::min(term_hi, m + 4); ++i) {
            const auto term = equivariance_term(x, i, policy, stats);
            if (m < term.base || m > term.base + 4) continue;
            const double a = term.beta[0];
            const double b = term.beta[1];
            // T = kappa (b/a)^2
            const double dT[4] = {kappa * -2.0 * b * b / (a * a * a), kappa * 2.0 * b / (a * a),
                                  0.0, 0.0};
            double w[4];
            term.lu.solve_transposed(dT, w);

            // rows of dK/dx_m: row r spans [xi_r, xi_{r+1}]
            const int jm = m - term.base;
            // d xi_j / dx_m = [j == jm] - [m == i]; the second piece is the
            // frame shift when the centre world itself moves
            const double self = jm == term.eval ? 1.0 : 0.0;
            double v[4] = {0, 0, 0, 0};  // dK * beta
            for (int r = 0; r < 4; ++r) {
                const double dlo = (r == jm ? 1.0 : 0.0) - self;
                const double dhi = (r + 1 == jm ? 1.0 : 0.0) - self;
                if (dlo == 0.0 && dhi == 0.0) continue;
                double plo = 1.0, phi = 1.0;
                double row = 0.0;
                for (int k = 0; k < 4; ++k) {
                    row += (phi * dhi - plo * dlo) * term.beta[k];
                    plo *= term.xi[r];
                    phi *= term.xi[r + 1];
                }
                v[r] = row;
            }
            double dot = 0.0;
            for (int r = 0; r < 4; ++r) dot += w[r] * v[r];
            force += dot;  // f_m = -dT/dx_m = +w . (dK beta)
        }
        out[t] = force;
    }
}

std::vector<int> all_targets(std::size_t n) {
    std::vector<int> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<int>(i);
    return t;
}

}  // namespace

void EvalStats::observe(double scale) {
    if (min_denominator_scale < 0.0 || scale < min_denominator_scale)
        min_denominator_scale = scale;
    if (scale < 1e-12) ++conditioning_warnings;
}

PotentialSpec PotentialSpec::toy() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::rational_smoothing(int order, EdgePolicy policy) {
    if (order < 2 || order % 2 != 0)
        throw DomainError("rational smoothing needs an even order >= 2");
    return rational_smoothing(build_stencil(OffsetSet::symmetric(order / 2), order), policy);
}

PotentialSpec PotentialSpec::rational_smoothing(StencilCoefficients stencil, EdgePolicy policy) {
    if (stencil.order < 2) throw DomainError("stencil order must be at least 2");
    if (stencil.count() < stencil.order) throw DomainError("stencil has fewer offsets than its order");
    if (!stencil.symmetric_offsets())
        throw DomainError("asymmetric offset sets give an unphysical left-right bias; "
                          "use a symmetric set");
    if (stencil_residual(stencil) > 1e-10)
        throw DomainError("stencil does not satisfy its moment conditions");
    PotentialSpec spec;
    spec.kind = Kind::RationalSmoothing;
    spec.stencil = std::move(stencil);
    spec.edge_policy = policy;
    return spec;
}

PotentialSpec PotentialSpec::equivariance(EdgePolicy policy) {
    PotentialSpec spec;
    spec.kind = Kind::Equivariance;
    spec.edge_policy = policy;
    return spec;
}

int PotentialSpec::term_halfwidth() const {
    switch (kind) {
        case Kind::Toy:
            return 1;
        case Kind::RationalSmoothing:
            return stencil.max_offset();
        case Kind::Equivariance:
            return 2;
    }
    return 0;
}

std::string PotentialSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Toy:
            os << "toy";
            break;
        case Kind::RationalSmoothing:
            os << "rational order=" << stencil.order;
            break;
        case Kind::Equivariance:
            os << "equivariance";
            break;
    }
    os << (edge_policy == EdgePolicy::SkipBoundaryTerms ? " edges=skip" : " edges=one_sided");
    return os.str();
}

double interworld_potential(const PotentialSpec& spec, std::span<const double> x,
                            const PhysicalParams& params, EvalStats* stats) {
    params.validate();
    const double kappa = kappa_of(params);
    switch (spec.kind) {
        case PotentialSpec::Kind::Toy:
            return toy_energy_span(x, kappa);
        case PotentialSpec::Kind::RationalSmoothing: {
            const auto plan = make_rational_plan(spec.stencil, spec.edge_policy,
                                                 static_cast<int>(x.size()));
            return rational_energy_span(x, plan, kappa, stats);
        }
        case PotentialSpec::Kind::Equivariance:
            return equivariance_energy_span(x, spec.edge_policy, kappa, stats);
    }
    return 0.0;
}

void interworld_forces_at(const PotentialSpec& spec, std::span<const double> x,
                          const PhysicalParams& params, std::span<const int> targets,
                          std::span<double> out, EvalStats* stats) {
    params.validate();
    const double kappa = kappa_of(params);
    switch (spec.kind) {
        case PotentialSpec::Kind::Toy:
            toy_forces_targets(x, kappa, targets, out);
            return;
        case PotentialSpec::Kind::RationalSmoothing: {
            const auto plan = make_rational_plan(spec.stencil, spec.edge_policy,
                                                 static_cast<int>(x.size()));
            rational_forces_targets(x, plan, kappa, targets, out, stats);
            return;
        }
        case PotentialSpec::Kind::Equivariance:
            equivariance_forces_targets(x, spec.edge_policy, kappa, targets, out, stats);
            return;
    }
}

void interworld_forces(const PotentialSpec& spec, std::span<const double> x,
                       const PhysicalParams& params, std::span<double> out, EvalStats* stats) {
    const auto targets = all_targets(x.size());
    interworld_forces_at(spec, x, params, targets, out, stats);
}

double toy_potential(const WorldEnsemble& ensemble, const PhysicalParams& params) {
    require_valid(ensemble);
    return interworld_potential(PotentialSpec::toy(), ensemble.positions, params);
}

std::vector<double> toy_force(const WorldEnsemble& ensemble, const PhysicalParams& params) {
    require_valid(ensemble);
    std::vector<double> out(ensemble.size());
    interworld_forces(PotentialSpec::toy(), ensemble.positions, params, out);
    return out;
}

double rational_potential(const WorldEnsemble& ensemble, const StencilCoefficients& stencil,
                          const PhysicalParams& params, EdgePolicy policy) {
    require_valid(ensemble);
    return interworld_potential(PotentialSpec::rational_smoothing(stencil, policy),
                                ensemble.positions, params);
}

std::vector<double> rational_force(const WorldEnsemble& ensemble, const StencilCoefficients& stencil,
                                   const PhysicalParams& params, EdgePolicy policy) {
    require_valid(ensemble);
    std::vector<double> out(ensemble.size());
    interworld_forces(PotentialSpec::rational_smoothing(stencil, policy), ensemble.positions,
                      params, out);
    return out;
}

EquivarianceCoefficients equivariance_coefficients(const WorldEnsemble& ensemble, int n) {
    require_valid(ensemble);
    const int N = static_cast<int>(ensemble.size());
    if (N < 5) throw SizeError("equivariance fit needs at least 5 worlds");
    if (n < 3 || n > N - 2) {
        std::ostringstream msg;
        msg << "equivariance fit needs two neighbours per side: n = " << n
            << " outside 3.." << N - 2;
        throw DomainError(msg.str());
    }
    const int i = n - 1;
    const auto term = equivariance_term(ensemble.positions, i, EdgePolicy::SkipBoundaryTerms,
                                        nullptr);
    // shift the local cubic back to the global frame: P(x) = Plocal(x - x_i)
    const double s = ensemble.positions[static_cast<std::size_t>(i)];
    const double a = term.beta[0], b = term.beta[1], c = term.beta[2], d = term.beta[3];
    EquivarianceCoefficients out;
    out.a = a - b * s + c * s * s - d * s * s * s;
    out.b = b - 2.0 * c * s + 3.0 * d * s * s;
    out.c = c - 3.0 * d * s;
    out.d = d;
    return out;
}

double equivariance_potential(const WorldEnsemble& ensemble, const PhysicalParams& params,
                              EdgePolicy policy) {
    require_valid(ensemble);
    return interworld_potential(PotentialSpec::equivariance(policy), ensemble.positions, params);
}

std::vector<double> equivariance_force(const WorldEnsemble& ensemble, const PhysicalParams& params,
                                       EdgePolicy policy) {
    require_valid(ensemble);
    std::vector<double> out(ensemble.size());
    interworld_forces(PotentialSpec::equivariance(policy), ensemble.positions, params, out);
    return out;
}

}  // namespace miw
