#pragma once

#include <span>
#include <vector>

#include "miw/core.hpp"
#include "miw/stencil.hpp"

namespace miw {

/// How interworld terms behave where the neighbour window runs off the ends.
enum class EdgePolicy {
    /// Drop terms whose window is incomplete (default).
    SkipBoundaryTerms,
    /// Rebuild the weights on the offsets that do exist (asymmetric window).
    OneSidedStencil,
};

/// Which interworld potential family to evaluate.
///
/// Every family approximates the same object, kappa * sum_n (P'_n/P_n)^2 with
/// kappa = hbar^2/(8 m), differing in how the density slope is reconstructed
/// from neighbour positions:
///   Toy               - nearest-neighbour reciprocal gaps,
///                       kappa * sum_n (1/(x_{n+1}-x_n) - 1/(x_n-x_{n-1}))^2,
///                       missing gaps at the ends count as zero;
///   RationalSmoothing - stencil-based derivative ratios,
///                       kappa * sum_n (D2_n / D1_n^2)^2 with
///                       Dl_n = sum_c alpha_{c,l} (x_{n+c} - x_n);
///   Equivariance      - per-world cubic density fit with equal-area
///                       constraints on the four surrounding gaps,
///                       kappa * sum_n (P_n'(x_n)/P_n(x_n))^2.
struct PotentialSpec {
    enum class Kind { Toy, RationalSmoothing, Equivariance };

    Kind kind = Kind::Toy;
    StencilCoefficients stencil;  ///< used by RationalSmoothing only
    EdgePolicy edge_policy = EdgePolicy::SkipBoundaryTerms;

    static PotentialSpec toy();
    /// Symmetric stencil of the given even order (offsets -L/2..L/2 sans 0).
    static PotentialSpec rational_smoothing(int order,
                                            EdgePolicy policy = EdgePolicy::SkipBoundaryTerms);
    static PotentialSpec rational_smoothing(StencilCoefficients stencil,
                                            EdgePolicy policy = EdgePolicy::SkipBoundaryTerms);
    static PotentialSpec equivariance(EdgePolicy policy = EdgePolicy::SkipBoundaryTerms);

    /// Worlds each potential term reaches on either side of its centre
    /// (1 Toy, max offset RationalSmoothing, 2 Equivariance). The force on a
    /// world responds to neighbours up to twice this far away.
    int term_halfwidth() const;
    std::string describe() const;
};

/// Evaluation health counters filled by the kernels when requested:
/// smallest |D1| (or fit density) seen relative to the local gap scale, and
/// how often it dipped below the 1e-12 conditioning threshold.
struct EvalStats {
    double min_denominator_scale = -1.0;  ///< -1 until something was evaluated
    long long conditioning_warnings = 0;

    void observe(double scale);
};

double toy_potential(const WorldEnsemble& ensemble, const PhysicalParams& params);
std::vector<double> toy_force(const WorldEnsemble& ensemble, const PhysicalParams& params);

double rational_potential(const WorldEnsemble& ensemble, const StencilCoefficients& stencil,
                          const PhysicalParams& params,
                          EdgePolicy policy = EdgePolicy::SkipBoundaryTerms);
std::vector<double> rational_force(const WorldEnsemble& ensemble, const StencilCoefficients& stencil,
                                   const PhysicalParams& params,
                                   EdgePolicy policy = EdgePolicy::SkipBoundaryTerms);

/// Cubic density fit P_n(x) = a + b x + c x^2 + d x^3 around world n
/// (1-based, 3 <= n <= N-2): the integral over each of the four gaps
/// [x_{n-2},x_{n-1}], ..., [x_{n+1},x_{n+2}] equals 1/N.
struct EquivarianceCoefficients {
    double a = 0, b = 0, c = 0, d = 0;

    double value_at(double x) const { return a + x * (b + x * (c + x * d)); }
    double slope_at(double x) const { return b + x * (2 * c + x * 3 * d); }
};

EquivarianceCoefficients equivariance_coefficients(const WorldEnsemble& ensemble, int n);

double equivariance_potential(const WorldEnsemble& ensemble, const PhysicalParams& params,
                              EdgePolicy policy = EdgePolicy::SkipBoundaryTerms);
std::vector<double> equivariance_force(const WorldEnsemble& ensemble, const PhysicalParams& params,
                                       EdgePolicy policy = EdgePolicy::SkipBoundaryTerms);

/// Kind-dispatched kernels over raw positions (strictly increasing).
/// interworld_forces_at computes forces only for the given 0-based targets,
/// touching just the terms their neighbourhoods reach; cost is independent
/// of how many other worlds sit pinned elsewhere.
double interworld_potential(const PotentialSpec& spec, std::span<const double> x,
                            const PhysicalParams& params, EvalStats* stats = nullptr);
void interworld_forces(const PotentialSpec& spec, std::span<const double> x,
                       const PhysicalParams& params, std::span<double> out,
                       EvalStats* stats = nullptr);
void interworld_forces_at(const PotentialSpec& spec, std::span<const double> x,
                          const PhysicalParams& params, std::span<const int> targets,
                          std::span<double> out, EvalStats* stats = nullptr);

}  // namespace miw
