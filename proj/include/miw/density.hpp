#pragma once

#include "miw/core.hpp"

namespace miw {

enum class DensityKind {
    HarmonicGround,
    HarmonicFirstExcited,
};

/// Closed-form trap eigenstate densities in dimensionless coordinates.
///
/// Ground:        P(X) = exp(-X^2/2) / sqrt(2 pi)
/// First excited: P(X) = X^2 exp(-X^2/2) / sqrt(2 pi)
///
/// Both are normalised; the excited density has a node at X = 0.
class DensityModel {
public:
    explicit DensityModel(DensityKind kind,
                          const PhysicalParams& params = dimensionless_params());

    DensityKind kind() const { return kind_; }
    const PhysicalParams& params() const { return params_; }

    double density(double X) const;

    /// Cumulative distribution, exact via the error function.
    double cdf(double X) const;

    /// Solves cdf(X) = u for u in (0,1) by bracketed bisection polished with
    /// Newton steps; the result satisfies |cdf(X) - u| <= 1e-12.
    double inverse_cdf(double u) const;

    /// Equal-weight sample: world n sits at the (n - 1/2)/N quantile.
    /// Momenta are zero. Even densities are sampled mirror-symmetrically,
    /// so x_n == -x_{N+1-n} exactly. The excited state rejects odd N
    /// (a world would land on the node).
    WorldEnsemble sample_worlds(int N) const;

    /// Force a pilot-wave trajectory would feel in a stationary eigenstate:
    /// exactly +m omega^2 x, cancelling the trap. Reference value for
    /// interworld-force checks. The excited state rejects x == 0 (node).
    double bohmian_force(double x) const;

private:
    DensityKind kind_;
    PhysicalParams params_;
};

/// Parses "ground" / "excited" (as used by the CLI and config files).
DensityKind density_kind_from_string(const std::string& name);
std::string to_string(DensityKind kind);

}  // namespace miw
