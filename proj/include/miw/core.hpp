#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "miw/errors.hpp"

namespace miw {

/// Parameters of a one-dimensional particle in a harmonic trap.
struct PhysicalParams {
    double mass = 1.0;
    double hbar = 1.0;
    double omega = 1.0;

    bool valid() const {
        return mass > 0.0 && hbar > 0.0 && omega > 0.0;
    }
    /// Throws DomainError unless all parameters are positive and finite.
    void validate() const;
};

/// Effective constants of the dimensionless frame used internally.
///
/// All simulation state is kept in scaled coordinates
///   X = sqrt(2 m omega / hbar) x,   T = omega t / (2 pi),
/// in which every harmonic-trap system looks the same: one trap period is
/// T = 1 and the ground-state density is a unit-variance Gaussian. Evolving
/// X(T) is itself Hamiltonian with
///   mass = 1,  omega = 2 pi,  hbar = 4 pi,
/// (4 pi is pinned by the unit ground-state variance hbar/(2 m omega) = 1).
/// These are the parameters to pass to the potential and integrator layers
/// when working in dimensionless coordinates.
PhysicalParams dimensionless_params();

/// X = sqrt(2 m omega / hbar) x
double to_dimensionless(double x, const PhysicalParams& p);
double from_dimensionless(double X, const PhysicalParams& p);

/// T = omega t / (2 pi); one trap period maps to T = 1.
double to_dimensionless_time(double t, const PhysicalParams& p);
double from_dimensionless_time(double T, const PhysicalParams& p);

/// P = dX/dT for unit dimensionless mass; p = m (omega/2pi) X'(T)/lambda.
double to_dimensionless_momentum(double p_phys, const PhysicalParams& p);
double from_dimensionless_momentum(double P, const PhysicalParams& p);

/// A configuration of N worlds: strictly increasing positions plus
/// conjugate momenta. pinned[n] marks worlds held fixed by the integrator.
/// Public APIs index worlds 1..N; storage is 0-based.
struct WorldEnsemble {
    std::vector<double> positions;
    std::vector<double> momenta;
    std::vector<unsigned char> pinned;

    WorldEnsemble() = default;
    /// Builds an ensemble at rest (zero momenta, nothing pinned).
    static WorldEnsemble at_rest(std::vector<double> pos);

    std::size_t size() const { return positions.size(); }
};

/// Outcome of validate_ensemble.
struct ValidityReport {
    enum class Status {
        Ok,
        Empty,
        LengthMismatch,
        NonFinite,
        NotIncreasing,
    };
    Status status = Status::Ok;
    /// For NotIncreasing / NonFinite: first offending world pair (1-based).
    /// index_b is 0 when a single world is at fault.
    int index_a = 0;
    int index_b = 0;

    bool ok() const { return status == Status::Ok; }
    std::string describe() const;
};

/// Checks sizes, finiteness and strict position ordering.
ValidityReport validate_ensemble(const WorldEnsemble& ensemble);

/// Throws DomainError with the report's description unless the ensemble is valid.
void require_valid(const WorldEnsemble& ensemble);

}  // namespace miw
