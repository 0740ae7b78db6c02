#include "miw/core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace miw {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double scale_factor(const PhysicalParams& p) {
    return std::sqrt(2.0 * p.mass * p.omega / p.hbar);
}
}  // namespace

void PhysicalParams::validate() const {
    if (!std::isfinite(mass) || !std::isfinite(hbar) || !std::isfinite(omega) || !valid()) {
        std::ostringstream msg;
        msg << "physical parameters must be positive and finite (mass=" << mass
            << ", hbar=" << hbar << ", omega=" << omega << ")";
        throw DomainError(msg.str());
    }
}

PhysicalParams dimensionless_params() {
    // See the header: unit ground-state variance forces hbar = 4 pi here.
    return PhysicalParams{1.0, 2.0 * kTwoPi, kTwoPi};
}

double to_dimensionless(double x, const PhysicalParams& p) {
    p.validate();
    return scale_factor(p) * x;
}

double from_dimensionless(double X, const PhysicalParams& p) {
    p.validate();
    return X / scale_factor(p);
}

double to_dimensionless_time(double t, const PhysicalParams& p) {
    p.validate();
    return p.omega * t / kTwoPi;
}

double from_dimensionless_time(double T, const PhysicalParams& p) {
    p.validate();
    return kTwoPi * T / p.omega;
}

double to_dimensionless_momentum(double p_phys, const PhysicalParams& p) {
    p.validate();
    return p_phys * scale_factor(p) * kTwoPi / (p.mass * p.omega);
}

double from_dimensionless_momentum(double P, const PhysicalParams& p) {
    p.validate();
    return P * p.mass * p.omega / (scale_factor(p) * kTwoPi);
}

WorldEnsemble WorldEnsemble::at_rest(std::vector<double> pos) {
    WorldEnsemble e;
    e.momenta.assign(pos.size(), 0.0);
    e.pinned.assign(pos.size(), 0);
    e.positions = std::move(pos);
    return e;
}

std::string ValidityReport::describe() const {
    std::ostringstream msg;
    switch (status) {
        case Status::Ok:
            return "ok";
        case Status::Empty:
            return "ensemble is empty";
        case Status::LengthMismatch:
            return "positions, momenta and pinned flags differ in length";
        case Status::NonFinite:
            msg << "non-finite entry at world " << index_a;
            return msg.str();
        case Status::NotIncreasing:
            msg << "positions not strictly increasing: worlds " << index_a << " and " << index_b;
            return msg.str();
    }
    return "unknown";
}

ValidityReport validate_ensemble(const WorldEnsemble& ensemble) {
    ValidityReport report;
    const auto n = ensemble.positions.size();
    if (n == 0) {
        report.status = ValidityReport::Status::Empty;
        return report;
    }
    if (ensemble.momenta.size() != n || ensemble.pinned.size() != n) {
        report.status = ValidityReport::Status::LengthMismatch;
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(ensemble.positions[i]) || !std::isfinite(ensemble.momenta[i])) {
            report.status = ValidityReport::Status::NonFinite;
            report.index_a = static_cast<int>(i) + 1;
            return report;
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(ensemble.positions[i] < ensemble.positions[i + 1])) {
            report.status = ValidityReport::Status::NotIncreasing;
            report.index_a = static_cast<int>(i) + 1;
            report.index_b = static_cast<int>(i) + 2;
            return report;
        }
    }
    return report;
}

void require_valid(const WorldEnsemble& ensemble) {
    const auto report = validate_ensemble(ensemble);
    if (!report.ok()) throw DomainError("invalid ensemble: " + report.describe());
}

}  // namespace miw
