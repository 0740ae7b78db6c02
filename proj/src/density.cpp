#include "miw/density.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace miw {

namespace {
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// 0.5 erfc(-x/sqrt(2)) keeps relative accuracy in the left tail.
double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }
}  // namespace

DensityModel::DensityModel(DensityKind kind, const PhysicalParams& params)
    : kind_(kind), params_(params) {
    params_.validate();
}

double DensityModel::density(double X) const {
    const double g = normal_pdf(X);
    return kind_ == DensityKind::HarmonicGround ? g : X * X * g;
}

double DensityModel::cdf(double X) const {
    if (kind_ == DensityKind::HarmonicGround) return normal_cdf(X);
    // d/dX [Phi(X) - X phi(X)] = X^2 phi(X)
    return normal_cdf(X) - X * normal_pdf(X);
}

double DensityModel::inverse_cdf(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        std::ostringstream msg;
        msg << "quantile argument must lie strictly inside (0,1), got " << u;
        throw DomainError(msg.str());
    }
    if (u == 0.5) return 0.0;  // both densities are even

    double lo = -1.0, hi = 1.0;
    while (cdf(lo) >= u && lo > -512.0) lo *= 2.0;
    while (cdf(hi) <= u && hi < 512.0) hi *= 2.0;

    // Bisection with Newton steps accepted only while they stay bracketed;
    // near the excited node the density vanishes and bisection takes over.
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = cdf(x) - u;
        if (f == 0.0) return x;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        double next = 0.5 * (lo + hi);
        const double slope = density(x);
        if (slope > 0.0) {
            const double newton = x - f / slope;
            if (newton > lo && newton < hi) next = newton;
        }
        if (next == x || !(hi - lo > 1e-16 * (1.0 + std::abs(x)))) break;
        x = next;
    }
    return x;
}

WorldEnsemble DensityModel::sample_worlds(int N) const {
    if (N < 1) throw DomainError("world count must be at least 1");
    if (kind_ == DensityKind::HarmonicFirstExcited && N % 2 == 1) {
        throw DomainError(
            "first-excited sampling needs an even world count: "
            "an odd count puts a world on the node at x = 0");
    }
    std::vector<double> x(static_cast<std::size_t>(N));
    for (int n = 0; n < N / 2; ++n) {
        const double u = (n + 0.5) / N;
        x[static_cast<std::size_t>(n)] = inverse_cdf(u);
        x[static_cast<std::size_t>(N - 1 - n)] = -x[static_cast<std::size_t>(n)];
    }
    if (N % 2 == 1) x[static_cast<std::size_t>(N / 2)] = 0.0;

    auto ensemble = WorldEnsemble::at_rest(std::move(x));
    require_valid(ensemble);
    return ensemble;
}

double DensityModel::bohmian_force(double x) const {
    if (kind_ == DensityKind::HarmonicFirstExcited && x == 0.0) {
        throw DomainError("the stationary force reference is undefined on the node x = 0");
    }
    return params_.mass * params_.omega * params_.omega * x;
}

DensityKind density_kind_from_string(const std::string& name) {
    if (name == "ground") return DensityKind::HarmonicGround;
    if (name == "excited") return DensityKind::HarmonicFirstExcited;
    throw ConfigError("unknown density model '" + name + "' (expected ground or excited)");
}

std::string to_string(DensityKind kind) {
    return kind == DensityKind::HarmonicGround ? "ground" : "excited";
}

}  // namespace miw
