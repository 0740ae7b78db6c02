#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "miw/density.hpp"
#include "reference_values.hpp"

using namespace miw;

namespace {
constexpr double kPi = std::numbers::pi;

double normal_pdf(double x) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * kPi); }
}

TEST_CASE("ground density is the standard normal in dimensionless units") {
    const DensityModel m(DensityKind::HarmonicGround);
    for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
        CHECK(m.density(x) == doctest::Approx(normal_pdf(x)).epsilon(1e-14));
    }
    CHECK(m.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.cdf(10.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("excited density is x^2 times the normal, with a node at zero") {
    const DensityModel m(DensityKind::HarmonicFirstExcited);
    CHECK(m.density(0.0) == 0.0);
    for (double x : {-1.5, 0.3, 2.0}) {
        CHECK(m.density(x) == doctest::Approx(x * x * normal_pdf(x)).epsilon(1e-14));
    }
    CHECK(m.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // density integrates to one: cdf spans (0, 1)
    CHECK(m.cdf(-9.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.cdf(9.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inverse_cdf solves cdf(x) = u to the documented tolerance") {
    for (auto kind : {DensityKind::HarmonicGround, DensityKind::HarmonicFirstExcited}) {
        const DensityModel m(kind);
        for (double u = 0.01; u < 1.0; u += 0.0199) {
            const double x = m.inverse_cdf(u);
            CHECK(std::abs(m.cdf(x) - u) <= 1e-12);
        }
    }
}

TEST_CASE("ground samples match the independently computed quantiles") {
    const DensityModel m(DensityKind::HarmonicGround);

    const auto e4 = m.sample_worlds(4);
    REQUIRE(e4.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(e4.positions[i] == doctest::Approx(refvals::kGroundN4[i]).epsilon(1e-14));
    }

    const auto e5 = m.sample_worlds(5);
    REQUIRE(e5.size() == 5);
    CHECK(e5.positions[2] == 0.0);  // odd count puts a world exactly at the centre
    for (int i = 0; i < 5; ++i) {
        CHECK(e5.positions[i] == doctest::Approx(refvals::kGroundN5[i]).epsilon(1e-14));
    }

    const auto e50 = m.sample_worlds(50);
    CHECK(e50.positions[0] == doctest::Approx(refvals::kGroundN50World1).epsilon(1e-14));
    CHECK(e50.positions[12] == doctest::Approx(refvals::kGroundN50World13).epsilon(1e-14));
    CHECK(e50.positions[24] == doctest::Approx(refvals::kGroundN50World25).epsilon(1e-14));
}

TEST_CASE("excited samples match the independently computed quantiles") {
    const DensityModel m(DensityKind::HarmonicFirstExcited);

    const auto e6 = m.sample_worlds(6);
    for (int i = 0; i < 6; ++i) {
        CHECK(e6.positions[i] == doctest::Approx(refvals::kExcitedN6[i]).epsilon(1e-13));
    }

    const auto e40 = m.sample_worlds(40);
    CHECK(e40.positions[0] == doctest::Approx(refvals::kExcitedN40World1).epsilon(1e-13));
    CHECK(e40.positions[20] == doctest::Approx(refvals::kExcitedN40World21).epsilon(1e-13));
    // the node pair straddles zero
    CHECK(e40.positions[19] < 0.0);
    CHECK(e40.positions[20] > 0.0);
}

TEST_CASE("samples are mirror-symmetric to the bit and at rest") {
    const DensityModel ground(DensityKind::HarmonicGround);
    const auto e = ground.sample_worlds(50);
    for (int n = 0; n < 50; ++n) {
        CHECK(e.positions[n] == -e.positions[49 - n]);
        CHECK(e.momenta[n] == 0.0);
        CHECK(e.pinned[n] == 0);
    }
    CHECK(validate_ensemble(e).ok());

    const DensityModel excited(DensityKind::HarmonicFirstExcited);
    const auto x = excited.sample_worlds(40);
    for (int n = 0; n < 40; ++n) CHECK(x.positions[n] == -x.positions[39 - n]);
    CHECK(validate_ensemble(x).ok());
}

TEST_CASE("excited sampling rejects odd world counts") {
    const DensityModel m(DensityKind::HarmonicFirstExcited);
    CHECK_THROWS_AS(m.sample_worlds(41), DomainError);
    CHECK_THROWS_AS(m.sample_worlds(5), DomainError);
    CHECK_NOTHROW(m.sample_worlds(2));
    CHECK_THROWS_AS(m.sample_worlds(0), DomainError);
}

TEST_CASE("stationary pilot-wave force cancels the trap") {
    const DensityModel m(DensityKind::HarmonicGround);
    const auto p = dimensionless_params();
    for (double x : {-1.3, 0.0, 0.4}) {
        CHECK(m.bohmian_force(x) ==
              doctest::Approx(p.mass * p.omega * p.omega * x).epsilon(1e-15));
    }

    PhysicalParams phys{3.0, 1.0, 0.5};
    const DensityModel mp(DensityKind::HarmonicGround, phys);
    CHECK(mp.bohmian_force(2.0) == doctest::Approx(3.0 * 0.25 * 2.0).epsilon(1e-15));

    const DensityModel ex(DensityKind::HarmonicFirstExcited);
    CHECK_THROWS_AS(ex.bohmian_force(0.0), DomainError);  // undefined on the node
    CHECK_NOTHROW(ex.bohmian_force(0.1));
}

TEST_CASE("density model names parse and print") {
    CHECK(density_kind_from_string("ground") == DensityKind::HarmonicGround);
    CHECK(density_kind_from_string("excited") == DensityKind::HarmonicFirstExcited);
    CHECK_THROWS_AS(density_kind_from_string("coherent"), ConfigError);
    CHECK(to_string(DensityKind::HarmonicGround) == "ground");
    CHECK(to_string(DensityKind::HarmonicFirstExcited) == "excited");
}
