#include "spectra/dw.hpp"
#include "spectra/error.hpp"
#include "spectra/polyoracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace spectra;
using test::cplx;

namespace {
const Measure kOne = Measure::discrete({{1, 1}});
const Measure kEx1 = Measure::discrete({{0.1, 1}, {0.1, 2}});
const cplx kCubicRoot(-0.24937343752946803, 9.98437852141919);  // z^3 + z^2 + 100 z + 50, via companion matrix
}  // namespace

TEST_CASE("dw: cubic oracle root") {
    // the pinned root against an independent eigenvalue solve
    const auto ev = test::companion_roots({50, 100, 1, 1});
    double best = 1e300;
    for (cplx e : ev) best = std::min(best, std::abs(e - kCubicRoot));
    CHECK(best < 1e-12);
}

TEST_CASE("dw: classification examples") {
    const DwTrace ex1 = iterate(CharacteristicFn(EquationSystem::gp1(kEx1), 1));
    CHECK(ex1.classification == DwClass::BoundaryAttracted);
    CHECK_FALSE(ex1.fixed_point);
    CHECK(ex1.iterates.front() == cplx(0, 1));

    const DwTrace mob = iterate(CharacteristicFn(EquationSystem::gp1(kOne), 1));
    CHECK(mob.classification == DwClass::EllipticDegenerate);
    CHECK(mob.iterates.empty());
    REQUIRE(mob.fixed_point);
    CHECK(std::abs(*mob.fixed_point - cplx(-0.5, std::sqrt(3.0) / 2)) < 1e-15);
    REQUIRE(mob.multiplier);
    CHECK(std::abs(*mob.multiplier) == doctest::Approx(1.0));

    const DwTrace gp2 = iterate(CharacteristicFn(EquationSystem::gp2(1.0, Measure::discrete({{0.5, 1}})), 10));
    CHECK(gp2.classification == DwClass::InteriorFixedPoint);
    REQUIRE(gp2.fixed_point);
    CHECK(test::rel_dist(*gp2.fixed_point, kCubicRoot) < 1e-10);
    CHECK(std::abs(*gp2.multiplier) < 1.0);
}

TEST_CASE("dw: iteration cap yields Undecided") {
    DwOptions o;
    o.max_iter = 2;
    const DwTrace t = iterate(CharacteristicFn(EquationSystem::gp2(1.0, Measure::discrete({{0.5, 1}})), 10), o);
    CHECK(t.classification == DwClass::Undecided);
    CHECK(t.iterations_used == 2);
    CHECK(t.iterates.size() == 3);
}

TEST_CASE("dw: Newton refinement examples") {
    const CharacteristicFn cf(EquationSystem::gp1(kOne), 1);
    const cplx exact(-0.5, std::sqrt(3.0) / 2);
    CHECK(std::abs(newton_refine(cf, cplx(-0.5, 0.9)) - exact) < 1e-12);

    const CharacteristicFn g(EquationSystem::gp2(1.0, Measure::discrete({{0.5, 1}})), 10);
    CHECK(test::rel_dist(newton_refine(g, cplx(0, 10)), kCubicRoot) < 1e-12);

    // an exact root is a fixed point of the Newton step
    CHECK(newton_refine(cf, newton_refine(cf, exact)) == newton_refine(cf, exact));

    // too few steps from a distant start
    try {
        (void)newton_refine(g, cplx(300, 300), 1e-12, 2);
        FAIL("expected NoConvergenceError");
    } catch (const NoConvergenceError& e) {
        CHECK(e.best_iterates().size() == 1);
    }

    // damping keeps every iterate in the closed upper half-plane
    const CharacteristicFn e(EquationSystem::gp1(kEx1), 1);
    try {
        const cplx z = newton_refine(e, cplx(-0.5, 0.3));
        CHECK(z.imag() >= 0.0);
    } catch (const NoConvergenceError& err) {
        CHECK(err.best_iterates().front().imag() >= 0.0);
    }
}

TEST_CASE("dw: winding certificates") {
    const CharacteristicFn cf(EquationSystem::gp1(kOne), 1);
    CHECK(certify_upper_zero(cf, {-1, 0, 0.5, 1.2}).winding == 1);
    CHECK(certify_upper_zero(cf, {1, 2, 0.5, 1.2}).winding == 0);
    const auto c = certify_upper_zero(cf, {-1, 0, 0.5, 1.2});
    CHECK(c.quadrature_residual < 0.1);

    const CharacteristicFn e(EquationSystem::gp1(kEx1), 1);
    CHECK(certify_upper_zero(e, {-3, 0, 0.01, 10}).winding == 0);

    // boxes must sit in the upper half-plane; boundary through the zero is rejected
    CHECK_THROWS(certify_upper_zero(cf, {-1, 0, -0.5, 1}));
    CHECK_THROWS_AS(certify_upper_zero(cf, {-0.5, 0, 0.5, 1.2}), InconclusiveError);
}

TEST_CASE("dw: winding over the search box is 0 or 1; interior fixed points sit in the second quadrant") {
    std::mt19937_64 rng(51);
    int interior = 0;
    for (int k = 0; k < 60; ++k) {
        const auto kind = static_cast<EquationKind>(k % 3);
        const EquationSystem sys = test::random_system(rng, kind, test::random_discrete(rng, 5));
        const int n = 1 + k % 4;
        const CharacteristicFn cf(sys, n);
        double A = sys.measure().total_mass();
        double bmax = sys.measure().support_max();
        double a = kind == EquationKind::GP2 ? sys.a() : 0.0;
        const double R = 4.0 * n * std::sqrt(std::max({a, A, 1.0})) + bmax;
        try {
            const int w = certify_upper_zero(cf, {-R, 0.0, 1e-3, R}).winding;
            CHECK((w == 0 || w == 1));
        } catch (const InconclusiveError&) {
            // a zero on the box boundary; the count is not decidable here
        }

        const DwTrace t = iterate(cf);
        if (t.classification == DwClass::InteriorFixedPoint) {
            ++interior;
            CHECK(t.fixed_point->real() < 0.0);
            CHECK(t.fixed_point->imag() > 0.0);
            CHECK(std::abs(*t.multiplier) < 1.0);
            // fixed point is a zero, to the accuracy of the step tolerance
            CHECK(std::abs(cf.eval(*t.fixed_point).value) <=
                  1e-8 * cf.scale(*t.fixed_point) * (1.0 + std::abs(cf.eval(*t.fixed_point).derivative)));
        }
    }
    CHECK(interior > 0);
}

TEST_CASE("dw: power-law iteration contracts geometrically") {
    const CharacteristicFn cf(EquationSystem::gp2(1.0, Measure::power_law(1, 0.5)), 50);
    const DwTrace t = iterate(cf);
    REQUIRE(t.classification == DwClass::InteriorFixedPoint);
    const auto& z = t.iterates;
    REQUIRE(z.size() > 10);
    // after burn-in, successive step ratios are below one
    for (std::size_t k = 5; k + 1 < z.size(); ++k) {
        const double prev = std::abs(z[k] - z[k - 1]);
        const double cur = std::abs(z[k + 1] - z[k]);
        if (prev > 1e-10 * std::abs(z[k])) CHECK(cur / prev < 1.0);
    }
}
