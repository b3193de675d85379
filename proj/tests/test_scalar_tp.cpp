#include <cmath>
#include <numbers>

#include "doctest.h"
#include "muskin/errors.hpp"
#include "muskin/quadrature.hpp"
#include "muskin/scalar_tp.hpp"

using namespace muskin;

namespace {

const Geometry kCyl{GeometryKind::ConcentricCylinders, 1.0, 2.0};
const Geometry kSph{GeometryKind::ConcentricSpheres, 1.0, 2.0};

/// cos(theta) as two Fourier modes.
std::vector<SurfaceMode> cos_theta(double amp = 1.0) { return {{1, 0, 0.5 * amp}, {-1, 0, 0.5 * amp}}; }

ScalarSolution solve(const Geometry& g, cplx am, std::vector<SurfaceMode> data, cplx ap = 1.0) {
    return solve_scalar({g, ap, am, std::move(data)});
}

}  // namespace

TEST_CASE("cylinder cos(theta) matches hand-solved harmonic matching") {
    // phi- = A r, phi+ = B (r - 4/r): A = -3B and 10 A - 5 B = 9/2 * (1/2 per mode) give B = -9/70.
    const ScalarSolution s = solve(kCyl, 10.0, cos_theta());
    REQUIRE(s.modes.size() == 2);
    for (const auto& m : s.modes) {
        CHECK(std::abs(m.interior - 27.0 / 70.0) < 1e-12);
        CHECK(std::abs(m.exterior - 2.0 * (-9.0 / 70.0)) < 1e-12);  // stored against (r/2 - 2/r)
    }
}

TEST_CASE("equal coefficients give the zero solution") {
    for (const auto& g : {kCyl, kSph}) {
        const ScalarSolution s = solve(g, 1.0, {{1, 0, 1.0}, {3, 1, 0.5}});
        for (const auto& m : s.modes) {
            CHECK(m.interior == cplx(0.0));
            CHECK(m.exterior == cplx(0.0));
        }
        const ScalarNorms n = scalar_norms(s);
        CHECK(n.h32_equiv == 0.0);
        CHECK(n.h1_minus == 0.0);
        CHECK(n.h1_plus == 0.0);
    }
}

TEST_CASE("large a_minus approaches the limit at rate 1/a_minus") {
    // A = (a- - 1) c / (a- + 5/3) for the m = 1 cylinder mode, so a- (A - c) -> -8c/3.
    const double c = 0.5;
    double prev = 0.0;
    for (double am : {1e4, 1e6, 1e8}) {
        const ScalarSolution s = solve(kCyl, am, {{1, 0, c}});
        const double scaled = (am * (s.modes[0].interior - c)).real();
        CHECK(scaled == doctest::Approx(-8.0 * c / 3.0).epsilon(1e-3));
        if (prev != 0.0) CHECK(std::abs(scaled + 8.0 * c / 3.0) < std::abs(prev + 8.0 * c / 3.0));
        prev = scaled;
    }
}

TEST_CASE("flux jump, continuity and Gamma trace hold per mode") {
    for (const auto& g : {kCyl, kSph})
        for (cplx am : {cplx(10.0), cplx(1e6), cplx(0.0, 50.0), cplx(-30.0, 4.0)}) {
            const ScalarSolution s = solve(g, am, {{1, 0, 1.0}, {2, 1, cplx(0.3, -0.2)}, {7, 3, 0.1}});
            CHECK(s.flux_jump_residual() < 1e-12);
            CHECK(s.continuity_residual() < 1e-12);
            for (std::size_t i = 0; i < s.modes.size(); ++i) CHECK(s.radial(i, g.r_gamma)[0] == cplx(0.0));
        }
}

TEST_CASE("single mode spectral trace contribution") {
    for (const auto& g : {kCyl, kSph}) {
        const ScalarSolution s = solve(g, 100.0, {{3, 2, 1.0}});
        const double w = g.kind == GeometryKind::ConcentricCylinders ? 9.0 : 12.0;
        const ScalarNorms n = scalar_norms(s);
        CHECK(n.trace_spectral == doctest::Approx(std::pow(1.0 + w, 0.75) * std::abs(s.modes[0].interior)).epsilon(1e-14));
    }
}

TEST_CASE("closed-form radial norms match Gauss quadrature") {
    for (const auto& g : {kCyl, kSph})
        for (int order : {1, 2, 5}) {
            const ScalarSolution s = solve(g, cplx(40.0, 3.0), {{order, 0, cplx(1.0, 0.5)}});
            const bool cyl = g.kind == GeometryKind::ConcentricCylinders;
            const double L = cyl ? order * order : order * (order + 1.0);
            const double ang = cyl ? 2.0 * std::numbers::pi : 1.0;
            const GaussRule& q = gauss_legendre(64);
            auto integrate = [&](double a, double b) {
                double l2 = 0.0, h1 = 0.0;
                for (std::size_t k = 0; k < q.nodes.size(); ++k) {
                    const double r = 0.5 * (a + b) + 0.5 * (b - a) * q.nodes[k];
                    const double jac = 0.5 * (b - a) * q.weights[k] * (cyl ? r : r * r);
                    const auto f = s.radial(0, r);
                    l2 += jac * std::norm(f[0]);
                    h1 += jac * (std::norm(f[1]) + L * std::norm(f[0]) / (r * r));
                }
                return std::array<double, 2>{std::sqrt(ang * l2), std::sqrt(ang * h1)};
            };
            const auto in = integrate(0.0, 1.0), out = integrate(1.0 + 1e-15, 2.0);
            const ScalarNorms n = scalar_norms(s);
            CHECK(n.l2_minus == doctest::Approx(in[0]).epsilon(1e-12));
            CHECK(n.h1semi_minus == doctest::Approx(in[1]).epsilon(1e-12));
            CHECK(n.l2_plus == doctest::Approx(out[0]).epsilon(1e-12));
            CHECK(n.h1semi_plus == doctest::Approx(out[1]).epsilon(1e-12));
        }
}

TEST_CASE("uniform sweep saturates and stays bounded") {
    for (const auto& g : {kCyl, kSph}) {
        const std::vector<SurfaceMode> data = g.kind == GeometryKind::ConcentricCylinders
                                                  ? cos_theta()
                                                  : std::vector<SurfaceMode>{{1, 0, 1.0}};
        const SweepReport rep = uniform_sweep(g, data, {1.0, 10.0, 1e3, 1e6, cplx(0.0, 1e3)});
        CHECK(rep.rows[0].normalized == 0.0);
        for (const auto& r : rep.rows) CHECK(r.solved);
        const double change = std::abs(rep.rows[2].normalized - rep.rows[3].normalized) / rep.rows[3].normalized;
        CHECK(change < 0.1);
        CHECK(rep.saturation_change == doctest::Approx(change));
        CHECK(rep.bounded);
        CHECK(rep.verdict);
        CHECK(rep.sup_normalized > 0.0);
    }
}

TEST_CASE("norms scale linearly with the datum") {
    const ScalarNorms a = scalar_norms(solve(kCyl, 1e3, cos_theta(1.0)));
    const ScalarNorms b = scalar_norms(solve(kCyl, 1e3, cos_theta(2.0)));
    CHECK(b.h32_equiv == doctest::Approx(2.0 * a.h32_equiv).epsilon(1e-14));
    CHECK(b.g_l2 == doctest::Approx(2.0 * a.g_l2).epsilon(1e-14));
    CHECK(a.g_l2 == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("scalar error cases and the admissibility threshold") {
    CHECK_THROWS_AS(solve(kCyl, 10.0, {{0, 0, 1.0}}), CompatibilityError);
    CHECK_THROWS_AS(solve(kSph, 10.0, {{0, 0, 0.2}}), CompatibilityError);
    CHECK_THROWS_AS(solve(kCyl, 10.0, cos_theta(), 0.0), ParameterDomainError);
    CHECK_THROWS_AS(solve(kSph, 10.0, {{1, 2, 1.0}}), ParameterDomainError);
    // m = 1 matching degenerates at a-/a+ = -5/3 for radii (1, 2).
    CHECK_THROWS_AS(solve(kCyl, -5.0 / 3.0, {{1, 0, 1.0}}), ConditioningError);
    const SweepReport rep = uniform_sweep(kCyl, {{1, 0, 1.0}}, {-5.0 / 3.0, 2.0, 10.0, 100.0});
    CHECK_FALSE(rep.rows[0].solved);
    REQUIRE(rep.rho0_estimate.has_value());
    CHECK(*rep.rho0_estimate == doctest::Approx(2.0));
}
