#include <cmath>

#include "doctest.h"
#include "muskin/errors.hpp"
#include "muskin/experiments.hpp"

using namespace muskin;

namespace {

Drive shell(int order = 1) {
    Drive d;
    d.kind = DriveKind::ShellCurrent;
    d.order = order;
    d.shell_a = 1.3;
    d.shell_b = 1.7;
    return d;
}

}  // namespace

TEST_CASE("stability quotient stays bounded as mu_r grows") {
    for (auto kind : {GeometryKind::ConcentricCylinders, GeometryKind::ConcentricSpheres}) {
        const Geometry g{kind, 1.0, 2.0};
        const StabilityReport rep = stability_sweep(g, MediaParams{}, shell(), {1e6, 1e2, 1e4}, {}, 2);
        REQUIRE(rep.rows.size() == 3);
        CHECK(rep.rows[0].mu_r == 1e2);  // sorted
        CHECK(rep.quotient_variation < 2.0);
        CHECK(rep.interior_nonincreasing);
        CHECK(rep.verdict);
        for (const auto& r : rep.rows) {
            CHECK(r.quotient == doctest::Approx((r.norm_H + r.norm_E + r.sqrt_mur_normHminus) / r.norm_j));
            CHECK(r.refinement_change < 1e-8);
            // The source is fixed, so its norm does not move with mu_r.
            CHECK(r.norm_j == doctest::Approx(rep.rows[0].norm_j).epsilon(1e-12));
        }
    }
}

TEST_CASE("curl bound and divergence check at unit media") {
    MediaParams p;  // omega = eps0 = sigma = 1
    const ConstantsReport rep = constants_check({GeometryKind::ConcentricCylinders, 1.0, 2.0}, p, shell(), {1e2, 1e4});
    CHECK(std::abs(rep.constants.m - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(rep.constants.C1 - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(rep.constants.C2 - std::sqrt(2.0)) < 1e-12);
    for (const auto& r : rep.rows) {
        CHECK(r.norm_curlH <= r.curl_bound);
        CHECK(r.div_residual < 1e-8);
    }
    CHECK(rep.verdict);
}

TEST_CASE("Cartesian TE fields are solenoidal on both sides") {
    for (auto kind : {GeometryKind::ConcentricCylinders, GeometryKind::ConcentricSpheres})
        for (int order : {1, 3}) {
            const Geometry g{kind, 1.0, 2.0};
            Drive te;
            te.pol = Polarization::TE;
            te.order = order;
            te.azimuthal = order > 1 ? 1 : 0;
            MediaParams p;
            p.mu_r = 1e3;
            const ModalSolution s = solve_exact(g, p, te);
            CHECK(div_mu_h_residual(s, div_sample_points(g, te)) < 1e-8);
        }
}

TEST_CASE("constants check needs a current drive") {
    Drive d;
    CHECK_THROWS_AS(constants_check({GeometryKind::ConcentricCylinders, 1.0, 2.0}, MediaParams{}, d, {1e2}),
                    ParameterDomainError);
}
