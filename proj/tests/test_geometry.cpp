#include <cmath>
#include <numbers>

#include "doctest.h"
#include "muskin/errors.hpp"
#include "muskin/geometry.hpp"

using namespace muskin;

namespace {
const Geometry kCyl{GeometryKind::ConcentricCylinders, 1.5, 3.0};
const Geometry kSph{GeometryKind::ConcentricSpheres, 1.5, 3.0};
}  // namespace

TEST_CASE("normal coordinates") {
    CHECK(normal_coords(kCyl, {1.5, 0.0, 0.2}).y3 == 0.0);
    CHECK(normal_coords(kCyl, {0.0, 0.7 * 1.5, -3.0}).y3 == doctest::Approx(0.3 * 1.5).epsilon(1e-15));
    CHECK(normal_coords(kSph, {0.0, 0.0, -1.5}).y3 == 0.0);
    for (const auto& g : {kCyl, kSph}) {
        for (int i = 0; i < 50; ++i) {
            const double r = 1.5 * (0.12 + 0.0175 * i);
            const double a = 0.37 * i - 3.0, b = 0.11 * i + 0.05;
            const Point3 x = g.kind == GeometryKind::ConcentricCylinders
                                 ? Point3{r * std::cos(a), r * std::sin(a), b - 2.0}
                                 : Point3{r * std::sin(b) * std::cos(a), r * std::sin(b) * std::sin(a), r * std::cos(b)};
            const Point3 back = from_normal_coords(g, normal_coords(g, x));
            for (int k = 0; k < 3; ++k) CHECK(std::abs(back[k] - x[k]) < 1e-14);
        }
        CHECK_THROWS_AS(normal_coords(g, {0.1, 0.0, 0.0}), ChartDomainError);
        CHECK_THROWS_AS(normal_coords(g, {1.6, 0.0, 0.0}), ChartDomainError);
    }
}

TEST_CASE("curvature data and sign convention") {
    const auto cs = curvature(kSph);
    const auto v = curvature_minus_mean(cs, {cplx(0.3, -2.0), cplx(1.7, 0.4)});
    CHECK(std::abs(v[0]) == 0.0);
    CHECK(std::abs(v[1]) == 0.0);
    const auto cc = curvature(kCyl);
    const double kappa = 1.0 / 1.5;
    CHECK(cc.mean_H == doctest::Approx(kappa / 2));
    const auto along_z = curvature_minus_mean(cc, {0.0, 1.0});
    const auto along_theta = curvature_minus_mean(cc, {1.0, 0.0});
    CHECK(std::abs(along_z[1] - (-kappa / 2)) < 1e-15);
    CHECK(std::abs(along_theta[0] - (kappa / 2)) < 1e-15);
    CHECK(metric_factor(kCyl, 0, 0.3) == doctest::Approx(1.0 - 0.3 / 1.5));
    CHECK(metric_factor(kCyl, 1, 0.3) == 1.0);
}

TEST_CASE("surface divergence") {
    const Geometry unit{GeometryKind::ConcentricCylinders, 1.0, 2.0};
    CHECK(surface_divergence(unit, 0, {0.0, 1.0}) == cplx(0.0));
    CHECK(std::abs(surface_divergence(unit, 2, {1.0, 0.0}) - cplx(0.0, 2.0)) < 1e-15);
    CHECK(surface_divergence(kSph, 3, {0.0, 1.0}) == cplx(0.0));
    CHECK(std::abs(surface_divergence(kSph, 3, {1.0, 0.0}) - (-12.0 / 1.5)) < 1e-14);
}

TEST_CASE("spherical harmonic derivatives and normalisation") {
    for (int n : {1, 2, 5}) {
        for (int m = -n; m <= n; ++m) {
            const double th = 0.83, ph = 1.9, h = 1e-5;
            const auto c = spherical_harmonic(n, m, th, ph);
            const auto fd = (spherical_harmonic(n, m, th + h, ph).y - spherical_harmonic(n, m, th - h, ph).y) / (2 * h);
            CHECK(std::abs(c.d_theta - fd) < 1e-8);
            const auto fp = (spherical_harmonic(n, m, th, ph + h).y - spherical_harmonic(n, m, th, ph - h).y) / (2 * h);
            CHECK(std::abs(c.d_phi_sin - fp / std::sin(th)) < 1e-8);
        }
        // ||Y_n1||^2 over the sphere by midpoint rule in theta.
        double s = 0.0;
        const int N = 4000;
        for (int i = 0; i < N; ++i) {
            const double th = (i + 0.5) * std::numbers::pi / N;
            s += std::norm(spherical_harmonic(n, 1, th, 0.0).y) * std::sin(th);
        }
        CHECK(s * 2.0 * std::numbers::pi * std::numbers::pi / N == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("cutoff smoothstep") {
    const Cutoff c = default_cutoff(kCyl);
    CHECK(cutoff_chi(c, 0.0).chi == 1.0);
    CHECK(cutoff_chi(c, c.d1).chi == 0.0);
    CHECK(cutoff_chi(c, 5.0).chi == 0.0);
    const double h = 1e-7;
    const double fd0 = (cutoff_chi(c, c.d0 + h).complement - cutoff_chi(c, c.d0 - h).complement) / (2 * h);
    const double fd1 = (cutoff_chi(c, c.d1 + h).chi - cutoff_chi(c, c.d1 - h).chi) / (2 * h);
    CHECK(std::abs(fd0) < 1e-12);
    CHECK(std::abs(fd1) < 1e-12);
    for (double y = 0.0; y < 1.2; y += 0.013) {
        const auto v = cutoff_chi(c, y);
        CHECK(v.chi >= 0.0);
        CHECK(v.chi <= 1.0);
        const double d = (cutoff_chi(c, y + 1e-6).chi - cutoff_chi(c, y - 1e-6).chi) / 2e-6;
        CHECK(std::abs(d - v.d1chi) < 1e-6);
        const double d2 = (cutoff_chi(c, y + 1e-5).d1chi - cutoff_chi(c, y - 1e-5).d1chi) / 2e-5;
        CHECK(std::abs(d2 - v.d2chi) < 1e-5);
    }
    CHECK_THROWS_AS(validate(Cutoff{0.5, 0.4, 5}, kCyl), ParameterDomainError);
}
