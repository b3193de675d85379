#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fd_radial_oracle.hpp"
#include "muskin/errors.hpp"
#include "muskin/modal.hpp"

using namespace muskin;

namespace {

const Geometry kCyl{GeometryKind::ConcentricCylinders, 1.0, 2.0};
const Geometry kSph{GeometryKind::ConcentricSpheres, 1.0, 2.0};

MediaParams media_with(double mu_r, double sigma_minus = 1.0) {
    MediaParams p;
    p.mu_r = mu_r;
    p.sigma_minus = sigma_minus;
    return p;
}

Drive trace_drive(Polarization pol, int order, int az = 0) {
    Drive d;
    d.pol = pol;
    d.order = order;
    d.azimuthal = az;
    return d;
}

Drive shell_drive(int order) {
    Drive d;
    d.kind = DriveKind::ShellCurrent;
    d.order = order;
    d.shell_a = 1.3;
    d.shell_b = 1.7;
    return d;
}

Point3 sample_point(const Geometry& g, double r, double a, double b) {
    if (g.kind == GeometryKind::ConcentricCylinders) return {r * std::cos(a), r * std::sin(a), b};
    return {r * std::sin(b) * std::cos(a), r * std::sin(b) * std::sin(a), r * std::cos(b)};
}

/// Fourth-order central difference of component `comp` of a field along axis `ax`.
template <class F>
cplx fd4(F field, Point3 x, int ax, int comp, double h) {
    auto at = [&](double s) {
        Point3 y = x;
        y[ax] += s;
        return field(y)[comp];
    };
    return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
}

}  // namespace

TEST_CASE("interface residuals for every geometry and polarisation") {
    for (const auto& g : {kCyl, kSph})
        for (Polarization pol : {Polarization::TM, Polarization::TE})
            for (double mr : {1.0, 1e2, 1e4, 1e6, 1e12})
                for (int n : {1, 2, 5}) {
                    const auto s = solve_exact(g, media_with(mr, 400.0), trace_drive(pol, n));
                    const auto r = interface_residuals(s);
                    INFO("sphere=" << (g.kind == GeometryKind::ConcentricSpheres) << " TE=" << (pol == Polarization::TE)
                                   << " mu_r=" << mr << " n=" << n);
                    CHECK(r.trace < 1e-10);
                    CHECK(r.flux < 1e-10);
                    CHECK(r.normal < 1e-10);
                    CHECK(s.condition < 1e12);
                }
    const auto s0 = solve_exact(kCyl, media_with(1e4), trace_drive(Polarization::TM, 0));
    CHECK(interface_residuals(s0).trace < 1e-10);
}

TEST_CASE("cylinder TM coefficients match the finite-volume radial oracle") {
    for (int m : {0, 1, 3})
        for (double mr : {1e2, 1e4}) {
            const MediaParams media = media_with(mr);
            const auto s = solve_exact(kCyl, media, trace_drive(Polarization::TM, m));
            const auto d = s.derived;
            oracle::RadialMedium md{1.0, 2.0, 1.0 / d.alpha_minus, 1.0 / d.alpha_plus,
                                    d.k_minus() * d.k_minus(), d.k_plus() * d.k_plus(), m, 1.0};
            const int N = 20000;
            const auto f = oracle::solve_fd_richardson(md, N);
            auto node = [&](double r) { return f[static_cast<int>(std::lround(r / 2.0 * N))]; };
            // Coefficients recovered from the oracle: interior from f(R), exterior from two radii.
            const cplx c0 = node(1.0);
            const auto b = [&](double r) {
                const BesselSet bs = cyl_bessel_set(m, d.k_plus() * r);
                return std::array<cplx, 2>{ratio(bs.first.value, s.basis_norm[1]), ratio(bs.third.value, s.basis_norm[2])};
            };
            const auto b1 = b(1.25), b2 = b(1.75);
            const cplx f1 = node(1.25), f2 = node(1.75);
            const cplx det = b1[0] * b2[1] - b1[1] * b2[0];
            const cplx c1 = (f1 * b2[1] - b1[1] * f2) / det;
            const cplx c2 = (b1[0] * f2 - f1 * b2[0]) / det;
            const double scale = std::max({std::abs(s.coeff[0]), std::abs(s.coeff[1]), std::abs(s.coeff[2])});
            INFO("m=" << m << " mu_r=" << mr);
            CHECK(std::abs(c0 - s.coeff[0]) / scale < 1e-6);
            CHECK(std::abs(c1 - s.coeff[1]) / scale < 1e-6);
            CHECK(std::abs(c2 - s.coeff[2]) / scale < 1e-6);
        }
}

TEST_CASE("single medium sphere TE matches the closed form") {
    MediaParams media;  // mu_r = 1, sigma_- = sigma_+
    const auto s = solve_exact(kSph, media, trace_drive(Polarization::TE, 1));
    const cplx k = s.derived.k_plus();
    const auto jb = sph_bessel(SphKind::j, 1, k * 2.0);
    const cplx psi_p = riccati(jb, k * 2.0).derivative.value();
    const cplx c = 2.0 / psi_p;  // (r f)'/r = 1 at r_gamma
    for (double r : {0.3, 0.8, 1.0, 1.4, 2.0}) {
        const Region side = r <= 1.0 ? Region::Interior : Region::Exterior;
        const cplx expect = c * sph_bessel(SphKind::j, 1, k * r).value.value();
        CHECK(std::abs(s.potential(r, side)[0] - expect) < 1e-12 * std::abs(c));
    }
}

TEST_CASE("linearity and row-scaling invariance") {
    Drive d1 = trace_drive(Polarization::TE, 2);
    Drive d2 = d1;
    d2.amplitude = std::ldexp(1.0, -10);
    const auto a = solve_exact(kCyl, media_with(1e4), d1);
    const auto b = solve_exact(kCyl, media_with(1e4), d2);
    for (int i = 0; i < 3; ++i) CHECK(b.coeff[i] == a.coeff[i] * std::ldexp(1.0, -10));
    Drive sd = shell_drive(1);
    const auto sa = solve_exact(kCyl, media_with(1e2), sd);
    sd.amplitude = std::ldexp(1.0, -10);
    const auto sb = solve_exact(kCyl, media_with(1e2), sd);
    for (int i = 0; i < 3; ++i) CHECK(sb.coeff[i] == sa.coeff[i] * std::ldexp(1.0, -10));

    const ModeSystem sys = assemble_mode_system(kSph, media_with(1e4), d1);
    Eigen::Matrix3cd A, A2;
    Eigen::Vector3cd rhs, rhs2;
    const double f[3] = {1e-7, 3.0, 1e5};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            A(i, j) = sys.A[i][j];
            A2(i, j) = sys.A[i][j] * f[i];
        }
        rhs(i) = sys.rhs[i];
        rhs2(i) = sys.rhs[i] * f[i];
        double mx = 0.0;
        for (int j = 0; j < 3; ++j) mx = std::max(mx, std::abs(sys.A[i][j]));
        CHECK(mx == doctest::Approx(1.0));
    }
    const Eigen::Vector3cd x1 = A.fullPivLu().solve(rhs), x2 = A2.fullPivLu().solve(rhs2);
    CHECK((x1 - x2).norm() < 1e-13 * x1.norm());
}

TEST_CASE("zero drive gives zero field; evaluation is order independent") {
    Drive d = trace_drive(Polarization::TM, 1);
    d.amplitude = 0.0;
    const auto s = solve_exact(kCyl, media_with(1e2), d);
    const auto z = eval_point(s, {0.5, 0.2, 0.0});
    for (int i = 0; i < 3; ++i) CHECK(z.H[i] == cplx(0.0));
    const auto t = solve_exact(kSph, media_with(1e2), trace_drive(Polarization::TE, 2, 1));
    std::vector<Point3> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(sample_point(kSph, 0.5 + 0.07 * i, 0.3 * i, 0.2 + 0.13 * i));
    std::vector<Point3> rev(pts.rbegin(), pts.rend());
    const auto fa = eval_field(t, pts), fb = eval_field(t, rev);
    for (size_t i = 0; i < pts.size(); ++i)
        for (int c = 0; c < 3; ++c) CHECK(fa[i].H[c] == fb[pts.size() - 1 - i].H[c]);
    CHECK_THROWS_AS(eval_point(t, {0.01, 0.0, 0.0}), ChartDomainError);
    CHECK_THROWS_AS(eval_point(t, {2.5, 0.0, 0.0}), ChartDomainError);
}

TEST_CASE("tangential H is continuous across the interface on sample points") {
    const auto s = solve_exact(kSph, media_with(1e4), trace_drive(Polarization::TE, 2, 1));
    const Point3 x = sample_point(kSph, 1.0, 0.4, 1.1);
    const auto in = eval_point(s, x, Region::Interior), out = eval_point(s, x, Region::Exterior);
    // Remove the radial component.
    const double r[3] = {x[0], x[1], x[2]};
    auto tang = [&](const std::array<cplx, 3>& v) {
        const cplx dot = v[0] * r[0] + v[1] * r[1] + v[2] * r[2];
        return std::array<cplx, 3>{v[0] - dot * r[0], v[1] - dot * r[1], v[2] - dot * r[2]};
    };
    const auto a = tang(in.H), b = tang(out.H);
    double jump = 0.0, mag = 0.0;
    for (int i = 0; i < 3; ++i) {
        jump += std::norm(a[i] - b[i]);
        mag += std::norm(b[i]);
    }
    CHECK(std::sqrt(jump) < 1e-10 * std::sqrt(mag));
}

TEST_CASE("Faraday law and div(mu H) by finite differences") {
    for (const auto& g : {kCyl, kSph})
        for (Polarization pol : {Polarization::TM, Polarization::TE}) {
            const auto s = solve_exact(g, media_with(1e2), trace_drive(pol, 2, 1));
            for (double r : {0.8, 1.5}) {
                const Point3 x = sample_point(g, r, 0.7, 0.9);
                const double mu = r < 1.0 ? s.media.mu_plus * s.media.mu_r : s.media.mu_plus;
                const double h = 1e-4;
                auto Ef = [&](const Point3& y) { return eval_point(s, y).E; };
                auto Hf = [&](const Point3& y) { return eval_point(s, y).H; };
                const auto H = eval_point(s, x).H;
                std::array<cplx, 3> curlE{};
                curlE[0] = fd4(Ef, x, 1, 2, h) - fd4(Ef, x, 2, 1, h);
                curlE[1] = fd4(Ef, x, 2, 0, h) - fd4(Ef, x, 0, 2, h);
                curlE[2] = fd4(Ef, x, 0, 1, h) - fd4(Ef, x, 1, 0, h);
                double res = 0.0, mag = 0.0;
                for (int i = 0; i < 3; ++i) {
                    res += std::norm(curlE[i] - cplx(0, s.media.omega * mu) * H[i]);
                    mag += std::norm(cplx(0, s.media.omega * mu) * H[i]);
                }
                INFO("r=" << r << " TE=" << (pol == Polarization::TE));
                CHECK(std::sqrt(res / mag) < 1e-6);
                const cplx div = fd4(Hf, x, 0, 0, h) + fd4(Hf, x, 1, 1, h) + fd4(Hf, x, 2, 2, h);
                double grad = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int c = 0; c < 3; ++c) grad += std::norm(fd4(Hf, x, a, c, h));
                CHECK(std::abs(div) < 1e-8 * std::sqrt(grad));
            }
        }
}

TEST_CASE("shell particular solution satisfies the driven radial equation") {
    for (const auto& g : {kCyl, kSph})
        for (int n : {0, 1, 3}) {
            if (g.kind == GeometryKind::ConcentricSpheres && n == 0) continue;
            const MediaParams media = media_with(1e2);
            const auto s = solve_exact(g, media, shell_drive(n));
            const cplx k = s.derived.k_plus();
            const bool cyl = g.kind == GeometryKind::ConcentricCylinders;
            double worst = 0.0, scale = 0.0;
            for (double r = 1.05; r < 1.95; r += 0.0123) {
                const double h = 2e-3;
                // The bump is only C^2 at its edges; keep the stencil off them.
                if (std::abs(r - s.drive.shell_a) < 4 * h || std::abs(r - s.drive.shell_b) < 4 * h) continue;
                auto f = [&](double t) { return s.potential(t, Region::Exterior); };
                // Sixth-order second derivative of f.
                const cplx fpp = (2.0 * f(r - 3 * h)[0] - 27.0 * f(r - 2 * h)[0] + 270.0 * f(r - h)[0] - 490.0 * f(r)[0] +
                                  270.0 * f(r + h)[0] - 27.0 * f(r + 2 * h)[0] + 2.0 * f(r + 3 * h)[0]) /
                                 (180.0 * h * h);
                const auto v = f(r);
                // (r s)' from the bump 64 (u(1-u))^3 in closed form.
                const double w = s.drive.shell_b - s.drive.shell_a, u = (r - s.drive.shell_a) / w;
                const double bump = (u > 0 && u < 1) ? 64.0 * std::pow(u * (1 - u), 3) : 0.0;
                const double dbump = (u > 0 && u < 1) ? 192.0 * std::pow(u * (1 - u), 2) * (1 - 2 * u) / w : 0.0;
                const cplx dsr = s.drive.amplitude * (bump + r * dbump);
                cplx lhs, rhs;
                if (cyl) {
                    lhs = fpp + v[1] / r + (k * k - double(n) * n / (r * r)) * v[0];
                    rhs = -dsr / r;
                } else {
                    // u = r f: u'' = r f'' + 2 f'
                    lhs = r * fpp + 2.0 * v[1] + (k * k - double(n) * (n + 1) / (r * r)) * r * v[0];
                    rhs = dsr;
                }
                worst = std::max(worst, std::abs(lhs - rhs));
                scale = std::max(scale, std::abs(k * k * v[0]) + std::abs(rhs));
            }
            INFO("sphere=" << !cyl << " n=" << n << " residual=" << worst / scale);
            CHECK(worst / scale < 1e-9);
            CHECK(s.particular.achieved < 1e-9);
        }
}

TEST_CASE("thin shells converge to the point-multipole moments") {
    const MediaParams media = media_with(1e2);
    const DerivedParams d = derive_params(media);
    const cplx k = d.k_plus();
    const double r0 = 1.5;
    const double bump_integral = 64.0 * 36.0 / 5040.0;  // int_0^1 64 (u(1-u))^3 du
    const BesselSet b0 = cyl_bessel_set(1, k * r0);
    const cplx mj = k * r0 * b0.first.derivative.value(), my = k * r0 * b0.second.derivative.value();
    double prev = 1e300;
    for (double w : {0.2, 0.1, 0.05, 0.025}) {
        Drive dr = shell_drive(1);
        dr.shell_a = r0 - 0.5 * w;
        dr.shell_b = r0 + 0.5 * w;
        dr.amplitude = 1.0 / (bump_integral * w);
        const auto p = shell_source_particular(kCyl, d, dr);
        const double err = std::abs(p.moment_first - mj) + std::abs(p.moment_second - my);
        CHECK(err < prev / 3.0);
        prev = err;
    }
    CHECK(prev < 1e-3 * (std::abs(mj) + std::abs(my)));
    Drive zero = shell_drive(2);
    zero.amplitude = 0.0;
    const auto pz = shell_source_particular(kCyl, d, zero);
    CHECK(pz.moment_first == cplx(0.0));
    CHECK(pz.moment_second == cplx(0.0));
    Drive bad = shell_drive(1);
    bad.shell_a = 0.9;
    CHECK_THROWS_AS(solve_exact(kCyl, media, bad), ParameterDomainError);
    bad = shell_drive(1);
    bad.pol = Polarization::TE;
    CHECK_THROWS_AS(solve_exact(kCyl, media, bad), ParameterDomainError);
    CHECK_THROWS_AS(solve_exact(kCyl, media, trace_drive(Polarization::TM, 65)), DomainError);
}
