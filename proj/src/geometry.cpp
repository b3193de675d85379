#include "muskin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "muskin/errors.hpp"

namespace muskin {

void validate(const Geometry& g) {
    if (!(g.r_sigma > 0.0) || !(g.r_gamma > g.r_sigma) || !std::isfinite(g.r_gamma))
        throw ParameterDomainError("geometry requires 0 < r_sigma < r_gamma");
}

CurvatureData curvature(const Geometry& g) {
    validate(g);
    const double k = 1.0 / g.r_sigma;
    CurvatureData c;
    if (g.kind == GeometryKind::ConcentricCylinders) {
        c.b = {{{k, 0.0}, {0.0, 0.0}}};
    } else {
        c.b = {{{k, 0.0}, {0.0, k}}};
    }
    c.mean_H = 0.5 * (c.b[0][0] + c.b[1][1]);
    return c;
}

std::array<cplx, 2> curvature_minus_mean(const CurvatureData& c, const std::array<cplx, 2>& j) {
    return {c.b[0][0] * j[0] + c.b[1][0] * j[1] - c.mean_H * j[0],
            c.b[0][1] * j[0] + c.b[1][1] * j[1] - c.mean_H * j[1]};
}

double principal_curvature(const Geometry& g, int alpha) {
    if (g.kind == GeometryKind::ConcentricCylinders && alpha == 1) return 0.0;
    return 1.0 / g.r_sigma;
}

double metric_factor(const Geometry& g, int alpha, double y3) {
    return 1.0 - y3 * principal_curvature(g, alpha);
}

NormalCoords normal_coords(const Geometry& g, const Point3& x) {
    validate(g);
    const bool cyl = g.kind == GeometryKind::ConcentricCylinders;
    const double r = cyl ? std::hypot(x[0], x[1]) : std::hypot(x[0], x[1], x[2]);
    if (r < kChartFloor * g.r_sigma || r > g.r_sigma * (1.0 + 1e-12))
        throw ChartDomainError("point outside the normal-coordinate chart");
    NormalCoords y;
    y.y3 = std::max(0.0, g.r_sigma - r);
    y.y1 = cyl ? std::atan2(x[1], x[0]) : std::acos(std::clamp(x[2] / r, -1.0, 1.0));
    y.y2 = cyl ? x[2] : std::atan2(x[1], x[0]);
    return y;
}

Point3 from_normal_coords(const Geometry& g, const NormalCoords& y) {
    validate(g);
    const double r = g.r_sigma - y.y3;
    if (y.y3 < 0.0 || r < kChartFloor * g.r_sigma) throw ChartDomainError("depth outside the normal-coordinate chart");
    if (g.kind == GeometryKind::ConcentricCylinders) return {r * std::cos(y.y1), r * std::sin(y.y1), y.y2};
    const double s = std::sin(y.y1);
    return {r * s * std::cos(y.y2), r * s * std::sin(y.y2), r * std::cos(y.y1)};
}

cplx surface_divergence(const Geometry& g, int mode, const TangentialModal& j) {
    validate(g);
    if (g.kind == GeometryKind::ConcentricCylinders) return cplx(0.0, mode / g.r_sigma) * j.t1;
    // div_s grad_s Y = -n(n+1) Y; the curl-type harmonic is divergence free.
    return -double(mode) * (mode + 1) / g.r_sigma * j.t1;
}

HarmonicValue spherical_harmonic(int n, int m, double theta, double phi) {
    if (n < 0 || std::abs(m) > n) throw DomainError("spherical harmonic requires |m| <= n");
    const int am = std::abs(m);
    const double th = std::clamp(theta, 1e-12, std::numbers::pi - 1e-12);
    const double p = std::sph_legendre(n, am, th);
    const double p1 = am + 1 <= n ? std::sph_legendre(n, am + 1, th) : 0.0;
    const double dp = am * std::cos(th) / std::sin(th) * p + std::sqrt(double(n - am) * (n + am + 1)) * p1;
    const cplx e = std::polar(1.0, am * phi);
    HarmonicValue h{p * e, dp * e, cplx(0.0, am) * p * e / std::sin(th)};
    if (m < 0) {
        const double s = (am % 2 == 0) ? 1.0 : -1.0;
        h = {s * std::conj(h.y), s * std::conj(h.d_theta), s * std::conj(h.d_phi_sin)};
    }
    return h;
}

Cutoff default_cutoff(const Geometry& g) { return Cutoff{0.3 * g.r_sigma, 0.6 * g.r_sigma, 5}; }

void validate(const Cutoff& c, const Geometry& g) {
    if (!(c.d0 > 0.0) || !(c.d1 > c.d0) || !(c.d1 < g.r_sigma * (1.0 - kChartFloor)))
        throw ParameterDomainError("cutoff requires 0 < d0 < d1 < 0.9 r_sigma");
    if (c.degree != 5) throw ParameterDomainError("only the quintic smoothstep is implemented");
}

CutoffValue cutoff_chi(const Cutoff& c, double y3) {
    if (y3 <= c.d0) return {1.0, 0.0, 0.0, 0.0};
    if (y3 >= c.d1) return {0.0, 0.0, 0.0, 1.0};
    const double w = c.d1 - c.d0;
    const double t = (y3 - c.d0) / w;
    const double u = 1.0 - t;
    return {u * u * u * (1.0 + 3.0 * t + 6.0 * t * t), -30.0 * t * t * (1.0 - t) * (1.0 - t) / w,
            -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (w * w), t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)};
}

}  // namespace muskin
