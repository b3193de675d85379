#pragma once

#include <array>
#include <complex>

namespace muskin {

using cplx = std::complex<double>;

enum class GeometryKind { ConcentricCylinders, ConcentricSpheres };

/// Omega_- is the disk/ball of radius r_sigma; Omega_+ the shell out to r_gamma.
struct Geometry {
    GeometryKind kind = GeometryKind::ConcentricCylinders;
    double r_sigma = 1.0;
    double r_gamma = 2.0;
};

void validate(const Geometry& g);

/// Curvature tensor in the orthonormal tangent frame: (theta, z) on the cylinder,
/// (theta, phi) on the sphere. Signed with the unit normal pointing into Omega_-.
struct CurvatureData {
    std::array<std::array<double, 2>, 2> b{};
    double mean_H = 0.0;
};

CurvatureData curvature(const Geometry& g);

/// (C - H) applied to a tangential vector given in the tangent frame.
std::array<cplx, 2> curvature_minus_mean(const CurvatureData& c, const std::array<cplx, 2>& j);

/// Principal curvature along tangent direction alpha (0 or 1).
double principal_curvature(const Geometry& g, int alpha);

/// Ratio of the physical to the covariant tangent-vector length at depth y3.
double metric_factor(const Geometry& g, int alpha, double y3);

using Point3 = std::array<double, 3>;

/// Surface coordinates (theta, z) on the cylinder or (polar theta, azimuth phi) on the
/// sphere, plus depth y3 = r_sigma - r.
struct NormalCoords {
    double y1 = 0.0;
    double y2 = 0.0;
    double y3 = 0.0;
};

inline constexpr double kChartFloor = 0.1;  ///< chart valid for r >= kChartFloor * r_sigma

NormalCoords normal_coords(const Geometry& g, const Point3& x);
Point3 from_normal_coords(const Geometry& g, const NormalCoords& y);

/// Single-mode tangential field. Cylinder: components along (theta, z). Sphere:
/// coefficients of (grad_s Y, grad_s Y x r_hat) with grad_s the unit-sphere gradient.
struct TangentialModal {
    cplx t1{0.0, 0.0};
    cplx t2{0.0, 0.0};
};

/// Surface divergence of the mode (angular order m on the cylinder, degree n on the sphere).
cplx surface_divergence(const Geometry& g, int mode, const TangentialModal& j);

/// Orthonormal spherical harmonic Y_nm at (theta, phi) with its angular derivatives.
struct HarmonicValue {
    cplx y;           ///< Y_nm
    cplx d_theta;     ///< dY/dtheta
    cplx d_phi_sin;   ///< (1/sin theta) dY/dphi
};

HarmonicValue spherical_harmonic(int n, int m, double theta, double phi);

/// C^2 quintic smoothstep, 1 on [0, d0] and 0 on [d1, inf).
struct Cutoff {
    double d0 = 0.3;
    double d1 = 0.6;
    int degree = 5;
};

struct CutoffValue {
    double chi = 1.0;
    double d1chi = 0.0;
    double d2chi = 0.0;
    double complement = 0.0;  ///< 1 - chi without cancellation near d0
};

Cutoff default_cutoff(const Geometry& g);
void validate(const Cutoff& c, const Geometry& g);
CutoffValue cutoff_chi(const Cutoff& c, double y3);

}  // namespace muskin
