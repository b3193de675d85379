#pragma once

#include <array>
#include <complex>
#include <vector>

#include "muskin/geometry.hpp"
#include "muskin/media.hpp"
#include "muskin/specfun.hpp"

namespace muskin {

enum class DriveKind { BoundaryTrace, ShellCurrent };

/// TM: H has no radial component (cylinder: H along the axis). TE: E has no radial component.
enum class Polarization { TM, TE };

struct Drive {
    DriveKind kind = DriveKind::BoundaryTrace;
    Polarization pol = Polarization::TM;
    int order = 0;        ///< cylinder m, sphere degree n
    int azimuthal = 0;    ///< sphere order m (|m| <= n); unused on the cylinder
    cplx amplitude{1.0, 0.0};
    double shell_a = 0.0;  ///< ShellCurrent radial support [shell_a, shell_b]
    double shell_b = 0.0;
};

void validate(const Drive& drive, const Geometry& g);

enum class Region { Interior, Exterior };

/// Per-mode vector field in the separable frame.
/// Cylinder: (r, theta, z) components multiplying e^{i m theta}.
/// Sphere: coefficients of (Y r_hat, grad_s Y, grad_s Y x r_hat).
using ModalVector = std::array<cplx, 3>;

struct ModalFields {
    ModalVector H{};
    ModalVector curlH{};
    ModalVector j{};  ///< source current (nonzero only inside a shell)
};

struct ModeSystem {
    std::array<std::array<cplx, 3>, 3> A{};
    std::array<cplx, 3> rhs{};
    std::array<double, 3> row_scale{};  ///< factor applied to each row during balancing
};

/// Particular radial solution for a shell current (TM only).
struct ShellParticular {
    std::vector<double> nodes;   ///< quadrature nodes on [a, b]
    std::vector<double> weights;
    cplx moment_first{0.0};      ///< integral against the regular radial function
    cplx moment_second{0.0};     ///< integral against the singular radial function
    double achieved = 0.0;       ///< relative difference between the last two refinements
};

class ModalSolution {
public:
    Geometry geometry;
    MediaParams media;
    DerivedParams derived;
    Drive drive;
    /// Coefficients of the normalised radial basis: interior regular function
    /// (unit value at r_sigma), exterior regular function (unit value at r_gamma),
    /// exterior outgoing function (unit value at r_sigma).
    std::array<cplx, 3> coeff{};
    /// Log-scales of the basis normalisers, kept for reporting.
    std::array<double, 3> basis_log_scale{};
    std::array<ScaledValue, 3> basis_norm{};  ///< J(k_- R), J(k_+ R_gamma), H1(k_+ R) (or spherical)
    double condition = 0.0;
    ShellParticular particular;

    /// Scalar potential f and df/dr at radius r in the given region.
    [[nodiscard]] std::array<cplx, 2> potential(double r, Region region) const;
    /// H, curl H and j at radius r (per-mode form).
    [[nodiscard]] ModalFields fields(double r, Region region) const;
    [[nodiscard]] cplx wavenumber(Region region) const;
};

cplx region_wavenumber(const DerivedParams& d, Region region);

ModeSystem assemble_mode_system(const Geometry& g, const MediaParams& media, const Drive& drive,
                                const ShellParticular* particular = nullptr);

ModalSolution solve_exact(const Geometry& g, const MediaParams& media, const Drive& drive);

/// Variation-of-parameters particular solution for a ShellCurrent drive.
ShellParticular shell_source_particular(const Geometry& g, const DerivedParams& d, const Drive& drive,
                                        double tol = 1e-9);

/// Radial profile s(r) of the shell current (C^2 bump, peak equal to the amplitude).
cplx shell_profile(const Drive& drive, double r);

struct FieldSample {
    std::array<cplx, 3> H{};
    std::array<cplx, 3> curlH{};
    std::array<cplx, 3> E{};
    std::array<cplx, 3> j{};
};

/// Cartesian H, curl H, E and j at points of closure(Omega) outside the coordinate core.
/// Points with r <= r_sigma are evaluated from the interior side unless `side` says otherwise.
FieldSample eval_point(const ModalSolution& s, const Point3& x);
FieldSample eval_point(const ModalSolution& s, const Point3& x, Region side);
std::vector<FieldSample> eval_field(const ModalSolution& s, const std::vector<Point3>& points);
std::vector<std::array<cplx, 3>> recover_E(const ModalSolution& s, const std::vector<Point3>& points);

/// Angular factors turning a modal vector into Cartesian components at a point.
std::array<cplx, 3> modal_to_cartesian(const Geometry& g, const Drive& drive, const ModalVector& v, const Point3& x);

/// Curl of a single-mode field from its radial components v(r) and their r-derivatives.
ModalVector modal_curl(const Geometry& g, int order, double r, const ModalVector& v, const ModalVector& dv);

/// Tangential trace of a modal vector as a surface field ((theta, z) or (grad_s Y, grad_s Y x r_hat)).
TangentialModal tangential_part(const ModalVector& v);

/// w x n on Sigma (n = -r_hat) for a modal vector w.
TangentialModal cross_normal(const Geometry& g, const ModalVector& w);

struct InterfaceResiduals {
    double trace = 0.0;   ///< tangential H continuity
    double flux = 0.0;    ///< alpha^{-1} curl H x n continuity
    double normal = 0.0;  ///< eps^2 H+ . n = H- . n
};

InterfaceResiduals interface_residuals(const ModalSolution& s);

}  // namespace muskin
