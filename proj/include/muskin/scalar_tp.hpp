#pragma once

#include <optional>
#include <vector>

#include "muskin/geometry.hpp"

namespace muskin {

/// One harmonic of the surface datum g on Sigma.
/// Cylinder: coeff * exp(i*order*theta). Sphere: coeff * Y_{order, azimuthal}.
struct SurfaceMode {
    int order = 1;
    int azimuthal = 0;
    cplx coeff{0.0};
};

/// Two-coefficient transmission problem with zero Dirichlet data on Gamma.
struct ScalarProblem {
    Geometry geometry;
    cplx a_plus{1.0};
    cplx a_minus{10.0};
    std::vector<SurfaceMode> g;
};

/// f-(r) = A rho^p on Omega_-, f+(r) = B [(rho/rho_g)^p - (rho/rho_g)^q] on Omega_+, rho = r/r_sigma.
struct ScalarModeSolution {
    SurfaceMode mode;
    int p = 0, q = 0;
    cplx interior{0.0};  ///< A
    cplx exterior{0.0};  ///< B
    double condition = 1.0;
};

struct ScalarSolution {
    Geometry geometry;
    cplx a_plus{1.0}, a_minus{1.0};
    std::vector<ScalarModeSolution> modes;

    /// Radial factor and its r-derivative of mode i.
    [[nodiscard]] std::array<cplx, 2> radial(std::size_t i, double r) const;
    /// Relative flux-jump and continuity residuals at Sigma, worst over modes.
    [[nodiscard]] double flux_jump_residual() const;
    [[nodiscard]] double continuity_residual() const;
};

ScalarSolution solve_scalar(const ScalarProblem& p);

struct ScalarNorms {
    double l2_minus = 0.0, l2_plus = 0.0;
    double h1semi_minus = 0.0, h1semi_plus = 0.0;
    double h1_minus = 0.0, h1_plus = 0.0;
    double trace_spectral = 0.0;  ///< sqrt(sum ((1 + w)^{3/4} |phi(R)|)^2), w = m^2 or n(n+1)
    double h32_equiv = 0.0;       ///< trace_spectral + piecewise H1 seminorm
    double g_l2 = 0.0;            ///< ||g||_{0, Sigma}
};

ScalarNorms scalar_norms(const ScalarSolution& s);

struct SweepRow {
    cplx ratio;  ///< a_- / a_+
    bool solved = false;
    double condition = 0.0;
    ScalarNorms norms;
    double normalized = 0.0;  ///< h32_equiv / ||g||
};

struct SweepReport {
    std::vector<SweepRow> rows;
    double sup_normalized = 0.0;     ///< over solved rows with |ratio| >= 10
    double saturation_change = 0.0;  ///< relative change between the two largest real ratios
    std::optional<double> rho0_estimate;  ///< smallest |ratio| whose modal systems are well-conditioned
    bool bounded = false;
    bool verdict = false;
};

SweepReport uniform_sweep(const Geometry& geometry, const std::vector<SurfaceMode>& g,
                          const std::vector<cplx>& ratios, cplx a_plus = 1.0);

}  // namespace muskin
