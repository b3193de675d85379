#pragma once

#include <complex>

namespace muskin {

using cplx = std::complex<double>;

/// Physical parameters of the two-material transmission problem (coherent SI-like units).
struct MediaParams {
    double omega = 1.0;        ///< angular frequency, nonzero
    double eps0 = 1.0;         ///< electric permittivity, > 0
    double mu_plus = 1.0;      ///< permeability of the non-magnetic region, > 0
    double mu_r = 1.0;         ///< relative permeability mu_-/mu_+, >= 1
    double sigma_plus = 1.0;   ///< conductivity of the outer region, > 0
    double sigma_minus = 1.0;  ///< conductivity of the magnetic conductor, > 0
};

struct StabilityConstants {
    double m = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
};

/// Scalars derived from MediaParams. None of them except eps depend on mu_r.
struct DerivedParams {
    double eps = 1.0;          ///< 1/sqrt(mu_r)
    double kappa_plus = 0.0;   ///< omega*sqrt(eps0*mu_plus)
    double delta_plus = 0.0;   ///< sqrt(omega*eps0/sigma_plus)
    double delta_minus = 0.0;  ///< sqrt(omega*eps0/sigma_minus)
    cplx alpha_plus;           ///< 1 + i/delta_plus^2
    cplx alpha_minus;          ///< 1 + i/delta_minus^2
    double theta_minus = 0.0;  ///< arctan(1/delta_minus^2)
    cplx lambda;               ///< boundary-layer decay rate, Re > 0
    StabilityConstants stab;

    /// Exterior wavenumber k with k^2 = kappa_+^2 alpha_+.
    [[nodiscard]] cplx k_plus() const;
    /// Interior wavenumber k with k^2 = kappa_+^2 alpha_- / eps^2 (equals i*lambda/eps).
    [[nodiscard]] cplx k_minus() const;
};

void validate(const MediaParams& p);

DerivedParams derive_params(const MediaParams& p);

StabilityConstants stability_constants(const MediaParams& p);

/// Conductivity-weighted factor i*omega*eps0 - sigma of the requested region.
cplx ampere_factor(const MediaParams& p, bool interior);

}  // namespace muskin
