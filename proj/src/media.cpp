#include "muskin/media.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "muskin/errors.hpp"

namespace muskin {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ParameterDomainError(what);
}

}  // namespace

void validate(const MediaParams& p) {
    require(std::isfinite(p.omega) && p.omega != 0.0, "omega must be finite and nonzero");
    require(std::isfinite(p.eps0) && p.eps0 > 0.0, "eps0 must be positive");
    require(std::isfinite(p.mu_plus) && p.mu_plus > 0.0, "mu_plus must be positive");
    require(std::isfinite(p.sigma_plus) && p.sigma_plus > 0.0, "sigma_plus must be positive");
    require(std::isfinite(p.sigma_minus) && p.sigma_minus > 0.0, "sigma_minus must be positive");
    require(std::isfinite(p.mu_r) && p.mu_r >= 1.0, "mu_r must be >= 1");
}

StabilityConstants stability_constants(const MediaParams& p) {
    validate(p);
    const double we2 = p.omega * p.omega * p.eps0 * p.eps0;
    const double qm = we2 + p.sigma_minus * p.sigma_minus;
    const double qp = we2 + p.sigma_plus * p.sigma_plus;
    StabilityConstants c;
    c.m = std::min(std::sqrt(qm), std::sqrt(qp));
    c.C1 = std::max(qm / p.sigma_minus, qp / p.sigma_plus) / c.m;
    c.C2 = std::sqrt(p.eps0 * c.C1 * c.C1 / (c.m * c.m) + c.C1 / (std::abs(p.omega) * c.m));
    return c;
}

DerivedParams derive_params(const MediaParams& p) {
    validate(p);
    DerivedParams d;
    d.eps = 1.0 / std::sqrt(p.mu_r);
    d.kappa_plus = p.omega * std::sqrt(p.eps0 * p.mu_plus);
    // delta^2 = omega*eps0/sigma; it is only ever used squared, so negative omega is harmless.
    const double dp2 = p.omega * p.eps0 / p.sigma_plus;
    const double dm2 = p.omega * p.eps0 / p.sigma_minus;
    d.delta_plus = std::sqrt(std::abs(dp2));
    d.delta_minus = std::sqrt(std::abs(dm2));
    d.alpha_plus = cplx(1.0, 1.0 / dp2);
    d.alpha_minus = cplx(1.0, 1.0 / dm2);
    d.theta_minus = std::atan(1.0 / dm2);
    const double modulus = std::abs(d.kappa_plus) * std::pow(1.0 + 1.0 / (dm2 * dm2), 0.25);
    d.lambda = std::polar(modulus, 0.5 * (d.theta_minus - std::numbers::pi));
    // Negative omega flips theta; -lambda has the same square and restores Re(lambda) > 0.
    if (d.lambda.real() < 0.0) d.lambda = -d.lambda;
    d.stab = stability_constants(p);
    return d;
}

cplx DerivedParams::k_plus() const {
    return kappa_plus * std::sqrt(alpha_plus);
}

cplx DerivedParams::k_minus() const {
    return cplx(0.0, 1.0) * lambda / eps;
}

cplx ampere_factor(const MediaParams& p, bool interior) {
    return cplx(-(interior ? p.sigma_minus : p.sigma_plus), p.omega * p.eps0);
}

}  // namespace muskin
