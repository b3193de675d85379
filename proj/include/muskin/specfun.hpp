#pragma once

#include <complex>

namespace muskin {

using cplx = std::complex<double>;

/// Exponentially scaled complex number: true value = mantissa * exp(log_scale).
///
/// After normalize() the mantissa magnitude lies in [1, 2) (or the mantissa is
/// exactly zero with log_scale 0), so products and quotients of Bessel values with
/// arguments as large as |Im z| ~ 1e6 stay representable.
struct ScaledValue {
    cplx mantissa{0.0, 0.0};
    double log_scale = 0.0;

    ScaledValue() = default;
    ScaledValue(cplx m, double ls = 0.0) : mantissa(m), log_scale(ls) { normalize(); }

    void normalize();

    /// Reconstructs the plain value; overflows to inf/0 if the scale is extreme.
    [[nodiscard]] cplx value() const;
    [[nodiscard]] bool is_zero() const { return mantissa == cplx(0.0, 0.0); }
    /// Natural log of the magnitude (-inf for zero).
    [[nodiscard]] double log_abs() const;

    ScaledValue& operator*=(const ScaledValue& o);
    ScaledValue& operator/=(const ScaledValue& o);
    ScaledValue& operator+=(const ScaledValue& o);
    ScaledValue& operator-=(const ScaledValue& o);
    ScaledValue& operator*=(cplx c);
};

ScaledValue operator*(ScaledValue a, const ScaledValue& b);
ScaledValue operator/(ScaledValue a, const ScaledValue& b);
ScaledValue operator+(ScaledValue a, const ScaledValue& b);
ScaledValue operator-(ScaledValue a, const ScaledValue& b);
ScaledValue operator*(ScaledValue a, cplx c);
ScaledValue operator*(cplx c, ScaledValue a);
ScaledValue operator-(ScaledValue a);
ScaledValue conj(ScaledValue a);

/// a/b as a plain complex number (finite whenever the ratio is representable).
cplx ratio(const ScaledValue& a, const ScaledValue& b);

struct BesselPair {
    ScaledValue value;
    ScaledValue derivative;  ///< d/dz
};

enum class CylKind { J, Y, H1 };
enum class SphKind { j, y, h1 };

inline constexpr int kMaxBesselOrder = 64;

/// Cylinder functions of integer order with complex argument, principal branch
/// (-pi < arg z <= pi). Throws SingularArgumentError for Y/H1 at z = 0 and
/// DomainError for orders outside [0, kMaxBesselOrder].
BesselPair cyl_bessel(CylKind kind, int order, cplx z);

/// Spherical Bessel functions j_n, y_n, h1_n = j_n + i y_n.
BesselPair sph_bessel(SphKind kind, int order, cplx z);

/// All three kinds at once; cheaper than three separate calls.
struct BesselSet {
    BesselPair first;   ///< J or j
    BesselPair second;  ///< Y or y
    BesselPair third;   ///< H1 or h1
};

BesselSet cyl_bessel_set(int order, cplx z);
BesselSet sph_bessel_set(int order, cplx z);

/// Riccati-Bessel form z*f(z) and its derivative f + z f', built from sph_bessel.
BesselPair riccati(const BesselPair& sph, cplx z);

}  // namespace muskin
