#pragma once
// High-precision power-series reference values for Bessel functions (test only).

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <complex>

namespace oracle {

using mpf = boost::multiprecision::cpp_bin_float_100;
using mpc = boost::multiprecision::cpp_complex_100;

inline mpc to_mp(std::complex<double> z) { return mpc(mpf(z.real()), mpf(z.imag())); }
inline std::complex<double> to_d(const mpc& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline mpf factorial(int n) {
    mpf f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline mpf harmonic(int n) {
    mpf h = 0;
    for (int k = 1; k <= n; ++k) h += mpf(1) / k;
    return h;
}

inline mpc besselj(int n, const mpc& z) {
    const mpc h = z / 2;
    const mpc q = -h * h;
    mpc term = pow(h, n) / factorial(n);
    mpc sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= q / (mpf(k) * (n + k));
        sum += term;
        if (abs(term) < mpf("1e-80") * abs(sum)) break;
    }
    return sum;
}

inline mpc bessely(int n, const mpc& z) {
    const mpf pi = boost::math::constants::pi<mpf>();
    const mpf gamma = boost::math::constants::euler<mpf>();
    const mpc h = z / 2;
    const mpc q = h * h;
    mpc first = 0;
    for (int k = 0; k < n; ++k) first += factorial(n - k - 1) / factorial(k) * pow(q, k);
    first *= -pow(h, -n) / pi;
    const mpc second = mpf(2) / pi * log(h) * besselj(n, z);
    mpc term = mpf(1) / factorial(n);  // (-q)^k/(k!(n+k)!)
    mpc third = 0;
    for (int k = 0; k < 400; ++k) {
        if (k > 0) term *= -q / (mpf(k) * (n + k));
        const mpc t = (harmonic(k) + harmonic(n + k) - 2 * gamma) * term;
        third += t;
        if (k > 4 && abs(t) < mpf("1e-80") * abs(third)) break;
    }
    third *= -pow(h, n) / pi;
    return first + second + third;
}

/// Spherical j_n by its power series.
inline mpc sph_j(int n, const mpc& z) {
    mpf dfact = 1;
    for (int k = 1; k <= 2 * n + 1; k += 2) dfact *= k;
    const mpc q = -z * z / 2;
    mpc term = pow(z, n) / dfact;
    mpc sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= q / (mpf(k) * (2 * n + 2 * k + 1));
        sum += term;
        if (abs(term) < mpf("1e-80") * abs(sum)) break;
    }
    return sum;
}

/// Spherical h1_n by the terminating expansion.
inline mpc sph_h1(int n, const mpc& z) {
    const mpc i(0, 1);
    mpc sum = 0;
    for (int k = 0; k <= n; ++k)
        sum += pow(i, k) * factorial(n + k) / (factorial(k) * factorial(n - k)) / pow(2 * z, k);
    return pow(-i, n + 1) * exp(i * z) / z * sum;
}

}  // namespace oracle
