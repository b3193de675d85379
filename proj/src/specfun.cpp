#include "muskin/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "muskin/errors.hpp"

namespace muskin {

namespace {
constexpr double kLn10 = std::numbers::ln10;
constexpr double kLn2 = std::numbers::ln2;
constexpr cplx kI{0.0, 1.0};
}  // namespace

// ---------------------------------------------------------------- ScaledValue

void ScaledValue::normalize() {
    const double a = std::abs(mantissa);
    if (a == 0.0) {
        mantissa = {0.0, 0.0};
        log_scale = 0.0;
        return;
    }
    if (!std::isfinite(a)) return;
    // Binary rescaling is exact; |mantissa| ends up in [1, 2).
    const int e = std::ilogb(a);
    if (e != 0) {
        mantissa = {std::ldexp(mantissa.real(), -e), std::ldexp(mantissa.imag(), -e)};
        log_scale += e * kLn2;
    }
}

cplx ScaledValue::value() const {
    if (is_zero()) return {0.0, 0.0};
    const double k = std::nearbyint(log_scale / kLn2);
    if (std::abs(k) > 2200.0) return mantissa * std::exp(log_scale);
    const double rest = std::exp(log_scale - k * kLn2);
    const int ki = static_cast<int>(k);
    return {std::ldexp(mantissa.real() * rest, ki), std::ldexp(mantissa.imag() * rest, ki)};
}

double ScaledValue::log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa)) + log_scale;
}

ScaledValue& ScaledValue::operator*=(const ScaledValue& o) {
    mantissa *= o.mantissa;
    log_scale += o.log_scale;
    normalize();
    return *this;
}

ScaledValue& ScaledValue::operator/=(const ScaledValue& o) {
    if (o.is_zero()) throw SingularArgumentError("ScaledValue: division by zero");
    mantissa /= o.mantissa;
    log_scale -= o.log_scale;
    normalize();
    return *this;
}

ScaledValue& ScaledValue::operator+=(const ScaledValue& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
        *this = o;
        return *this;
    }
    if (log_scale >= o.log_scale) {
        mantissa += o.mantissa * std::exp(o.log_scale - log_scale);
    } else {
        mantissa = o.mantissa + mantissa * std::exp(log_scale - o.log_scale);
        log_scale = o.log_scale;
    }
    normalize();
    return *this;
}

ScaledValue& ScaledValue::operator-=(const ScaledValue& o) { return *this += -o; }

ScaledValue& ScaledValue::operator*=(cplx c) {
    mantissa *= c;
    normalize();
    return *this;
}

ScaledValue operator*(ScaledValue a, const ScaledValue& b) { return a *= b; }
ScaledValue operator/(ScaledValue a, const ScaledValue& b) { return a /= b; }
ScaledValue operator+(ScaledValue a, const ScaledValue& b) { return a += b; }
ScaledValue operator-(ScaledValue a, const ScaledValue& b) { return a -= b; }
ScaledValue operator*(ScaledValue a, cplx c) { return a *= c; }
ScaledValue operator*(cplx c, ScaledValue a) { return a *= c; }
ScaledValue operator-(ScaledValue a) {
    a.mantissa = -a.mantissa;
    return a;
}
ScaledValue conj(ScaledValue a) {
    a.mantissa = std::conj(a.mantissa);
    return a;
}

cplx ratio(const ScaledValue& a, const ScaledValue& b) {
    if (b.is_zero()) throw SingularArgumentError("ratio: zero denominator");
    if (a.is_zero()) return {0.0, 0.0};
    return (a.mantissa / b.mantissa) * std::exp(a.log_scale - b.log_scale);
}


// ------------------------------------------------------------ shared helpers

namespace {

constexpr double kRescale = 1e200;
const double kLogRescale = 200.0 * kLn10;

void check_order(int order) {
    if (order < 0 || order > kMaxBesselOrder)
        throw DomainError("Bessel order out of range [0, " + std::to_string(kMaxBesselOrder) + "]");
}

void check_arg(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("Bessel argument is not finite");
}

/// exp(i*z) as a scaled value, exact in the exponent.
ScaledValue exp_iz(cplx z) { return ScaledValue(std::polar(1.0, z.real()), -z.imag()); }

double asymptotic_threshold(int top) { return std::max(30.0, 2.0 * top * top); }

/// Miller backward recurrence f_{k-1} = (c(k)/z) f_k - f_{k+1}, returning f_0..f_top
/// relative to a common (unknown) normalisation, with per-entry log scales. The
/// callback receives each f_k (k >= 0) in the running units so callers can
/// accumulate a normalisation sum; `sum` is rescaled in step with the recurrence.
struct MillerResult {
    std::vector<cplx> f;
    std::vector<double> log_scale;
    cplx sum{0.0, 0.0};
};

template <class Coef, class SumTerm>
MillerResult miller(int top, cplx z, Coef coef, SumTerm sum_term) {
    const double az = std::abs(z);
    const double base = std::max<double>(top, az);
    const int start = static_cast<int>(base + 30.0 + 12.0 * std::cbrt(base));
    MillerResult r;
    r.f.assign(top + 1, {0.0, 0.0});
    std::vector<int> stamp(top + 1, 0);
    int scales = 0;
    cplx next{0.0, 0.0};
    cplx cur{1e-30, 0.0};
    for (int k = start; k >= 0; --k) {
        if (k <= top) {
            r.f[k] = cur;
            stamp[k] = scales;
        }
        r.sum += sum_term(k, cur);
        if (k == 0) break;
        cplx prev = (coef(k) / z) * cur - next;
        next = cur;
        cur = prev;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            next /= kRescale;
            r.sum /= kRescale;
            ++scales;
        }
    }
    r.log_scale.resize(top + 1);
    for (int k = 0; k <= top; ++k) r.log_scale[k] = -kLogRescale * (scales - stamp[k]);
    return r;
}

// ---------------------------------------------------------- cylinder, Q1 only

struct PairQ1 {
    ScaledValue first[2];  // J or j at orders n, n+1
    ScaledValue third[2];  // H1 or h1 at orders n, n+1
};

/// Hankel asymptotic series for H1 and H2 of order nu (valid for |z| >> nu^2).
void hankel_asymptotic(int nu, cplx z, ScaledValue& h1, ScaledValue& h2) {
    const double mu = 4.0 * nu * nu;
    cplx s1{1.0, 0.0}, s2{1.0, 0.0};
    cplx term{1.0, 0.0};
    cplx ik{1.0, 0.0};
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * k) / z;
        const double t = std::abs(term);
        if (t > prev) break;
        ik *= kI;
        s1 += ik * term;
        s2 += std::conj(ik) * term;
        prev = t;
        if (t < 1e-17) break;
    }
    const cplx pref = std::sqrt(2.0 / (std::numbers::pi * z));
    const double phase = z.real() - (nu % 4) * 0.5 * std::numbers::pi - 0.25 * std::numbers::pi;
    h1 = ScaledValue(pref * s1 * std::polar(1.0, phase), -z.imag());
    h2 = ScaledValue(pref * s2 * std::polar(1.0, -phase), z.imag());
}

/// Modified Bessel K0, K1 for Re w >= 0, w != 0.
void bessel_k01(cplx w, ScaledValue& k0, ScaledValue& k1) {
    constexpr double euler = std::numbers::egamma;
    if (std::abs(w) <= 2.0) {
        const cplx q = 0.25 * w * w;
        const cplx lg = std::log(0.5 * w);
        cplx i0{0.0}, k0s{0.0}, i1s{0.0}, k1s{0.0};
        cplx t0{1.0, 0.0};  // q^k/(k!)^2
        cplx t1{1.0, 0.0};  // q^k/(k!(k+1)!)
        double hk = 0.0;
        for (int k = 0; k < 60; ++k) {
            if (k > 0) {
                t0 *= q / (double(k) * k);
                t1 *= q / (double(k) * (k + 1));
                hk += 1.0 / k;
            }
            const double hk1 = hk + 1.0 / (k + 1);
            i0 += t0;
            k0s += hk * t0;
            i1s += t1;
            k1s += (hk + hk1 - 2.0 * euler) * t1;
            if (std::abs(t0) < 1e-18 * std::abs(i0) && k > 2) break;
        }
        const cplx kk0 = -(lg + euler) * i0 + k0s;
        const cplx kk1 = 1.0 / w + lg * (0.5 * w * i1s) - 0.25 * w * k1s;
        k0 = ScaledValue(kk0);
        k1 = ScaledValue(kk1);
        return;
    }
    // Steed / Temme continued fraction for K0 and K1 (order zero).
    cplx b = 2.0 * (1.0 + w);
    cplx d = 1.0 / b;
    cplx h = d, delh = d;
    cplx q1{0.0}, q2{1.0};
    const double a1 = 0.25;
    cplx q = a1, c = a1;
    double a = -a1;
    cplx s = 1.0 + q * delh;
    bool converged = false;
    for (int i = 2; i < 200000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / double(i);
        const cplx qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cplx dels = q * delh;
        s += dels;
        if (std::abs(dels) < 1e-17 * std::abs(s)) {
            converged = true;
            break;
        }
    }
    if (!converged) throw AccuracyError("bessel_k01: continued fraction did not converge", 0.0);
    h *= a1;
    const cplx m0 = std::sqrt(std::numbers::pi / (2.0 * w)) / s * std::polar(1.0, -w.imag());
    k0 = ScaledValue(m0, -w.real());
    k1 = ScaledValue(m0 * (w + 0.5 - h) / w, -w.real());
}

PairQ1 cyl_q1(int n, cplx z) {
    PairQ1 out;
    const int top = n + 1;
    if (std::abs(z) >= asymptotic_threshold(top)) {
        for (int j = 0; j < 2; ++j) {
            ScaledValue h1, h2;
            hankel_asymptotic(n + j, z, h1, h2);
            out.third[j] = h1;
            out.first[j] = (h1 + h2) * 0.5;
        }
        return out;
    }
    // J from Miller, normalised by exp(-iz) = J0 + 2 sum (-i)^k J_k.
    const cplx mi{0.0, -1.0};
    auto mr = miller(top, z, [](int k) { return 2.0 * k; },
                     [&](int k, cplx f) { return k == 0 ? f : 2.0 * std::pow(mi, k % 4) * f; });
    const ScaledValue norm = ScaledValue(std::polar(1.0, -z.real()), z.imag()) / ScaledValue(mr.sum);
    for (int j = 0; j < 2; ++j) out.first[j] = ScaledValue(mr.f[n + j], mr.log_scale[n + j]) * norm;
    // H1 from K0, K1 at w = -iz, then forward recurrence.
    ScaledValue k0, k1;
    bessel_k01(-kI * z, k0, k1);
    ScaledValue hm = k0 * cplx(0.0, -2.0 / std::numbers::pi);
    ScaledValue hc = k1 * cplx(-2.0 / std::numbers::pi, 0.0);
    if (n == 0) {
        out.third[0] = hm;
        out.third[1] = hc;
        return out;
    }
    for (int k = 1; k <= n; ++k) {
        ScaledValue hn = hc * (2.0 * k / z) - hm;
        hm = hc;
        hc = hn;
    }
    out.third[0] = hm;
    out.third[1] = hc;
    return out;
}

}  // namespace

// ------------------------------------------------------------------ drivers

namespace {

enum class Quadrant { Q1, Q2, Q3, Q4 };

Quadrant quadrant_of(cplx z) {
    const bool upper = z.imag() >= 0.0;
    const bool right = z.real() >= 0.0;
    if (upper) return right ? Quadrant::Q1 : Quadrant::Q2;
    return right ? Quadrant::Q4 : Quadrant::Q3;
}

cplx to_q1(cplx z, Quadrant q) {
    switch (q) {
        case Quadrant::Q1: return z;
        case Quadrant::Q2: return -std::conj(z);
        case Quadrant::Q3: return -z;
        case Quadrant::Q4: return std::conj(z);
    }
    return z;
}

struct Values3 {
    ScaledValue first, second, third;
};

/// Maps cylinder values computed at q in Q1 back to z.
Values3 map_cyl(const ScaledValue& j, const ScaledValue& h, Quadrant quad, int order) {
    const ScaledValue y = (j - h) * kI;
    const double s = (order % 2 == 0) ? 1.0 : -1.0;
    switch (quad) {
        case Quadrant::Q1: return {j, y, h};
        case Quadrant::Q4: return {conj(j), conj(y), conj(j * 2.0 - h)};
        case Quadrant::Q2:
            return {conj(j) * s, (conj(y) + conj(j) * cplx(0.0, 2.0)) * s, conj(h) * (-s)};
        case Quadrant::Q3: return {j * s, (y - j * cplx(0.0, 2.0)) * s, (j * 2.0 + h) * s};
    }
    return {j, y, h};
}

/// Maps spherical values computed at q in Q1 back to z.
Values3 map_sph(const ScaledValue& j, const ScaledValue& h, Quadrant quad, int order) {
    const ScaledValue y = (j - h) * kI;
    const double s = (order % 2 == 0) ? 1.0 : -1.0;
    switch (quad) {
        case Quadrant::Q1: return {j, y, h};
        case Quadrant::Q4: return {conj(j), conj(y), conj(j * 2.0 - h)};
        case Quadrant::Q2: return {conj(j) * s, conj(y) * (-s), conj(h) * s};
        case Quadrant::Q3: return {j * s, y * (-s), (j * 2.0 - h) * s};
    }
    return {j, y, h};
}

BesselPair with_derivative(int n, cplx z, const ScaledValue& fn, const ScaledValue& fn1) {
    return {fn, fn * (double(n) / z) - fn1};
}

template <class Core, class Map>
BesselSet bessel_set(int order, cplx z, Core core, Map map) {
    check_order(order);
    check_arg(z);
    if (z == cplx(0.0, 0.0)) throw SingularArgumentError("second-kind Bessel function at z = 0");
    const Quadrant quad = quadrant_of(z);
    const PairQ1 p = core(order, to_q1(z, quad));
    const Values3 a = map(p.first[0], p.third[0], quad, order);
    const Values3 b = map(p.first[1], p.third[1], quad, order + 1);
    return {with_derivative(order, z, a.first, b.first), with_derivative(order, z, a.second, b.second),
            with_derivative(order, z, a.third, b.third)};
}

// -------------------------------------------------------- spherical, Q1 only

/// Terminating expansion for h1_n (sign = +1) or h2_n (sign = -1); cancellation-free only
/// when |z| exceeds n^2/2.
ScaledValue sph_hankel_exact(int n, cplx z, int sign) {
    const cplx is = cplx(0.0, double(sign));
    ScaledValue sum(1.0);
    ScaledValue term(1.0);
    for (int k = 1; k <= n; ++k) {
        term *= is * (double(n + k) * double(n - k + 1) / (2.0 * k)) / z;
        sum += term;
    }
    ScaledValue pref = sign > 0 ? exp_iz(z) : exp_iz(-z);
    pref *= std::pow(-is, (n + 1) % 4) / z;
    return pref * sum;
}

ScaledValue scaled_sin(cplx z) {
    if (std::abs(z.imag()) < 30.0) return ScaledValue(std::sin(z));
    const double y = std::abs(z.imag());
    const double sy = z.imag() > 0 ? 1.0 : -1.0;
    // Dominant exponential only; the other is below double precision.
    const cplx m = sy > 0 ? -std::polar(1.0, -z.real()) / cplx(0.0, 2.0) : std::polar(1.0, z.real()) / cplx(0.0, 2.0);
    return ScaledValue(m, y);
}

ScaledValue scaled_cos(cplx z) {
    if (std::abs(z.imag()) < 30.0) return ScaledValue(std::cos(z));
    const double y = std::abs(z.imag());
    const cplx m = z.imag() > 0 ? 0.5 * std::polar(1.0, -z.real()) : 0.5 * std::polar(1.0, z.real());
    return ScaledValue(m, y);
}

PairQ1 sph_q1(int n, cplx z) {
    PairQ1 out;
    const int top = n + 1;
    // h1 by forward recurrence from the closed forms at orders 0 and 1 (stable: j is minimal).
    {
        const ScaledValue e = exp_iz(z);
        ScaledValue hm = e * (cplx(0.0, -1.0) / z);
        ScaledValue hc = e * (-(1.0 + kI / z) / z);
        for (int k = 1; k <= n; ++k) {
            ScaledValue hn = hc * ((2.0 * k + 1.0) / z) - hm;
            hm = hc;
            hc = hn;
        }
        out.third[0] = hm;
        out.third[1] = hc;
    }
    if (std::abs(z) >= asymptotic_threshold(top)) {
        for (int j = 0; j < 2; ++j) out.first[j] = (out.third[j] + sph_hankel_exact(n + j, z, -1)) * 0.5;
        return out;
    }
    auto mr = miller(top, z, [](int k) { return 2.0 * k + 1.0; }, [](int, cplx) { return cplx(0.0); });
    // Reference value from a closed form at order 0 or 1.
    ScaledValue ref;
    int ref_order = 0;
    if (std::abs(z) < 1.0) {
        const cplx z2 = z * z;
        cplx t{1.0, 0.0}, s{1.0, 0.0};
        for (int k = 1; k < 30; ++k) {
            t *= -z2 / (double(2 * k) * (2 * k + 1));
            s += t;
            if (std::abs(t) < 1e-18) break;
        }
        ref = ScaledValue(s);
    } else {
        const ScaledValue sn = scaled_sin(z), cs = scaled_cos(z);
        const ScaledValue j0 = sn / ScaledValue(z);
        const ScaledValue j1 = (sn - cs * z) / ScaledValue(z * z);
        if (j1.log_abs() > j0.log_abs() && top >= 1) {
            ref = j1;
            ref_order = 1;
        } else {
            ref = j0;
        }
    }
    const ScaledValue norm = ref / ScaledValue(mr.f[ref_order], mr.log_scale[ref_order]);
    for (int j = 0; j < 2; ++j) out.first[j] = ScaledValue(mr.f[n + j], mr.log_scale[n + j]) * norm;
    return out;
}

}  // namespace

BesselSet cyl_bessel_set(int order, cplx z) { return bessel_set(order, z, cyl_q1, map_cyl); }
BesselSet sph_bessel_set(int order, cplx z) { return bessel_set(order, z, sph_q1, map_sph); }

BesselPair cyl_bessel(CylKind kind, int order, cplx z) {
    check_order(order);
    check_arg(z);
    if (z == cplx(0.0, 0.0)) {
        if (kind != CylKind::J) throw SingularArgumentError("Y and H1 are singular at z = 0");
        return {ScaledValue(order == 0 ? 1.0 : 0.0), ScaledValue(order == 1 ? 0.5 : 0.0)};
    }
    const BesselSet s = cyl_bessel_set(order, z);
    switch (kind) {
        case CylKind::J: return s.first;
        case CylKind::Y: return s.second;
        case CylKind::H1: return s.third;
    }
    return s.first;
}

BesselPair sph_bessel(SphKind kind, int order, cplx z) {
    check_order(order);
    check_arg(z);
    if (z == cplx(0.0, 0.0)) {
        if (kind != SphKind::j) throw SingularArgumentError("y and h1 are singular at z = 0");
        return {ScaledValue(order == 0 ? 1.0 : 0.0), ScaledValue(order == 1 ? 1.0 / 3.0 : 0.0)};
    }
    const BesselSet s = sph_bessel_set(order, z);
    switch (kind) {
        case SphKind::j: return s.first;
        case SphKind::y: return s.second;
        case SphKind::h1: return s.third;
    }
    return s.first;
}

BesselPair riccati(const BesselPair& sph, cplx z) {
    return {sph.value * z, sph.value + sph.derivative * z};
}

}  // namespace muskin
