#pragma once
// Finite-volume collocation of the cylinder TM radial problem (test-only oracle).
//   (p r f')' + p (k^2 r - m^2/r) f = 0 on (0, r_gamma),  p = 1/alpha piecewise,
//   f(r_gamma) = A, regularity at r = 0.
// The interface conditions (f and f'/alpha continuous) are natural in flux form.

#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

struct RadialMedium {
    double r_sigma, r_gamma;
    cplx p_in, p_out;    // 1/alpha
    cplx k2_in, k2_out;  // region wavenumbers squared
    int m;
    cplx amplitude;
};

/// Returns f at nodes r_i = i*r_gamma/N (N must make r_sigma a node).
inline std::vector<cplx> solve_fd(const RadialMedium& md, int N) {
    const double h = md.r_gamma / N;
    const int iR = static_cast<int>(std::lround(md.r_sigma / h));
    auto p_at = [&](double r) { return r < md.r_sigma ? md.p_in : md.p_out; };
    auto q_at = [&](double r, bool inside) {
        const cplx p = inside ? md.p_in : md.p_out;
        const cplx k2 = inside ? md.k2_in : md.k2_out;
        return p * (k2 * r - double(md.m) * md.m / r);
    };
    std::vector<cplx> lo(N + 1), di(N + 1), up(N + 1), rhs(N + 1);
    // Row 0: regularity.
    if (md.m == 0) {
        const double r12 = 0.5 * h;
        const cplx w = p_at(r12) * r12 / h;
        di[0] = -w + md.p_in * md.k2_in * (h * h / 8.0);
        up[0] = w;
    } else {
        di[0] = 1.0;
    }
    for (int i = 1; i < N; ++i) {
        const double r = i * h, rm = r - 0.5 * h, rp = r + 0.5 * h;
        const cplx wm = p_at(rm) * rm / h, wp = p_at(rp) * rp / h;
        cplx q;
        if (i == iR) q = 0.5 * (q_at(r, true) + q_at(r, false));
        else q = q_at(r, i < iR);
        lo[i] = wm;
        up[i] = wp;
        di[i] = -(wm + wp) + h * q;
    }
    di[N] = 1.0;
    rhs[N] = md.amplitude;
    // Thomas algorithm.
    std::vector<cplx> c(N + 1), d(N + 1), f(N + 1);
    c[0] = up[0] / di[0];
    d[0] = rhs[0] / di[0];
    for (int i = 1; i <= N; ++i) {
        const cplx den = di[i] - lo[i] * c[i - 1];
        c[i] = up[i] / den;
        d[i] = (rhs[i] - lo[i] * d[i - 1]) / den;
    }
    f[N] = d[N];
    for (int i = N - 1; i >= 0; --i) f[i] = d[i] - c[i] * f[i + 1];
    return f;
}

/// Richardson-extrapolated values at the nodes of the coarse grid.
inline std::vector<cplx> solve_fd_richardson(const RadialMedium& md, int N) {
    const auto a = solve_fd(md, N);
    const auto b = solve_fd(md, 2 * N);
    std::vector<cplx> out(N + 1);
    for (int i = 0; i <= N; ++i) out[i] = (4.0 * b[2 * i] - a[i]) / 3.0;
    return out;
}

}  // namespace oracle
