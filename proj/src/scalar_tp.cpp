#include "muskin/scalar_tp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "muskin/errors.hpp"

namespace muskin {

namespace {

constexpr int kMaxScalarOrder = 256;
constexpr double kConditionLimit = 1e12;

bool is_cylinder(const Geometry& g) { return g.kind == GeometryKind::ConcentricCylinders; }

/// Angular eigenvalue: m^2 on the circle, n(n+1) on the sphere.
double angular_weight(const Geometry& g, const SurfaceMode& m) {
    const double n = m.order;
    return is_cylinder(g) ? n * n : n * (n + 1.0);
}

void check_mode(const Geometry& g, const SurfaceMode& m) {
    if (std::abs(m.order) > kMaxScalarOrder) throw DomainError("scalar mode order out of range");
    if (!is_cylinder(g) && (m.order < 0 || std::abs(m.azimuthal) > m.order))
        throw ParameterDomainError("sphere modes need n >= 0 and |m| <= n");
}

/// int_a^b rho^s d rho.
double power_integral(int s, double a, double b) {
    if (s == -1) return std::log(b / a);
    return (std::pow(b, s + 1) - std::pow(a, s + 1)) / (s + 1);
}

struct PowerTerm {
    cplx c;
    int p;
};

/// int |f|^2 rho^w and int (|f'|^2 + L |f|^2 / rho^2) rho^w for f = sum c rho^p.
std::array<double, 2> radial_energy(const std::vector<PowerTerm>& f, int w, double L, double a, double b) {
    double l2 = 0.0, grad = 0.0;
    for (const PowerTerm& u : f)
        for (const PowerTerm& v : f) {
            const double cc = (u.c * std::conj(v.c)).real();
            l2 += cc * power_integral(u.p + v.p + w, a, b);
            const double gw = static_cast<double>(u.p) * v.p + L;
            if (gw != 0.0) grad += cc * gw * power_integral(u.p + v.p + w - 2, a, b);
        }
    return {std::max(l2, 0.0), std::max(grad, 0.0)};
}

std::array<cplx, 2> interior_radial(const ScalarModeSolution& m, const Geometry& g, double r) {
    const double R = g.r_sigma;
    const double rho = r / R;
    const cplx f = m.interior * std::pow(rho, m.p);
    return {f, m.p == 0 ? cplx(0.0) : m.interior * (m.p * std::pow(rho, m.p - 1) / R)};
}

/// Exterior branch; written in rho/rho_g so it vanishes exactly on Gamma.
std::array<cplx, 2> exterior_radial(const ScalarModeSolution& m, const Geometry& g, double r) {
    const double R = g.r_sigma;
    const double rg = g.r_gamma / R;
    const double x = r / g.r_gamma;
    const cplx f = m.exterior * (std::pow(x, m.p) - std::pow(x, m.q));
    const cplx fp = m.exterior * ((m.p * std::pow(x, m.p - 1) - m.q * std::pow(x, m.q - 1)) / (rg * R));
    return {f, fp};
}

}  // namespace

std::array<cplx, 2> ScalarSolution::radial(std::size_t i, double r) const {
    return r <= geometry.r_sigma ? interior_radial(modes.at(i), geometry, r) : exterior_radial(modes.at(i), geometry, r);
}

double ScalarSolution::flux_jump_residual() const {
    double worst = 0.0;
    const double R = geometry.r_sigma;
    for (const ScalarModeSolution& m : modes) {
        const cplx fm = a_minus * interior_radial(m, geometry, R)[1];
        const cplx fp = a_plus * exterior_radial(m, geometry, R)[1];
        const cplx rhs = (a_minus - a_plus) * m.mode.coeff;
        const double scale = std::max({std::abs(fm), std::abs(fp), std::abs(rhs)});
        if (scale > 0.0) worst = std::max(worst, std::abs(fm - fp - rhs) / scale);
    }
    return worst;
}

double ScalarSolution::continuity_residual() const {
    double worst = 0.0;
    const double R = geometry.r_sigma;
    for (const ScalarModeSolution& m : modes) {
        const cplx a = interior_radial(m, geometry, R)[0], b = exterior_radial(m, geometry, R)[0];
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
    }
    return worst;
}

ScalarSolution solve_scalar(const ScalarProblem& p) {
    validate(p.geometry);
    if (p.a_plus == cplx(0.0)) throw ParameterDomainError("a_plus must be nonzero");
    if (!std::isfinite(std::abs(p.a_minus)) || !std::isfinite(std::abs(p.a_plus)))
        throw ParameterDomainError("coefficients must be finite");
    const Geometry& g = p.geometry;
    const bool cyl = is_cylinder(g);
    ScalarSolution s;
    s.geometry = g;
    s.a_plus = p.a_plus;
    s.a_minus = p.a_minus;
    const double R = g.r_sigma, rg = g.r_gamma / g.r_sigma;
    for (const SurfaceMode& mode : p.g) {
        check_mode(g, mode);
        if (mode.order == 0) {
            if (mode.coeff != cplx(0.0)) throw CompatibilityError("g must have zero mean on Sigma");
            continue;
        }
        ScalarModeSolution m;
        m.mode = mode;
        m.p = cyl ? std::abs(mode.order) : mode.order;
        m.q = cyl ? -m.p : -(mode.order + 1);
        const double ep = std::pow(rg, -m.p), eq = std::pow(rg, -m.q);
        Eigen::Matrix2cd A;
        Eigen::Vector2cd b;
        A << 1.0, -(ep - eq), p.a_minus * (m.p / R), -p.a_plus * ((m.p * ep - m.q * eq) / R);
        b << 0.0, (p.a_minus - p.a_plus) * mode.coeff;
        for (int i = 0; i < 2; ++i) {
            const double mx = std::max(std::abs(A(i, 0)), std::abs(A(i, 1)));
            A.row(i) /= mx;
            b(i) /= mx;
        }
        const auto sv = Eigen::JacobiSVD<Eigen::Matrix2cd>(A).singularValues();
        m.condition = sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
        if (!(m.condition <= kConditionLimit))
            throw ConditioningError("scalar transmission system is singular (mode " + std::to_string(mode.order) + ")",
                                    mode.order, m.condition);
        const Eigen::Vector2cd c = A.fullPivLu().solve(b);
        m.interior = c(0);
        m.exterior = c(1);
        s.modes.push_back(m);
    }
    return s;
}

ScalarNorms scalar_norms(const ScalarSolution& s) {
    const Geometry& g = s.geometry;
    const bool cyl = is_cylinder(g);
    const double R = g.r_sigma, rg = g.r_gamma / R;
    // Angular normalisation and the radial Jacobian (r dr or r^2 dr) in rho = r/R.
    const double ang = cyl ? 2.0 * std::numbers::pi : 1.0;
    const int w = cyl ? 1 : 2;
    const double l2_scale = ang * std::pow(R, w + 1), grad_scale = ang * std::pow(R, w - 1);
    ScalarNorms out;
    double l2m = 0, l2p = 0, sm = 0, sp = 0, tr = 0, gg = 0;
    for (const ScalarModeSolution& m : s.modes) {
        const double L = angular_weight(g, m.mode);
        const auto em = radial_energy({{m.interior, m.p}}, w, L, 0.0, 1.0);
        const auto ex = radial_energy({{m.exterior * std::pow(rg, -m.p), m.p}, {-m.exterior * std::pow(rg, -m.q), m.q}}, w,
                                      L, 1.0, rg);
        l2m += em[0];
        sm += em[1];
        l2p += ex[0];
        sp += ex[1];
        const double t = std::pow(1.0 + L, 0.75) * std::abs(m.interior);
        tr += t * t;
        gg += std::norm(m.mode.coeff);
    }
    out.l2_minus = std::sqrt(l2m * l2_scale);
    out.l2_plus = std::sqrt(l2p * l2_scale);
    out.h1semi_minus = std::sqrt(sm * grad_scale);
    out.h1semi_plus = std::sqrt(sp * grad_scale);
    out.h1_minus = std::hypot(out.l2_minus, out.h1semi_minus);
    out.h1_plus = std::hypot(out.l2_plus, out.h1semi_plus);
    out.trace_spectral = std::sqrt(tr);
    out.h32_equiv = out.trace_spectral + std::hypot(out.h1semi_minus, out.h1semi_plus);
    out.g_l2 = std::sqrt(gg * ang * std::pow(R, w));
    return out;
}

SweepReport uniform_sweep(const Geometry& geometry, const std::vector<SurfaceMode>& g, const std::vector<cplx>& ratios,
                          cplx a_plus) {
    SweepReport rep;
    for (const cplx& ratio : ratios) {
        SweepRow row;
        row.ratio = ratio;
        try {
            const ScalarSolution s = solve_scalar({geometry, a_plus, ratio * a_plus, g});
            row.solved = true;
            for (const auto& m : s.modes) row.condition = std::max(row.condition, m.condition);
            row.norms = scalar_norms(s);
            row.normalized = row.norms.g_l2 > 0.0 ? row.norms.h32_equiv / row.norms.g_l2 : 0.0;
        } catch (const ConditioningError& e) {
            row.condition = e.condition();
        }
        rep.rows.push_back(row);
    }

    rep.bounded = true;
    std::vector<const SweepRow*> real_rows;
    for (const SweepRow& r : rep.rows) {
        if (std::abs(r.ratio) < 10.0) continue;
        if (!r.solved || !std::isfinite(r.normalized)) {
            rep.bounded = false;
            continue;
        }
        rep.sup_normalized = std::max(rep.sup_normalized, r.normalized);
        if (r.ratio.imag() == 0.0 && r.ratio.real() > 0.0) real_rows.push_back(&r);
    }
    std::sort(real_rows.begin(), real_rows.end(),
              [](const SweepRow* a, const SweepRow* b) { return a->ratio.real() < b->ratio.real(); });
    if (real_rows.size() >= 2) {
        const double a = real_rows[real_rows.size() - 2]->normalized, b = real_rows.back()->normalized;
        const double mx = std::max(a, b);
        rep.saturation_change = mx > 0.0 ? std::abs(a - b) / mx : 0.0;
    }

    // Smallest |ratio| above which every swept system solved.
    std::vector<const SweepRow*> by_mag;
    for (const SweepRow& r : rep.rows) by_mag.push_back(&r);
    std::sort(by_mag.begin(), by_mag.end(),
              [](const SweepRow* a, const SweepRow* b) { return std::abs(a->ratio) < std::abs(b->ratio); });
    for (auto it = by_mag.rbegin(); it != by_mag.rend() && (*it)->solved; ++it) rep.rho0_estimate = std::abs((*it)->ratio);

    rep.verdict = rep.bounded && rep.saturation_change < 0.1;
    return rep;
}

}  // namespace muskin
