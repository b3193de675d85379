#include "muskin/modal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "muskin/errors.hpp"
#include "muskin/quadrature.hpp"

namespace muskin {

namespace {

constexpr cplx kI{0.0, 1.0};

bool is_cylinder(const Geometry& g) { return g.kind == GeometryKind::ConcentricCylinders; }

/// Regular (first) and outgoing (third) radial functions at z.
BesselSet radial_set(const Geometry& g, int order, cplx z) {
    return is_cylinder(g) ? cyl_bessel_set(order, z) : sph_bessel_set(order, z);
}

double bump(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double w = u * (1.0 - u);
    return 64.0 * w * w * w;
}

/// Trace, flux and outer-boundary functionals of a potential (f, f') at radius r.
struct Functionals {
    cplx trace, flux, outer;
};

Functionals functionals(const Geometry& g, const Drive& drive, const DerivedParams& d, Region region, cplx f,
                        cplx fp, double r) {
    const bool cyl = is_cylinder(g);
    const cplx alpha = region == Region::Interior ? d.alpha_minus : d.alpha_plus;
    // mu/mu_- expressed through eps^2 so interior entries stay O(1).
    const double mu_ratio = region == Region::Interior ? 1.0 : d.eps * d.eps;
    if (drive.pol == Polarization::TM) {
        const cplx flux = cyl ? fp / alpha : (f + r * fp) / alpha;
        return {f, flux, f};
    }
    if (cyl) return {fp, mu_ratio * f, -fp};
    return {f + r * fp, mu_ratio * f, (f + r * fp) / r};
}

}  // namespace

void validate(const Drive& drive, const Geometry& g) {
    validate(g);
    if (drive.order < 0 || drive.order > kMaxBesselOrder)
        throw DomainError("drive mode exceeds the special-function order cap");
    if (!is_cylinder(g) && std::abs(drive.azimuthal) > drive.order)
        throw DomainError("sphere drive requires |m| <= n");
    if (!is_cylinder(g) && drive.order == 0) throw DomainError("sphere drives require degree n >= 1");
    if (drive.kind == DriveKind::ShellCurrent) {
        if (drive.pol != Polarization::TM) throw ParameterDomainError("shell currents drive TM modes only");
        if (!(drive.shell_a > g.r_sigma) || !(drive.shell_b > drive.shell_a) || !(drive.shell_b < g.r_gamma))
            throw ParameterDomainError("shell support must satisfy r_sigma < a < b < r_gamma");
    }
}

cplx region_wavenumber(const DerivedParams& d, Region region) {
    return region == Region::Interior ? d.k_minus() : d.k_plus();
}

cplx ModalSolution::wavenumber(Region region) const { return region_wavenumber(derived, region); }

cplx shell_profile(const Drive& drive, double r) {
    if (drive.kind != DriveKind::ShellCurrent) return {0.0, 0.0};
    return drive.amplitude * bump((r - drive.shell_a) / (drive.shell_b - drive.shell_a));
}

// ------------------------------------------------------------ particular solution

namespace {

/// Integrand kernels: cylinder returns (k t s J'(kt), k t s Y'(kt));
/// sphere returns (t s psi'(kt), t s chi'(kt)).
std::array<cplx, 2> moment_kernel(const Geometry& g, const Drive& drive, cplx k, double t) {
    const cplx s = shell_profile(drive, t);
    if (s == cplx(0.0)) return {cplx(0.0), cplx(0.0)};
    const cplx z = k * t;
    const BesselSet b = radial_set(g, drive.order, z);
    if (is_cylinder(g)) return {k * t * s * b.first.derivative.value(), k * t * s * b.second.derivative.value()};
    const cplx psi_p = riccati(b.first, z).derivative.value();
    const cplx chi_p = riccati(b.second, z).derivative.value();
    return {t * s * psi_p, t * s * chi_p};
}

std::array<cplx, 2> moments(const Geometry& g, const Drive& drive, cplx k, double lo, double hi, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
    std::array<cplx, 2> m{cplx(0.0), cplx(0.0)};
    for (int i = 0; i < n; ++i) {
        const auto v = moment_kernel(g, drive, k, c + h * rule.nodes[i]);
        m[0] += h * rule.weights[i] * v[0];
        m[1] += h * rule.weights[i] * v[1];
    }
    return m;
}

int particular_order(const ShellParticular& p) { return static_cast<int>(p.nodes.size()); }

/// f_p and f_p' from the two moments accumulated up to radius r.
std::array<cplx, 2> particular_from_moments(const Geometry& g, const Drive& drive, cplx k, double r,
                                            const std::array<cplx, 2>& m) {
    const cplx z = k * r;
    const BesselSet b = radial_set(g, drive.order, z);
    const cplx s = shell_profile(drive, r);
    if (is_cylinder(g)) {
        const double h = 0.5 * std::numbers::pi;
        const cplx f = h * (b.second.value.value() * m[0] - b.first.value.value() * m[1]);
        const cplx fp = -s + h * k * (b.second.derivative.value() * m[0] - b.first.derivative.value() * m[1]);
        return {f, fp};
    }
    const BesselPair psi = riccati(b.first, z), chi = riccati(b.second, z);
    const cplx u = -(chi.value.value() * m[0] - psi.value.value() * m[1]);
    const cplx up = r * s - k * (chi.derivative.value() * m[0] - psi.derivative.value() * m[1]);
    return {u / r, up / r - u / (r * r)};
}

}  // namespace

ShellParticular shell_source_particular(const Geometry& g, const DerivedParams& d, const Drive& drive, double tol) {
    if (drive.kind != DriveKind::ShellCurrent) throw ParameterDomainError("particular solution needs a shell drive");
    validate(drive, g);
    const cplx k = d.k_plus();
    ShellParticular p;
    int n = 16;
    auto prev = moments(g, drive, k, drive.shell_a, drive.shell_b, n);
    double diff = 0.0;
    for (n = 32; n <= 2048; n *= 2) {
        const auto cur = moments(g, drive, k, drive.shell_a, drive.shell_b, n);
        const double scale = std::max({std::abs(cur[0]), std::abs(cur[1]), 1e-300});
        diff = std::max(std::abs(cur[0] - prev[0]), std::abs(cur[1] - prev[1])) / scale;
        prev = cur;
        if (diff < tol || (cur[0] == cplx(0.0) && cur[1] == cplx(0.0))) {
            const GaussRule& rule = gauss_legendre(n);
            p.nodes = rule.nodes;
            p.weights = rule.weights;
            p.moment_first = cur[0];
            p.moment_second = cur[1];
            p.achieved = diff;
            return p;
        }
    }
    throw AccuracyError("shell particular solution: quadrature did not converge", diff);
}

// ------------------------------------------------------------------- system

ModeSystem assemble_mode_system(const Geometry& g, const MediaParams& media, const Drive& drive,
                                const ShellParticular* particular) {
    validate(drive, g);
    const DerivedParams d = derive_params(media);
    const double R = g.r_sigma, Rg = g.r_gamma;
    const cplx km = d.k_minus(), kp = d.k_plus();
    const int n = drive.order;

    const BesselSet in_R = radial_set(g, n, km * R);
    const BesselSet out_R = radial_set(g, n, kp * R);
    const BesselSet out_G = radial_set(g, n, kp * Rg);
    const ScaledValue n0 = in_R.first.value, n1 = out_G.first.value, n2 = out_R.third.value;

    // Basis values (f, f') at the two interfaces.
    const cplx z0 = 1.0, z0p = km * ratio(in_R.first.derivative, n0);
    const cplx z1R = ratio(out_R.first.value, n1), z1Rp = kp * ratio(out_R.first.derivative, n1);
    const cplx z2R = 1.0, z2Rp = kp * ratio(out_R.third.derivative, n2);
    const cplx z1G = 1.0, z1Gp = kp * ratio(out_G.first.derivative, n1);
    const cplx z2G = ratio(out_G.third.value, n2), z2Gp = kp * ratio(out_G.third.derivative, n2);

    const Functionals f0 = functionals(g, drive, d, Region::Interior, z0, z0p, R);
    const Functionals f1 = functionals(g, drive, d, Region::Exterior, z1R, z1Rp, R);
    const Functionals f2 = functionals(g, drive, d, Region::Exterior, z2R, z2Rp, R);
    const Functionals g1 = functionals(g, drive, d, Region::Exterior, z1G, z1Gp, Rg);
    const Functionals g2 = functionals(g, drive, d, Region::Exterior, z2G, z2Gp, Rg);

    ModeSystem sys;
    sys.A[0] = {f0.trace, -f1.trace, -f2.trace};
    sys.A[1] = {f0.flux, -f1.flux, -f2.flux};
    sys.A[2] = {0.0, g1.outer, g2.outer};
    sys.rhs = {0.0, 0.0, drive.kind == DriveKind::BoundaryTrace ? drive.amplitude : cplx(0.0)};
    if (drive.kind == DriveKind::ShellCurrent) {
        if (particular == nullptr) throw ParameterDomainError("shell drive needs its particular solution");
        const auto fp = particular_from_moments(g, drive, kp, Rg, {particular->moment_first, particular->moment_second});
        const Functionals gp = functionals(g, drive, d, Region::Exterior, fp[0], fp[1], Rg);
        sys.rhs[2] -= gp.outer;
    }
    for (int i = 0; i < 3; ++i) {
        double mx = 0.0;
        for (const cplx& a : sys.A[i]) mx = std::max(mx, std::abs(a));
        const double s = mx > 0.0 ? 1.0 / mx : 1.0;
        for (cplx& a : sys.A[i]) a *= s;
        sys.rhs[i] *= s;
        sys.row_scale[i] = s;
    }
    return sys;
}

ModalSolution solve_exact(const Geometry& g, const MediaParams& media, const Drive& drive) {
    validate(drive, g);
    ModalSolution s;
    s.geometry = g;
    s.media = media;
    s.derived = derive_params(media);
    s.drive = drive;
    if (drive.kind == DriveKind::ShellCurrent) s.particular = shell_source_particular(g, s.derived, drive);
    const ModeSystem sys = assemble_mode_system(g, media, drive, &s.particular);

    Eigen::Matrix3cd A;
    Eigen::Vector3cd b;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) A(i, j) = sys.A[i][j];
        b(i) = sys.rhs[i];
    }
    const Eigen::JacobiSVD<Eigen::Matrix3cd> svd(A);
    const auto sv = svd.singularValues();
    s.condition = sv(2) > 0.0 ? sv(0) / sv(2) : std::numeric_limits<double>::infinity();
    if (!(s.condition <= 1e12))
        throw ConditioningError("mode system is ill-conditioned (mode " + std::to_string(drive.order) + ")",
                                drive.order, s.condition);
    const Eigen::Vector3cd c = A.fullPivLu().solve(b);
    for (int i = 0; i < 3; ++i) s.coeff[i] = c(i);

    const int n = drive.order;
    s.basis_norm = {radial_set(g, n, s.derived.k_minus() * g.r_sigma).first.value,
                    radial_set(g, n, s.derived.k_plus() * g.r_gamma).first.value,
                    radial_set(g, n, s.derived.k_plus() * g.r_sigma).third.value};
    for (int i = 0; i < 3; ++i) s.basis_log_scale[i] = s.basis_norm[i].log_abs();
    return s;
}

// ------------------------------------------------------------------ fields

std::array<cplx, 2> ModalSolution::potential(double r, Region region) const {
    const int n = drive.order;
    if (region == Region::Interior) {
        const cplx k = derived.k_minus();
        const BesselSet b = radial_set(geometry, n, k * r);
        return {coeff[0] * ratio(b.first.value, basis_norm[0]), coeff[0] * k * ratio(b.first.derivative, basis_norm[0])};
    }
    const cplx k = derived.k_plus();
    const BesselSet b = radial_set(geometry, n, k * r);
    cplx f = coeff[1] * ratio(b.first.value, basis_norm[1]) + coeff[2] * ratio(b.third.value, basis_norm[2]);
    cplx fp = k * (coeff[1] * ratio(b.first.derivative, basis_norm[1]) + coeff[2] * ratio(b.third.derivative, basis_norm[2]));
    if (drive.kind == DriveKind::ShellCurrent && r > drive.shell_a) {
        std::array<cplx, 2> m{particular.moment_first, particular.moment_second};
        if (r < drive.shell_b) m = moments(geometry, drive, k, drive.shell_a, r, particular_order(particular));
        const auto p = particular_from_moments(geometry, drive, k, r, m);
        f += p[0];
        fp += p[1];
    }
    return {f, fp};
}

ModalFields ModalSolution::fields(double r, Region region) const {
    const auto [f, fp] = potential(r, region);
    const cplx k = wavenumber(region);
    const bool cyl = is_cylinder(geometry);
    const double m = drive.order;
    const double nn1 = m * (m + 1.0);
    ModalFields out;
    ModalVector tm_h, te_h;
    if (cyl) {
        tm_h = {0.0, 0.0, f};
        te_h = {kI * m / r * f, -fp, 0.0};
    } else {
        tm_h = {0.0, 0.0, f};
        te_h = {nn1 * f / r, f / r + fp, 0.0};
    }
    if (drive.pol == Polarization::TM) {
        out.H = tm_h;
        out.curlH = te_h;  // curl of the TM potential field has the TE shape
    } else {
        out.H = te_h;
        out.curlH = {0.0, 0.0, k * k * f};
    }
    if (region == Region::Exterior) out.j = {0.0, shell_profile(drive, r), 0.0};
    return out;
}

std::array<cplx, 3> modal_to_cartesian(const Geometry& g, const Drive& drive, const ModalVector& v, const Point3& x) {
    if (is_cylinder(g)) {
        const double th = std::atan2(x[1], x[0]);
        const double c = std::cos(th), s = std::sin(th);
        const cplx e = std::polar(1.0, drive.order * th);
        return {e * (v[0] * c - v[1] * s), e * (v[0] * s + v[1] * c), e * v[2]};
    }
    const double r = std::hypot(x[0], x[1], x[2]);
    const double th = std::acos(std::clamp(x[2] / r, -1.0, 1.0));
    const double ph = std::atan2(x[1], x[0]);
    const HarmonicValue h = spherical_harmonic(drive.order, drive.azimuthal, th, ph);
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    const std::array<double, 3> rh{st * cp, st * sp, ct}, th_h{ct * cp, ct * sp, -st}, ph_h{-sp, cp, 0.0};
    const cplx a = v[0] * h.y;
    const cplx ct_th = v[1] * h.d_theta + v[2] * h.d_phi_sin;
    const cplx ct_ph = v[1] * h.d_phi_sin - v[2] * h.d_theta;
    std::array<cplx, 3> out{};
    for (int i = 0; i < 3; ++i) out[i] = a * rh[i] + ct_th * th_h[i] + ct_ph * ph_h[i];
    return out;
}

FieldSample eval_point(const ModalSolution& s, const Point3& x, Region side) {
    const Geometry& g = s.geometry;
    const double r = is_cylinder(g) ? std::hypot(x[0], x[1]) : std::hypot(x[0], x[1], x[2]);
    if (r < kChartFloor * g.r_sigma || r > g.r_gamma * (1.0 + 1e-12))
        throw ChartDomainError("evaluation point outside closure(Omega) minus the core");
    const ModalFields mf = s.fields(r, side);
    FieldSample out;
    out.H = modal_to_cartesian(g, s.drive, mf.H, x);
    out.curlH = modal_to_cartesian(g, s.drive, mf.curlH, x);
    out.j = modal_to_cartesian(g, s.drive, mf.j, x);
    const cplx af = ampere_factor(s.media, side == Region::Interior);
    for (int i = 0; i < 3; ++i) out.E[i] = (out.j[i] - out.curlH[i]) / af;
    return out;
}

FieldSample eval_point(const ModalSolution& s, const Point3& x) {
    const Geometry& g = s.geometry;
    const double r = is_cylinder(g) ? std::hypot(x[0], x[1]) : std::hypot(x[0], x[1], x[2]);
    return eval_point(s, x, r <= g.r_sigma ? Region::Interior : Region::Exterior);
}

std::vector<FieldSample> eval_field(const ModalSolution& s, const std::vector<Point3>& points) {
    std::vector<FieldSample> out;
    out.reserve(points.size());
    for (const Point3& x : points) out.push_back(eval_point(s, x));
    return out;
}

std::vector<std::array<cplx, 3>> recover_E(const ModalSolution& s, const std::vector<Point3>& points) {
    std::vector<std::array<cplx, 3>> out;
    out.reserve(points.size());
    for (const Point3& x : points) out.push_back(eval_point(s, x).E);
    return out;
}

ModalVector modal_curl(const Geometry& g, int order, double r, const ModalVector& v, const ModalVector& dv) {
    const double m = order;
    if (is_cylinder(g)) return {kI * m / r * v[2], -dv[2], v[1] / r + dv[1] - kI * m / r * v[0]};
    return {m * (m + 1.0) * v[2] / r, v[2] / r + dv[2], v[0] / r - v[1] / r - dv[1]};
}

TangentialModal tangential_part(const ModalVector& v) { return {v[1], v[2]}; }

TangentialModal cross_normal(const Geometry& g, const ModalVector& w) {
    // w x (-r_hat). Cylinder frame (theta, z); sphere frame (grad_s Y, grad_s Y x r_hat).
    if (is_cylinder(g)) return {-w[2], w[1]};
    return {w[2], -w[1]};
}

InterfaceResiduals interface_residuals(const ModalSolution& s) {
    const double R = s.geometry.r_sigma;
    const ModalFields in = s.fields(R, Region::Interior);
    const ModalFields out = s.fields(R, Region::Exterior);
    const cplx am = s.derived.alpha_minus, ap = s.derived.alpha_plus;
    auto rel = [](cplx a0, cplx a1, cplx b0, cplx b1) {
        const double num = std::hypot(std::abs(a0 - b0), std::abs(a1 - b1));
        const double den = std::max(std::hypot(std::abs(a0), std::abs(a1)), std::hypot(std::abs(b0), std::abs(b1)));
        return den > 0.0 ? num / den : 0.0;
    };
    InterfaceResiduals res;
    res.trace = rel(in.H[1], in.H[2], out.H[1], out.H[2]);
    res.flux = rel(in.curlH[1] / am, in.curlH[2] / am, out.curlH[1] / ap, out.curlH[2] / ap);
    const double e2 = s.derived.eps * s.derived.eps;
    res.normal = rel(in.H[0], 0.0, e2 * out.H[0], 0.0);
    return res;
}

}  // namespace muskin
