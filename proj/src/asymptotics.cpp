#include "muskin/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "muskin/errors.hpp"

namespace muskin {

namespace {

bool is_cylinder(const Geometry& g) { return g.kind == GeometryKind::ConcentricCylinders; }

BesselSet radial_set(const Geometry& g, int order, cplx z) {
    return is_cylinder(g) ? cyl_bessel_set(order, z) : sph_bessel_set(order, z);
}

/// The single tangential coordinate a mode of this polarisation carries.
int trace_slot(const Drive& drive) { return drive.pol == Polarization::TM ? 2 : 1; }

cplx pick(const TangentialModal& t, const Drive& drive) { return trace_slot(drive) == 2 ? t.t2 : t.t1; }

TangentialModal scale(const TangentialModal& a, cplx s) { return {a.t1 * s, a.t2 * s}; }
TangentialModal add(const TangentialModal& a, const TangentialModal& b) { return {a.t1 + b.t1, a.t2 + b.t2}; }

TangentialModal apply_c_minus_h(const CurvatureData& c, const TangentialModal& j) {
    const auto v = curvature_minus_mean(c, {j.t1, j.t2});
    return {v[0], v[1]};
}

}  // namespace

cplx ExpPoly::eval(cplx lambda, double Y) const {
    const cplx p = c[0] + Y * (c[1] + Y * c[2]);
    if (p == cplx(0.0)) return {0.0, 0.0};
    return p * std::exp(-lambda * Y);
}

ExpPoly ExpPoly::derivative(cplx lambda) const {
    ExpPoly d;
    d.c[0] = c[1] - lambda * c[0];
    d.c[1] = 2.0 * c[2] - lambda * c[1];
    d.c[2] = -lambda * c[2];
    return d;
}

cplx trace_coordinate(const Geometry&, const Drive& drive, const ModalVector& H) { return H[trace_slot(drive)]; }

// ------------------------------------------------------------------ terms

ExpansionTerm solve_term(int j, const Geometry& g, const MediaParams& media, const Drive& drive,
                         const std::vector<ExpansionTerm>& prior) {
    if (j < 0 || j > 2) throw DomainError("expansion order must be 0, 1 or 2");
    if (static_cast<int>(prior.size()) < j) throw ParameterDomainError("solve_term needs all lower-order terms");
    validate(drive, g);
    const DerivedParams d = derive_params(media);

    ExpansionTerm t;
    t.order = j;
    ModalSolution& s = t.solution;
    s.geometry = g;
    s.media = media;
    s.derived = d;
    s.drive = drive;
    if (j > 0) s.drive.kind = DriveKind::BoundaryTrace;  // sources enter only through H+_0
    if (s.drive.kind == DriveKind::ShellCurrent) s.particular = shell_source_particular(g, d, drive);
    const int n = drive.order;
    s.basis_norm = {ScaledValue(1.0), radial_set(g, n, d.k_plus() * g.r_gamma).first.value,
                    radial_set(g, n, d.k_plus() * g.r_sigma).third.value};
    for (int i = 0; i < 3; ++i) s.basis_log_scale[i] = s.basis_norm[i].log_abs();

    // Prescribed traces.
    if (j == 0) {
        t.sigma_trace = 0.0;
        t.gamma_trace = drive.kind == DriveKind::BoundaryTrace ? drive.amplitude : cplx(0.0);
    } else {
        const TangentialModal j0 = trace_jk(prior[0], d);
        if (j == 1) {
            t.sigma_trace = -pick(j0, drive);
        } else {
            const TangentialModal j1 = trace_jk(prior[1], d);
            const TangentialModal corr = scale(apply_c_minus_h(curvature(g), j0), 1.0 / d.lambda);
            t.sigma_trace = pick(add(scale(j1, -1.0), corr), drive);
        }
        t.gamma_trace = 0.0;
    }

    // Trace functional of each basis function (and of the particular part) at both radii.
    auto trace_at = [&](const std::array<cplx, 3>& coeff, double r) {
        ModalSolution probe = s;
        probe.coeff = coeff;
        return trace_coordinate(g, s.drive, probe.fields(r, Region::Exterior).H);
    };
    const double R = g.r_sigma, Rg = g.r_gamma;
    Eigen::Matrix2cd A;
    Eigen::Vector2cd b;
    // Every probe carries the particular part, so subtract it from the basis columns.
    const cplx pR = trace_at({0.0, 0.0, 0.0}, R), pG = trace_at({0.0, 0.0, 0.0}, Rg);
    A << trace_at({0.0, 1.0, 0.0}, R) - pR, trace_at({0.0, 0.0, 1.0}, R) - pR, trace_at({0.0, 1.0, 0.0}, Rg) - pG,
        trace_at({0.0, 0.0, 1.0}, Rg) - pG;
    b << t.sigma_trace - pR, t.gamma_trace - pG;
    for (int i = 0; i < 2; ++i) {
        const double mx = std::max(std::abs(A(i, 0)), std::abs(A(i, 1)));
        if (mx > 0.0) {
            A.row(i) /= mx;
            b(i) /= mx;
        }
    }
    const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(A);
    const auto sv = svd.singularValues();
    s.condition = sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
    if (!(s.condition <= 1e12))
        throw ConditioningError("expansion term system is ill-conditioned (mode " + std::to_string(n) + ")", n,
                                s.condition);
    const Eigen::Vector2cd c = A.fullPivLu().solve(b);
    s.coeff = {0.0, c(0), c(1)};
    return t;
}

TangentialModal trace_jk(const ExpansionTerm& term, const DerivedParams& d) {
    const ModalSolution& s = term.solution;
    const ModalFields f = s.fields(s.geometry.r_sigma, Region::Exterior);
    const cplx factor = d.alpha_minus / (d.alpha_plus * d.lambda);
    return scale(cross_normal(s.geometry, f.curlH), factor);
}

ProfileData make_profile_data(const Geometry& g, const DerivedParams& d, const Drive& drive,
                              const std::vector<ExpansionTerm>& terms) {
    if (terms.size() < 2) throw ParameterDomainError("profile data needs H+_0 and H+_1");
    ProfileData pd;
    pd.j0 = trace_jk(terms[0], d);
    pd.j1 = trace_jk(terms[1], d);
    pd.lambda = d.lambda;
    pd.curvature = curvature(g);
    pd.div_j0 = surface_divergence(g, drive.order, pd.j0);
    return pd;
}

std::array<Profile, 3> build_profiles(const Geometry&, const ProfileData& pd, int) {
    std::array<Profile, 3> p;
    for (int j = 0; j < 3; ++j) p[j].order = j;
    p[1].t1.c[0] = -pd.j0.t1;
    p[1].t2.c[0] = -pd.j0.t2;
    const TangentialModal c = apply_c_minus_h(pd.curvature, pd.j0);
    p[2].t1.c = {-pd.j1.t1 + c.t1 / pd.lambda, c.t1, 0.0};
    p[2].t2.c = {-pd.j1.t2 + c.t2 / pd.lambda, c.t2, 0.0};
    p[2].v.c[0] = -pd.div_j0 / pd.lambda;
    return p;
}

ProfileSample profile_eval(const Profile& p, cplx lambda, double Y3) {
    if (Y3 < 0.0) throw ChartDomainError("profiles are defined for Y3 >= 0");
    return {{p.t1.eval(lambda, Y3), p.t2.eval(lambda, Y3)}, p.v.eval(lambda, Y3)};
}

// ------------------------------------------------------------ recurrence check

double RecurrenceResiduals::max() const {
    double m = extra;
    for (int i = 0; i < 3; ++i) m = std::max({m, tangential[i], trace[i], normal[i]});
    return m;
}

namespace {

/// Profile values and Y-derivatives up to second order at one depth.
struct ProfileJet {
    TangentialModal t, dt, ddt;
    cplx v, dv;
};

ProfileJet jet(const Profile& p, cplx lambda, double Y) {
    const ExpPoly d1 = p.t1.derivative(lambda), d2 = p.t2.derivative(lambda);
    ProfileJet j;
    j.t = {p.t1.eval(lambda, Y), p.t2.eval(lambda, Y)};
    j.dt = {d1.eval(lambda, Y), d2.eval(lambda, Y)};
    j.ddt = {d1.derivative(lambda).eval(lambda, Y), d2.derivative(lambda).eval(lambda, Y)};
    j.v = p.v.eval(lambda, Y);
    j.dv = p.v.derivative(lambda).eval(lambda, Y);
    return j;
}

/// Surface gradient of a scalar mode amplitude on Sigma.
TangentialModal surface_gradient(const Geometry& g, int mode, cplx v) {
    if (is_cylinder(g)) return {cplx(0.0, mode / g.r_sigma) * v, 0.0};
    return {v / g.r_sigma, 0.0};
}

/// Sample points on Sigma used to turn modal residuals into pointwise ones.
std::vector<Point3> sigma_points(const Geometry& g, int n) {
    std::vector<Point3> pts;
    const double R = g.r_sigma;
    for (int i = 0; i < n; ++i) {
        if (is_cylinder(g)) {
            const double th = 2.0 * std::numbers::pi * i / n;
            pts.push_back({R * std::cos(th), R * std::sin(th), 0.0});
        } else {
            const double th = std::numbers::pi * (i + 0.5) / n;
            const double ph = 2.0 * std::numbers::pi * std::fmod(i * 0.6180339887498949, 1.0);
            pts.push_back({R * std::sin(th) * std::cos(ph), R * std::sin(th) * std::sin(ph), R * std::cos(th)});
        }
    }
    return pts;
}

/// Pointwise magnitude maximum of a modal field over the sample points.
double grid_max(const Geometry& g, const Drive& drive, const ModalVector& v, const std::vector<Point3>& pts) {
    double m = 0.0;
    for (const Point3& x : pts) {
        const auto c = modal_to_cartesian(g, drive, v, x);
        m = std::max(m, std::sqrt(std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2])));
    }
    return m;
}

ModalVector tangential_vec(const TangentialModal& t) { return {0.0, t.t1, t.t2}; }
ModalVector normal_vec(cplx v) { return {v, 0.0, 0.0}; }

/// Tracks max |residual| and max |terms| for one equation, relative result.
struct RelAcc {
    double res = 0.0, ref = 0.0;
    void add(double r, double a, double b) {
        res = std::max(res, r);
        ref = std::max({ref, a, b});
    }
    [[nodiscard]] double value() const { return ref > 0.0 ? res / ref : res; }
};

}  // namespace

RecurrenceResiduals profile_recurrence_residual(const std::array<Profile, 3>& profiles, const Geometry& g,
                                                const DerivedParams& d, const Drive& drive,
                                                const std::vector<ExpansionTerm>& terms, int n_tangential,
                                                int n_depth) {
    if (n_tangential < 1 || n_depth < 2) throw ParameterDomainError("recurrence grid must be non-empty");
    if (terms.size() < 3) throw ParameterDomainError("recurrence check needs H+_0, H+_1, H+_2");
    const int mode = drive.order;
    const cplx lam = d.lambda;
    const CurvatureData curv = curvature(g);
    const std::vector<Point3> pts = sigma_points(g, n_tangential);
    const double y_max = 10.0 / lam.real();
    const auto gmax = [&](const ModalVector& v) { return grid_max(g, drive, v, pts); };

    RecurrenceResiduals out;
    for (int n = 0; n < 3; ++n) {
        RelAcc tan, nor;
        for (int k = 0; k < n_depth; ++k) {
            const double Y = y_max * k / (n_depth - 1);
            const ProfileJet cur = jet(profiles[n], lam, Y);
            // Left sides.
            const TangentialModal lt = add(cur.ddt, scale(cur.t, -lam * lam));
            const cplx ln = -lam * lam * cur.v;
            // Right sides from V_{n-1}.
            TangentialModal rt{0.0, 0.0};
            cplx rn = 0.0;
            if (n > 0) {
                const ProfileJet prev = jet(profiles[n - 1], lam, Y);
                const auto bmh = apply_c_minus_h(curv, prev.dt);
                rt = add(scale(bmh, -2.0), surface_gradient(g, mode, prev.dv));
                rn = surface_divergence(g, mode, prev.dt) - 2.0 * curv.mean_H * prev.dv + 2.0 * curv.mean_H * prev.dv;
            }
            tan.add(gmax(tangential_vec(add(lt, scale(rt, -1.0)))), gmax(tangential_vec(cur.ddt)),
                    gmax(tangential_vec(rt)));
            nor.add(gmax(normal_vec(ln - rn)), gmax(normal_vec(ln)), gmax(normal_vec(rn)));
        }
        out.tangential[n] = tan.value();
        out.normal[n] = nor.value();

        // Trace condition at Y = 0.
        const ProfileJet at0 = jet(profiles[n], lam, 0.0);
        TangentialModal rhs{0.0, 0.0};
        if (n > 0) {
            const ProfileJet prev0 = jet(profiles[n - 1], lam, 0.0);
            const ModalFields f = terms[n - 1].solution.fields(g.r_sigma, Region::Exterior);
            rhs = add(surface_gradient(g, mode, prev0.v),
                      scale(cross_normal(g, f.curlH), d.alpha_minus / d.alpha_plus));
        }
        RelAcc tr;
        tr.add(gmax(tangential_vec(add(at0.dt, scale(rhs, -1.0)))), gmax(tangential_vec(at0.dt)),
               gmax(tangential_vec(rhs)));
        out.trace[n] = tr.value();
    }

    // v_2(0) against the normal component of H+_0 on Sigma (n = -r_hat).
    const ModalFields f0 = terms[0].solution.fields(g.r_sigma, Region::Exterior);
    const cplx hn = -f0.H[0];
    const cplx v2 = profiles[2].v.eval(lam, 0.0);
    RelAcc ex;
    ex.add(gmax(normal_vec(v2 - hn)), gmax(normal_vec(v2)), gmax(normal_vec(hn)));
    out.extra = ex.value();
    return out;
}

// ------------------------------------------------------------ expansion

Expansion build_expansion(const Geometry& g, const MediaParams& media, const Drive& drive) {
    validate(g);
    validate(media);
    validate(drive, g);
    Expansion e;
    e.geometry = g;
    e.media = media;
    e.derived = derive_params(media);
    e.drive = drive;
    for (int j = 0; j < 3; ++j) e.terms.push_back(solve_term(j, g, media, drive, e.terms));
    e.data = make_profile_data(g, e.derived, drive, e.terms);
    e.profiles = build_profiles(g, e.data, drive.order);
    return e;
}

double umbilic_profile_deviation(const Expansion& e, int n_depth) {
    if (e.geometry.kind != GeometryKind::ConcentricSpheres)
        throw DomainError("umbilic profile check applies to the sphere only");
    const cplx lam = e.derived.lambda;
    const TangentialModal& j1 = e.data.j1;
    const double scale = std::max(std::hypot(std::abs(j1.t1), std::abs(j1.t2)), 1e-300);
    const double y_max = 10.0 / lam.real();
    double worst = 0.0;
    for (int k = 0; k <= n_depth; ++k) {
        const double Y = y_max * k / n_depth;
        const ProfileSample s = profile_eval(e.profiles[2], lam, Y);
        const cplx decay = std::exp(-lam * Y);
        const double dev = std::hypot(std::abs(s.tangential.t1 + j1.t1 * decay), std::abs(s.tangential.t2 + j1.t2 * decay));
        worst = std::max(worst, dev / scale);
    }
    return worst;
}

CompositeApprox::CompositeApprox(const Expansion& e, int m, double eps, const Cutoff& cutoff)
    : e_(&e), m_(m), eps_(eps), cutoff_(cutoff) {
    if (m < 0 || m > 2) throw DomainError("composite order must be 0, 1 or 2");
    if (!(eps > 0.0)) throw ParameterDomainError("eps must be positive");
    validate(cutoff, e.geometry);
}

ModalFields CompositeApprox::fields(double r, Region region) const {
    const Expansion& e = *e_;
    const Geometry& g = e.geometry;
    ModalFields out{};
    if (region == Region::Exterior) {
        double w = 1.0;
        for (int j = 0; j <= m_; ++j, w *= eps_) {
            const ModalFields f = e.terms[j].solution.fields(r, Region::Exterior);
            for (int i = 0; i < 3; ++i) {
                out.H[i] += w * f.H[i];
                out.curlH[i] += w * f.curlH[i];
                if (j == 0) out.j[i] = f.j[i];
            }
        }
        return out;
    }

    const double R = g.r_sigma;
    const double y3 = R - r;
    const CutoffValue cv = cutoff_chi(cutoff_, y3);
    if (cv.chi == 0.0 && cv.d1chi == 0.0) return out;  // core: the layer has decayed
    const cplx lam = e.derived.lambda;
    const double Y = y3 / eps_;

    // Layer sums and their y3-derivatives.
    TangentialModal T{0.0, 0.0}, dT{0.0, 0.0};
    cplx V = 0.0, dV = 0.0;
    double w = 1.0;
    for (int j = 0; j <= m_; ++j, w *= eps_) {
        const ProfileJet pj = jet(e.profiles[j], lam, Y);
        T = add(T, scale(pj.t, w));
        dT = add(dT, scale(pj.dt, w / eps_));
        V += w * pj.v;
        dV += (w / eps_) * pj.dv;
    }

    // Covariant to physical: divide by 1 - y3*kappa_alpha.
    const double f1 = 1.0 / metric_factor(g, 0, y3), f2 = 1.0 / metric_factor(g, 1, y3);
    const double df1 = principal_curvature(g, 0) * f1 * f1, df2 = principal_curvature(g, 1) * f2 * f2;
    // d/dr = -d/dy3.
    const auto dr = [&](cplx u, cplx du, double fac, double dfac) {
        return -(cv.d1chi * u * fac + cv.chi * du * fac + cv.chi * u * dfac);
    };
    ModalVector v{-cv.chi * V, cv.chi * T.t1 * f1, cv.chi * T.t2 * f2};
    ModalVector dv{-dr(V, dV, 1.0, 0.0), dr(T.t1, dT.t1, f1, df1), dr(T.t2, dT.t2, f2, df2)};
    out.H = v;
    out.curlH = modal_curl(g, e.drive.order, r, v, dv);
    return out;
}

FieldSample CompositeApprox::eval_point(const Point3& x) const {
    const Geometry& g = e_->geometry;
    const bool cyl = is_cylinder(g);
    const double r = cyl ? std::hypot(x[0], x[1]) : std::hypot(x[0], x[1], x[2]);
    if (r < kChartFloor * g.r_sigma || r > g.r_gamma * (1.0 + 1e-12))
        throw ChartDomainError("evaluation point outside closure(Omega) minus the core");
    const Region side = r <= g.r_sigma ? Region::Interior : Region::Exterior;
    const ModalFields mf = fields(r, side);
    FieldSample out;
    out.H = modal_to_cartesian(g, e_->drive, mf.H, x);
    out.curlH = modal_to_cartesian(g, e_->drive, mf.curlH, x);
    out.j = modal_to_cartesian(g, e_->drive, mf.j, x);
    const cplx af = ampere_factor(e_->media, side == Region::Interior);
    for (int i = 0; i < 3; ++i) out.E[i] = (out.j[i] - out.curlH[i]) / af;
    return out;
}

}  // namespace muskin
