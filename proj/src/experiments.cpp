#include "muskin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "muskin/errors.hpp"

namespace muskin {

namespace {

double both(const RegionNorms& a, const RegionNorms& b, bool curl) {
    return curl ? std::hypot(a.curl, b.curl) : std::hypot(a.l2, b.l2);
}

}  // namespace

StabilityRow stability_row(const ModalSolution& s, const NormOptions& opt) {
    const Geometry& g = s.geometry;
    NormOptions o = opt;
    if (o.layer_scale == 0.0) o.layer_scale = s.derived.eps / s.derived.lambda.real();

    const RadialField h = [&](double r, Region side) { return s.fields(r, side); };
    // E and j ride in the H slot so region_norms returns their L2 norms.
    const RadialField e = [&](double r, Region side) {
        const ModalFields f = s.fields(r, side);
        const cplx af = ampere_factor(s.media, side == Region::Interior);
        ModalFields out;
        for (int i = 0; i < 3; ++i) out.H[i] = (f.j[i] - f.curlH[i]) / af;
        return out;
    };
    const RadialField j = [&](double r, Region side) {
        ModalFields out;
        out.H = s.fields(r, side).j;
        return out;
    };

    const RegionNorms hm = region_norms(g, s.drive, h, Region::Interior, o);
    const RegionNorms hp = region_norms(g, s.drive, h, Region::Exterior, o);
    const RegionNorms em = region_norms(g, s.drive, e, Region::Interior, o);
    const RegionNorms ep = region_norms(g, s.drive, e, Region::Exterior, o);
    const RegionNorms jp = region_norms(g, s.drive, j, Region::Exterior, o);

    StabilityRow row;
    row.mu_r = s.media.mu_r;
    row.norm_H = both(hm, hp, false);
    row.norm_E = both(em, ep, false);
    row.sqrt_mur_normHminus = std::sqrt(s.media.mu_r) * hm.l2;
    row.norm_j = jp.l2;
    row.norm_curlH = both(hm, hp, true);
    row.quotient = row.norm_j > 0.0 ? (row.norm_H + row.norm_E + row.sqrt_mur_normHminus) / row.norm_j : 0.0;
    row.refinement_change = std::max({hm.refinement_change, hp.refinement_change, em.refinement_change,
                                      ep.refinement_change, jp.refinement_change});
    return row;
}

StabilityReport stability_sweep(const Geometry& g, const MediaParams& media, const Drive& drive,
                                const std::vector<double>& mu_r, const NormOptions& opt, int threads) {
    if (mu_r.empty()) throw ParameterDomainError("stability sweep needs at least one mu_r");
    std::vector<double> sweep = mu_r;
    std::sort(sweep.begin(), sweep.end());
    StabilityReport rep;
    rep.rows.resize(sweep.size());
    auto work = [&](std::size_t i) {
        MediaParams p = media;
        p.mu_r = sweep[i];
        rep.rows[i] = stability_row(solve_exact(g, p, drive), opt);
    };
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(sweep.size())));
    if (nt == 1) {
        for (std::size_t i = 0; i < sweep.size(); ++i) work(i);
    } else {
        std::vector<std::exception_ptr> errors(sweep.size());
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < sweep.size(); i += nt) {
                    try {
                        work(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    double qmin = rep.rows[0].quotient, qmax = qmin;
    rep.interior_nonincreasing = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        qmin = std::min(qmin, rep.rows[i].quotient);
        qmax = std::max(qmax, rep.rows[i].quotient);
        if (i > 0 && rep.rows[i].sqrt_mur_normHminus > rep.rows[i - 1].sqrt_mur_normHminus)
            rep.interior_nonincreasing = false;
    }
    rep.quotient_variation = qmin > 0.0 ? qmax / qmin : std::numeric_limits<double>::infinity();
    rep.verdict = rep.quotient_variation < 2.0 && rep.interior_nonincreasing;
    return rep;
}

double div_mu_h_residual(const ModalSolution& s, const std::vector<Point3>& points) {
    const Geometry& g = s.geometry;
    const bool cyl = g.kind == GeometryKind::ConcentricCylinders;
    double worst = 0.0;
    for (const Point3& x : points) {
        const double r = cyl ? std::hypot(x[0], x[1]) : std::hypot(x[0], x[1], x[2]);
        const Region side = r <= g.r_sigma ? Region::Interior : Region::Exterior;
        // mu is constant on each side, so div(mu H) = mu div H; the ratio below is mu-free.
        const double k = std::abs(s.wavenumber(side));
        const double h = std::min(1e-3 * g.r_sigma, 0.05 / std::max(k, 1e-30));
        std::array<std::array<cplx, 3>, 3> d{};  // d[axis][component]
        for (int ax = 0; ax < 3; ++ax) {
            auto at = [&](double t) {
                Point3 y = x;
                y[ax] += t;
                return eval_point(s, y, side).H;
            };
            const auto m3 = at(-3 * h), m2 = at(-2 * h), m1 = at(-h), p1 = at(h), p2 = at(2 * h), p3 = at(3 * h);
            for (int c = 0; c < 3; ++c)
                d[ax][c] = (-m3[c] + 9.0 * m2[c] - 45.0 * m1[c] + 45.0 * p1[c] - 9.0 * p2[c] + p3[c]) / (60.0 * h);
        }
        double scale = 0.0;
        for (const auto& row : d)
            for (const cplx& v : row) scale = std::max(scale, std::abs(v));
        if (scale > 0.0) worst = std::max(worst, std::abs(d[0][0] + d[1][1] + d[2][2]) / scale);
    }
    return worst;
}

std::vector<Point3> div_sample_points(const Geometry& g, const Drive& drive) {
    const bool cyl = g.kind == GeometryKind::ConcentricCylinders;
    const double R = g.r_sigma;
    std::vector<double> radii{0.7 * R, 0.97 * R, R + 0.15 * (g.r_gamma - R), R + 0.85 * (g.r_gamma - R)};
    if (drive.kind == DriveKind::ShellCurrent) radii.push_back(0.5 * (drive.shell_a + drive.shell_b));
    std::vector<Point3> pts;
    for (double r : radii)
        for (double a : {0.3, 1.9, 3.7}) {
            if (cyl)
                pts.push_back({r * std::cos(a), r * std::sin(a), 0.1 * a});
            else {
                const double th = 0.4 + 0.6 * a / 3.7;
                pts.push_back({r * std::sin(th) * std::cos(a), r * std::sin(th) * std::sin(a), r * std::cos(th)});
            }
        }
    return pts;
}

ConstantsReport constants_check(const Geometry& g, const MediaParams& media, const Drive& drive,
                                const std::vector<double>& mu_r, const NormOptions& opt) {
    if (drive.kind != DriveKind::ShellCurrent)
        throw ParameterDomainError("the curl bound needs a current drive with zero trace on Gamma");
    ConstantsReport rep;
    rep.constants = stability_constants(media);
    // TM fields of this family are divergence-free by symmetry, so a TE companion makes the check non-trivial.
    Drive te;
    te.pol = Polarization::TE;
    te.order = std::max(drive.order, 1);
    te.azimuthal = drive.azimuthal;
    rep.verdict = !mu_r.empty();
    for (double mr : mu_r) {
        MediaParams p = media;
        p.mu_r = mr;
        const ModalSolution s = solve_exact(g, p, drive);
        const StabilityRow st = stability_row(s, opt);
        ConstantsRow row;
        row.mu_r = mr;
        row.norm_curlH = st.norm_curlH;
        row.norm_j = st.norm_j;
        row.curl_bound = rep.constants.C1 * st.norm_j;
        const ModalSolution s_te = solve_exact(g, p, te);
        row.div_residual = std::max(div_mu_h_residual(s, div_sample_points(g, drive)),
                                    div_mu_h_residual(s_te, div_sample_points(g, te)));
        row.pass = row.norm_curlH <= row.curl_bound && row.div_residual < 1e-8;
        rep.verdict = rep.verdict && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace muskin
