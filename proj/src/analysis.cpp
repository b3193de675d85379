#include "muskin/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numbers>
#include <atomic>
#include <thread>

#include "muskin/errors.hpp"
#include "muskin/quadrature.hpp"

namespace muskin {

namespace {

bool is_cylinder(const Geometry& g) { return g.kind == GeometryKind::ConcentricCylinders; }

/// Hermitian Gram matrix of the angular factors: int |modal_to_cartesian(v)|^2 dS = v^H G v.
Eigen::Matrix3cd angular_gram(const Geometry& g, const Drive& drive, int nodes) {
    Eigen::Matrix3cd G = Eigen::Matrix3cd::Zero();
    auto accumulate = [&](const Point3& x, double w) {
        Eigen::Matrix3cd M;
        for (int i = 0; i < 3; ++i) {
            ModalVector e{0.0, 0.0, 0.0};
            e[i] = 1.0;
            const auto c = modal_to_cartesian(g, drive, e, x);
            for (int k = 0; k < 3; ++k) M(k, i) = c[k];
        }
        G += w * M.adjoint() * M;
    };
    const double dphi = 2.0 * std::numbers::pi / nodes;
    if (is_cylinder(g)) {
        for (int k = 0; k < nodes; ++k) accumulate({std::cos(k * dphi), std::sin(k * dphi), 0.0}, dphi);
        return G;
    }
    const GaussRule& q = gauss_legendre(std::max(16, nodes / 2));
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double ct = q.nodes[i], st = std::sqrt(1.0 - ct * ct);
        for (int k = 0; k < nodes; ++k)
            accumulate({st * std::cos(k * dphi), st * std::sin(k * dphi), ct}, q.weights[i] * dphi);
    }
    return G;
}

/// Radial breakpoints of the region, ascending.
std::vector<double> radial_breaks(const Geometry& g, const Drive& drive, Region region, const NormOptions& opt,
                                  const Cutoff* knots) {
    const double R = g.r_sigma;
    std::vector<double> b;
    if (region == Region::Exterior) {
        b = {R, g.r_gamma};
        if (drive.kind == DriveKind::ShellCurrent) {
            b.push_back(drive.shell_a);
            b.push_back(drive.shell_b);
        }
        for (int i = 1; i < 4; ++i) b.push_back(R + (g.r_gamma - R) * i / 4.0);
    } else {
        b = {0.0, 0.5 * R, R};
        if (knots != nullptr) {
            b.push_back(R - knots->d0);
            b.push_back(R - knots->d1);
        }
        if (opt.layer_scale > 0.0) {
            // Geometric grading towards Sigma, finest panel a quarter of the layer length.
            for (double y = 0.25 * opt.layer_scale; y < 0.5 * R; y *= 2.0) b.push_back(R - y);
        }
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(), [](double x, double y) { return std::abs(x - y) < 1e-14; }), b.end());
    return b;
}

RegionNorms integrate(const Geometry& g, const RadialField& f, Region region, const std::vector<double>& breaks,
                      int order, const Eigen::Matrix3cd& G) {
    const GaussRule& q = gauss_legendre(order);
    const int w = is_cylinder(g) ? 1 : 2;
    double l2 = 0.0, curl = 0.0;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p], b = breaks[p + 1];
        for (std::size_t k = 0; k < q.nodes.size(); ++k) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * q.nodes[k];
            const double jac = 0.5 * (b - a) * q.weights[k] * std::pow(r, w);
            const ModalFields mf = f(r, region);
            const Eigen::Vector3cd h(mf.H[0], mf.H[1], mf.H[2]), c(mf.curlH[0], mf.curlH[1], mf.curlH[2]);
            l2 += jac * (h.adjoint() * G * h)(0, 0).real();
            curl += jac * (c.adjoint() * G * c)(0, 0).real();
        }
    }
    return {std::sqrt(std::max(l2, 0.0)), std::sqrt(std::max(curl, 0.0)), 0.0};
}

double rel_change(double a, double b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m > 0.0 ? std::abs(a - b) / m : 0.0;
}

}  // namespace

RegionNorms region_norms(const Geometry& g, const Drive& drive, const RadialField& f, Region region,
                         const NormOptions& opt, const Cutoff* knots) {
    if (opt.radial_order < 2 || opt.radial_order > 2048) throw ParameterDomainError("radial order out of range");
    const int ang = opt.angular_nodes > 0 ? opt.angular_nodes : std::max(16, 8 * (std::abs(drive.order) + 1));
    const std::vector<double> breaks = radial_breaks(g, drive, region, opt, knots);
    RegionNorms base = integrate(g, f, region, breaks, opt.radial_order, angular_gram(g, drive, ang));
    if (!opt.check_refinement) return base;
    RegionNorms fine = integrate(g, f, region, breaks, 2 * opt.radial_order, angular_gram(g, drive, 2 * ang));
    fine.refinement_change = std::max(rel_change(base.l2, fine.l2), rel_change(base.curl, fine.curl));
    if (fine.refinement_change > opt.refine_tol)
        throw AccuracyError("region quadrature did not converge under refinement", fine.refinement_change);
    return fine;
}

double region_norm(const Geometry& g, const Drive& drive, const RadialField& f, Region region, NormKind kind,
                   const NormOptions& opt, const Cutoff* knots) {
    const RegionNorms n = region_norms(g, drive, f, region, opt, knots);
    return kind == NormKind::L2 ? n.l2 : n.curl;
}

double surface_norm(const Geometry& g, const std::vector<SurfaceMode>& field, double s) {
    double acc = 0.0;
    for (const SurfaceMode& m : field) {
        const double n = m.order;
        const double w = is_cylinder(g) ? n * n : n * (n + 1.0);
        acc += std::pow(1.0 + w, s) * std::norm(m.coeff);
    }
    const double scale = is_cylinder(g) ? 2.0 * std::numbers::pi * g.r_sigma : g.r_sigma * g.r_sigma;
    return std::sqrt(acc * scale);
}

double RemainderRecord::combined_from_parts() const {
    return rplus_l2 + curl_rplus_l2 + rminus_l2 / std::sqrt(eps) + std::sqrt(eps) * curl_rminus_l2;
}

RemainderRecord remainder(const ModalSolution& exact, const RadialField& approx, int m, double eps,
                          const Cutoff* knots, const NormOptions& opt) {
    if (!(eps > 0.0)) throw ParameterDomainError("eps must be positive");
    const Geometry& g = exact.geometry;
    const RadialField diff = [&](double r, Region side) {
        const ModalFields a = exact.fields(r, side), b = approx(r, side);
        ModalFields d;
        for (int i = 0; i < 3; ++i) {
            d.H[i] = a.H[i] - b.H[i];
            d.curlH[i] = a.curlH[i] - b.curlH[i];
        }
        return d;
    };
    NormOptions o = opt;
    if (o.layer_scale == 0.0) o.layer_scale = eps / exact.derived.lambda.real();
    const RegionNorms plus = region_norms(g, exact.drive, diff, Region::Exterior, o);
    const RegionNorms minus = region_norms(g, exact.drive, diff, Region::Interior, o, knots);
    RemainderRecord rec;
    rec.m = m;
    rec.eps = eps;
    rec.rplus_l2 = plus.l2;
    rec.curl_rplus_l2 = plus.curl;
    rec.rminus_l2 = minus.l2;
    rec.curl_rminus_l2 = minus.curl;
    rec.combined = rec.combined_from_parts();
    rec.refinement_change = std::max(plus.refinement_change, minus.refinement_change);
    return rec;
}

RemainderRecord remainder(const ModalSolution& exact, const CompositeApprox& approx, const NormOptions& opt) {
    const RadialField f = [&](double r, Region side) { return approx.fields(r, side); };
    return remainder(exact, f, approx.order(), approx.eps(), &approx.cutoff(), opt);
}

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values) {
    const std::size_t n = eps.size();
    if (n < 3 || values.size() != n) throw ParameterDomainError("rate fit needs at least three matching points");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(eps[i] > 0.0)) throw DomainError("eps values must be positive");
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) throw DomainError("rate fit needs positive values");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw ParameterDomainError("eps values must be strictly decreasing");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(eps[i]);
        my += std::log(values[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(eps[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(values[i]) - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double res = std::log(values[i]) - (fit.intercept + fit.slope * std::log(eps[i]));
        fit.max_residual = std::max(fit.max_residual, std::abs(res));
        ss += res * res;
    }
    fit.slope_stderr = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
    const boost::math::students_t dist(static_cast<double>(n - 2));
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.ci_low = fit.slope - t * fit.slope_stderr;
    fit.ci_high = fit.slope + t * fit.slope_stderr;
    return fit;
}

bool ConvergenceReport::pass() const {
    return !orders.empty() && std::all_of(orders.begin(), orders.end(), [](const OrderResult& o) { return o.pass; });
}

ConvergenceReport run_rates(const RatesRequest& req) {
    if (req.eps.size() < 3) throw ParameterDomainError("rates need at least three eps values");
    std::vector<double> eps = req.eps;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    if (std::adjacent_find(eps.begin(), eps.end()) != eps.end()) throw ParameterDomainError("duplicate eps values");
    for (double e : eps)
        if (!(e > 0.0 && e <= 1.0)) throw ParameterDomainError("eps must lie in (0, 1]");
    const Cutoff cut = req.cutoff.d1 > 0.0 ? req.cutoff : default_cutoff(req.geometry);

    ConvergenceReport rep;
    rep.geometry = req.geometry;
    rep.media = req.media;
    rep.drive = req.drive;
    rep.cutoff = cut;
    rep.slope_tolerance = req.slope_tolerance;
    for (int m : req.orders) {
        OrderResult o;
        o.m = m;
        o.expected_slope = m + 1.0;
        o.records.resize(eps.size());
        rep.orders.push_back(o);
    }

    // One exact solve and one expansion per eps; the orders share them.
    auto work = [&](std::size_t i) {
        MediaParams p = req.media;
        p.mu_r = 1.0 / (eps[i] * eps[i]);
        const ModalSolution exact = solve_exact(req.geometry, p, req.drive);
        const Expansion e = build_expansion(req.geometry, p, req.drive);
        for (auto& o : rep.orders) {
            const CompositeApprox c(e, o.m, eps[i], cut);
            o.records[i] = remainder(exact, c, req.norms);
        }
    };
    const int threads = std::max(1, std::min<int>(req.threads, static_cast<int>(eps.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < eps.size(); ++i) work(i);
    } else {
        std::vector<std::exception_ptr> errors(eps.size());
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < eps.size();) {
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

    // Fit on the finest four points.
    const std::size_t n_fit = std::min<std::size_t>(4, eps.size());
    for (auto& o : rep.orders) {
        std::vector<double> x, y;
        for (std::size_t i = eps.size() - n_fit; i < eps.size(); ++i) {
            x.push_back(o.records[i].eps);
            y.push_back(o.records[i].combined);
        }
        o.fit = fit_rate(x, y);
        o.pass = std::abs(o.fit.slope - o.expected_slope) <= req.slope_tolerance;
    }
    return rep;
}

}  // namespace muskin
