#include <string>

#include "muskin/analysis.hpp"
#include "muskin/errors.hpp"

namespace muskin {

using nlohmann::json;

namespace {

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }
cplx cplx_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json fit_json(const RateFit& f) {
    return {{"slope", f.slope},   {"intercept", f.intercept}, {"max_residual", f.max_residual},
            {"slope_stderr", f.slope_stderr}, {"ci_low", f.ci_low}, {"ci_high", f.ci_high}};
}

RateFit fit_from(const json& j) {
    RateFit f;
    f.slope = j.at("slope");
    f.intercept = j.at("intercept");
    f.max_residual = j.at("max_residual");
    f.slope_stderr = j.at("slope_stderr");
    f.ci_low = j.at("ci_low");
    f.ci_high = j.at("ci_high");
    return f;
}

json record_json(const RemainderRecord& r) {
    return {{"m", r.m},
            {"eps", r.eps},
            {"norm_Rplus_L2", r.rplus_l2},
            {"norm_curlRplus_L2", r.curl_rplus_l2},
            {"norm_Rminus_L2", r.rminus_l2},
            {"norm_curlRminus_L2", r.curl_rminus_l2},
            {"combined", r.combined},
            {"refinement_change", r.refinement_change}};
}

RemainderRecord record_from(const json& j) {
    RemainderRecord r;
    r.m = j.at("m");
    r.eps = j.at("eps");
    r.rplus_l2 = j.at("norm_Rplus_L2");
    r.curl_rplus_l2 = j.at("norm_curlRplus_L2");
    r.rminus_l2 = j.at("norm_Rminus_L2");
    r.curl_rminus_l2 = j.at("norm_curlRminus_L2");
    r.combined = j.at("combined");
    r.refinement_change = j.at("refinement_change");
    return r;
}

}  // namespace

json to_json(const Geometry& g) {
    const bool cyl = g.kind == GeometryKind::ConcentricCylinders;
    return {{"kind", cyl ? "cylinder" : "sphere"}, {"r_sigma", g.r_sigma}, {"r_gamma", g.r_gamma}};
}

Geometry geometry_from_json(const json& j) {
    Geometry g;
    const std::string kind = j.value("kind", std::string("cylinder"));
    if (kind == "cylinder")
        g.kind = GeometryKind::ConcentricCylinders;
    else if (kind == "sphere")
        g.kind = GeometryKind::ConcentricSpheres;
    else
        throw ConfigError("geometry.kind must be \"cylinder\" or \"sphere\"");
    g.r_sigma = j.value("r_sigma", g.r_sigma);
    g.r_gamma = j.value("r_gamma", g.r_gamma);
    return g;
}

json to_json(const MediaParams& p) {
    return {{"omega", p.omega}, {"eps0", p.eps0},  {"mu_plus", p.mu_plus}, {"mu_r", p.mu_r},
            {"sigma_plus", p.sigma_plus}, {"sigma_minus", p.sigma_minus}};
}

MediaParams media_from_json(const json& j) {
    MediaParams p;
    p.omega = j.value("omega", p.omega);
    p.eps0 = j.value("eps0", p.eps0);
    p.mu_plus = j.value("mu_plus", p.mu_plus);
    p.mu_r = j.value("mu_r", p.mu_r);
    p.sigma_plus = j.value("sigma_plus", p.sigma_plus);
    p.sigma_minus = j.value("sigma_minus", p.sigma_minus);
    return p;
}

json to_json(const Drive& d) {
    return {{"kind", d.kind == DriveKind::BoundaryTrace ? "boundary_trace" : "shell_current"},
            {"polarization", d.pol == Polarization::TM ? "TM" : "TE"},
            {"order", d.order},
            {"azimuthal", d.azimuthal},
            {"amplitude", cplx_json(d.amplitude)},
            {"shell_a", d.shell_a},
            {"shell_b", d.shell_b}};
}

Drive drive_from_json(const json& j) {
    Drive d;
    const std::string kind = j.value("kind", std::string("boundary_trace"));
    if (kind == "boundary_trace")
        d.kind = DriveKind::BoundaryTrace;
    else if (kind == "shell_current")
        d.kind = DriveKind::ShellCurrent;
    else
        throw ConfigError("drive.kind must be \"boundary_trace\" or \"shell_current\"");
    const std::string pol = j.value("polarization", std::string("TM"));
    if (pol != "TM" && pol != "TE") throw ConfigError("drive.polarization must be \"TM\" or \"TE\"");
    d.pol = pol == "TM" ? Polarization::TM : Polarization::TE;
    d.order = j.value("order", d.order);
    d.azimuthal = j.value("azimuthal", d.azimuthal);
    if (j.contains("amplitude")) {
        const json& a = j.at("amplitude");
        d.amplitude = a.is_array() ? cplx_from(a) : cplx(a.get<double>(), 0.0);
    }
    d.shell_a = j.value("shell_a", d.shell_a);
    d.shell_b = j.value("shell_b", d.shell_b);
    return d;
}

json to_json(const ConvergenceReport& r) {
    json orders = json::array();
    for (const OrderResult& o : r.orders) {
        json recs = json::array();
        for (const auto& rec : o.records) recs.push_back(record_json(rec));
        orders.push_back(
            {{"m", o.m}, {"expected_slope", o.expected_slope}, {"fit", fit_json(o.fit)}, {"pass", o.pass}, {"records", recs}});
    }
    return {{"geometry", to_json(r.geometry)},
            {"media", to_json(r.media)},
            {"drive", to_json(r.drive)},
            {"cutoff", {{"d0", r.cutoff.d0}, {"d1", r.cutoff.d1}, {"degree", r.cutoff.degree}}},
            {"slope_tolerance", r.slope_tolerance},
            {"orders", orders},
            {"pass", r.pass()}};
}

ConvergenceReport report_from_json(const json& j) {
    ConvergenceReport r;
    r.geometry = geometry_from_json(j.at("geometry"));
    r.media = media_from_json(j.at("media"));
    r.drive = drive_from_json(j.at("drive"));
    const json& c = j.at("cutoff");
    r.cutoff = {c.at("d0").get<double>(), c.at("d1").get<double>(), c.at("degree").get<int>()};
    r.slope_tolerance = j.at("slope_tolerance");
    for (const json& o : j.at("orders")) {
        OrderResult res;
        res.m = o.at("m");
        res.expected_slope = o.at("expected_slope");
        res.fit = fit_from(o.at("fit"));
        res.pass = o.at("pass");
        for (const json& rec : o.at("records")) res.records.push_back(record_from(rec));
        r.orders.push_back(res);
    }
    return r;
}

}  // namespace muskin
