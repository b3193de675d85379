#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "muskin/cli.hpp"
#include "muskin/errors.hpp"

namespace muskin {

using nlohmann::json;
namespace fs = std::filesystem;

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// Collects output files and the human summary of one run.
class Writer {
public:
    Writer(fs::path dir, bool verbose) : dir_(std::move(dir)), verbose_(verbose) { fs::create_directories(dir_); }

    void text(const std::string& name, const std::string& body) {
        const fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << body;
        result_.files.push_back(p);
    }

    void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

    void line(const std::string& s) {
        summary_ << s << "\n";
        if (verbose_) std::cerr << s << "\n";
    }

    RunResult finish(bool pass) {
        line(std::string("verdict: ") + (pass ? "PASS" : "FAIL"));
        result_.summary = summary_.str();
        text("summary.txt", result_.summary);
        result_.pass = pass;
        return result_;
    }

private:
    fs::path dir_;
    bool verbose_;
    std::ostringstream summary_;
    RunResult result_;
};

/// Comma-joined row of numbers.
std::string row(std::initializer_list<double> vals) {
    std::string s;
    for (double v : vals) {
        if (!s.empty()) s += ",";
        s += csv_number(v);
    }
    return s + "\n";
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

json setup_json(const ExperimentConfig& c) {
    return {{"geometry", to_json(c.geometry)}, {"media", to_json(c.media)}, {"drive", to_json(c.drive)}};
}

RunResult run_rates(const ExperimentConfig& c, Writer& w, int threads) {
    RatesRequest req;
    req.geometry = c.geometry;
    req.media = c.media;
    req.drive = c.drive;
    req.eps = c.eps;
    req.orders = c.orders;
    req.cutoff = c.cutoff;
    req.slope_tolerance = c.slope_tolerance;
    req.norms = c.norms;
    req.threads = threads;
    const ConvergenceReport rep = muskin::run_rates(req);

    std::string csv = "eps,m,norm_Rplus_L2,norm_curlRplus_L2,norm_Rminus_L2,norm_curlRminus_L2,combined\n";
    for (const OrderResult& o : rep.orders)
        for (const RemainderRecord& r : o.records)
            csv += csv_number(r.eps) + "," + std::to_string(r.m) + "," +
                   row({r.rplus_l2, r.curl_rplus_l2, r.rminus_l2, r.curl_rminus_l2, r.combined});
    w.text("rates.csv", csv);
    w.json_file("report.json", to_json(rep));
    for (const OrderResult& o : rep.orders)
        w.line("m=" + std::to_string(o.m) + " slope " + fmt("%.4f", o.fit.slope) + " expected " +
               fmt("%.1f", o.expected_slope) + " 95% CI [" + fmt("%.4f", o.fit.ci_low) + ", " +
               fmt("%.4f", o.fit.ci_high) + "] " + (o.pass ? "ok" : "off"));
    return w.finish(rep.pass());
}

RunResult run_profiles(const ExperimentConfig& c, Writer& w) {
    MediaParams media = c.media;
    media.mu_r = c.profiles.mu_r;
    const Expansion e = build_expansion(c.geometry, media, c.drive);
    const cplx lam = e.derived.lambda;
    const int nd = c.profiles.n_depth;
    const double y_max = 10.0 / lam.real();

    std::string csv = "Y";
    for (int n = 0; n < 3; ++n)
        for (const char* part : {"t1", "t2", "v"})
            csv += ",re_V" + std::to_string(n) + "_" + part + ",im_V" + std::to_string(n) + "_" + part;
    csv += "\n";
    for (int k = 0; k <= nd; ++k) {
        const double Y = y_max * k / nd;
        csv += csv_number(Y);
        for (int n = 0; n < 3; ++n) {
            const ProfileSample s = profile_eval(e.profiles[n], lam, Y);
            for (cplx z : {s.tangential.t1, s.tangential.t2, s.normal})
                csv += "," + csv_number(z.real()) + "," + csv_number(z.imag());
        }
        csv += "\n";
    }
    w.text("profiles.csv", csv);

    const RecurrenceResiduals res =
        profile_recurrence_residual(e.profiles, c.geometry, e.derived, c.drive, e.terms, c.profiles.n_tangential, nd);
    std::string rcsv = "n,tangential,trace,normal\n";
    for (int n = 0; n < 3; ++n)
        rcsv += std::to_string(n) + "," + row({res.tangential[n], res.trace[n], res.normal[n]});
    w.text("recurrence.csv", rcsv);

    constexpr double tol = 1e-10;
    bool pass = res.max() < tol;
    json rep = setup_json(c);
    rep["media"]["mu_r"] = media.mu_r;
    rep["lambda"] = cplx_json(lam);
    rep["recurrence_max"] = res.max();
    rep["extra_condition"] = res.extra;
    rep["tolerance"] = tol;
    w.line("recurrence residual max " + fmt("%.3e", res.max()) + " (tolerance 1e-10)");
    if (c.geometry.kind == GeometryKind::ConcentricSpheres) {
        const double dev = umbilic_profile_deviation(e, nd);
        rep["second_profile_deviation"] = dev;
        pass = pass && dev < 1e-12;
        w.line("sphere second profile deviation from -j1 exp(-lambda Y): " + fmt("%.3e", dev));
    }
    rep["pass"] = pass;
    w.json_file("report.json", rep);
    return w.finish(pass);
}

RunResult run_scalar(const ExperimentConfig& c, Writer& w) {
    const SweepReport rep = uniform_sweep(c.geometry, c.scalar.g, c.scalar.ratios, c.scalar.a_plus);
    std::string csv = "ratio_re,ratio_im,solved,condition,l2_minus,l2_plus,h1_minus,h1_plus,trace_spectral,h32_equiv,normalized\n";
    json rows = json::array();
    for (const SweepRow& r : rep.rows) {
        const ScalarNorms& n = r.norms;
        csv += csv_number(r.ratio.real()) + "," + csv_number(r.ratio.imag()) + "," + (r.solved ? "1," : "0,") +
               row({r.condition, n.l2_minus, n.l2_plus, n.h1_minus, n.h1_plus, n.trace_spectral, n.h32_equiv,
                    r.normalized});
        rows.push_back({{"ratio", cplx_json(r.ratio)}, {"solved", r.solved}, {"normalized", r.normalized}});
    }
    w.text("scalar_sweep.csv", csv);
    json rep_j = {{"geometry", to_json(c.geometry)}, {"a_plus", cplx_json(c.scalar.a_plus)}, {"rows", rows},
                  {"sup_normalized", rep.sup_normalized}, {"saturation_change", rep.saturation_change},
                  {"bounded", rep.bounded}, {"pass", rep.verdict}};
    rep_j["rho0_estimate"] = rep.rho0_estimate ? json(*rep.rho0_estimate) : json(nullptr);
    w.json_file("report.json", rep_j);
    w.line("sup of normalized trace-plus-H1 norm " + fmt("%.6e", rep.sup_normalized) + ", saturation change " +
           fmt("%.3e", rep.saturation_change));
    if (rep.rho0_estimate) w.line("rho0 estimate " + fmt("%.6g", *rep.rho0_estimate));
    return w.finish(rep.verdict);
}

RunResult run_stability(const ExperimentConfig& c, Writer& w, int threads) {
    const StabilityReport rep = stability_sweep(c.geometry, c.media, c.drive, c.mu_r, c.norms, threads);
    std::string csv = "mu_r,norm_H,norm_E,sqrt_mur_normHminus,norm_j,quotient\n";
    json rows = json::array();
    for (const StabilityRow& r : rep.rows) {
        csv += row({r.mu_r, r.norm_H, r.norm_E, r.sqrt_mur_normHminus, r.norm_j, r.quotient});
        rows.push_back({{"mu_r", r.mu_r},
                        {"norm_H", r.norm_H},
                        {"norm_E", r.norm_E},
                        {"sqrt_mur_normHminus", r.sqrt_mur_normHminus},
                        {"norm_j", r.norm_j},
                        {"quotient", r.quotient},
                        {"refinement_change", r.refinement_change}});
    }
    w.text("stability.csv", csv);
    json rep_j = setup_json(c);
    rep_j["rows"] = rows;
    rep_j["quotient_variation"] = rep.quotient_variation;
    rep_j["interior_nonincreasing"] = rep.interior_nonincreasing;
    rep_j["pass"] = rep.verdict;
    w.json_file("report.json", rep_j);
    w.line("quotient variation " + fmt("%.4f", rep.quotient_variation) + " (bound 2), sqrt(mu_r)||H-|| " +
           (rep.interior_nonincreasing ? "non-increasing" : "increasing"));
    return w.finish(rep.verdict);
}

RunResult run_constants(const ExperimentConfig& c, Writer& w) {
    const ConstantsReport rep = constants_check(c.geometry, c.media, c.drive, c.mu_r, c.norms);
    std::string csv = "mu_r,norm_curlH,norm_j,curl_bound,div_residual\n";
    json rows = json::array();
    for (const ConstantsRow& r : rep.rows) {
        csv += row({r.mu_r, r.norm_curlH, r.norm_j, r.curl_bound, r.div_residual});
        rows.push_back({{"mu_r", r.mu_r},
                        {"norm_curlH", r.norm_curlH},
                        {"norm_j", r.norm_j},
                        {"curl_bound", r.curl_bound},
                        {"div_residual", r.div_residual},
                        {"pass", r.pass}});
    }
    w.text("constants.csv", csv);
    json rep_j = setup_json(c);
    rep_j["constants"] = {{"m", rep.constants.m}, {"C1", rep.constants.C1}, {"C2", rep.constants.C2}};
    rep_j["rows"] = rows;
    rep_j["pass"] = rep.verdict;
    w.json_file("report.json", rep_j);
    w.line("m = " + csv_number(rep.constants.m) + ", C1 = " + csv_number(rep.constants.C1) +
           ", C2 = " + csv_number(rep.constants.C2));
    return w.finish(rep.verdict);
}

RunResult run_exact(const ExperimentConfig& c, Writer& w) {
    MediaParams media = c.media;
    media.mu_r = c.exact.mu_r;
    const ModalSolution s = solve_exact(c.geometry, media, c.drive);
    const std::vector<Point3> pts = c.exact.points.empty() ? div_sample_points(c.geometry, c.drive) : c.exact.points;
    const std::vector<FieldSample> f = eval_field(s, pts);

    std::string csv = "x,y,z";
    for (const char* q : {"H", "E"})
        for (const char* ax : {"x", "y", "z"}) csv += std::string(",re_") + q + ax + ",im_" + q + ax;
    csv += "\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        csv += csv_number(pts[i][0]) + "," + csv_number(pts[i][1]) + "," + csv_number(pts[i][2]);
        for (const auto* v : {&f[i].H, &f[i].E})
            for (cplx z : *v) csv += "," + csv_number(z.real()) + "," + csv_number(z.imag());
        csv += "\n";
    }
    w.text("exact.csv", csv);

    const InterfaceResiduals res = interface_residuals(s);
    constexpr double tol = 1e-10;
    const bool pass = res.trace < tol && res.flux < tol && res.normal < tol;
    json rep = setup_json(c);
    rep["media"]["mu_r"] = media.mu_r;
    rep["condition"] = s.condition;
    rep["coefficients"] = json::array({cplx_json(s.coeff[0]), cplx_json(s.coeff[1]), cplx_json(s.coeff[2])});
    rep["interface_residuals"] = {{"trace", res.trace}, {"flux", res.flux}, {"normal", res.normal}};
    rep["pass"] = pass;
    w.json_file("report.json", rep);
    w.line("interface residuals: trace " + fmt("%.3e", res.trace) + ", flux " + fmt("%.3e", res.flux) +
           ", normal " + fmt("%.3e", res.normal));
    return w.finish(pass);
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

RunResult run_experiment(ExperimentKind kind, const ExperimentConfig& cfg, const fs::path& out_dir, int threads,
                         bool verbose) {
    if (!cfg.experiment.empty() && parse_kind(cfg.experiment) != kind)
        throw ConfigError("config is for experiment '" + cfg.experiment + "', not '" + kind_name(kind) + "'");
    if (threads < 1) threads = 1;
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    Writer w(out_dir, verbose);
    w.line("experiment: " + kind_name(kind));
    RunResult r;
    switch (kind) {
        case ExperimentKind::Rates: r = run_rates(cfg, w, threads); break;
        case ExperimentKind::Profiles: r = run_profiles(cfg, w); break;
        case ExperimentKind::Scalar: r = run_scalar(cfg, w); break;
        case ExperimentKind::Stability: r = run_stability(cfg, w, threads); break;
        case ExperimentKind::Constants: r = run_constants(cfg, w); break;
        case ExperimentKind::Exact: r = run_exact(cfg, w); break;
    }
    // Everything that varies between identical runs lives here, not in the report.
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json meta = {{"started_utc", started},
                       {"wall_seconds", secs},
                       {"threads", threads},
                       {"schema_version", kSchemaVersion}};
    std::ofstream(out_dir / "run_meta.json") << meta.dump(2) << "\n";
    r.files.push_back(out_dir / "run_meta.json");
    return r;
}

}  // namespace muskin
