#include <fstream>
#include <set>
#include <sstream>

#include "muskin/cli.hpp"
#include "muskin/errors.hpp"

namespace muskin {

using nlohmann::json;

ExperimentKind parse_kind(const std::string& name) {
    if (name == "rates") return ExperimentKind::Rates;
    if (name == "profiles") return ExperimentKind::Profiles;
    if (name == "scalar") return ExperimentKind::Scalar;
    if (name == "stability") return ExperimentKind::Stability;
    if (name == "constants") return ExperimentKind::Constants;
    if (name == "exact") return ExperimentKind::Exact;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Rates: return "rates";
        case ExperimentKind::Profiles: return "profiles";
        case ExperimentKind::Scalar: return "scalar";
        case ExperimentKind::Stability: return "stability";
        case ExperimentKind::Constants: return "constants";
        case ExperimentKind::Exact: return "exact";
    }
    return "?";
}

namespace {

/// Typed access into one JSON object with path-qualified errors.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("", "expected an object");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError("config field " + path_ + (key.empty() ? "" : "/" + key) + ": " + what);
    }

    void allow(std::initializer_list<const char*> keys) const {
        const std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto& [k, v] : j_.items())
            if (!ok.count(k)) fail(k, "unknown key");
    }

    [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }

    [[nodiscard]] Node child(const char* key) const {
        if (!j_.at(key).is_object()) fail(key, "expected an object");
        return {j_.at(key), path_ + "/" + key};
    }

    [[nodiscard]] double number(const char* key, double dflt) const {
        if (!has(key)) return dflt;
        const json& v = j_.at(key);
        if (!v.is_number()) fail(key, "expected a number");
        return v.get<double>();
    }

    [[nodiscard]] int integer(const char* key, int dflt) const {
        if (!has(key)) return dflt;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) fail(key, "expected an integer");
        return v.get<int>();
    }

    [[nodiscard]] std::string string(const char* key, const std::string& dflt) const {
        if (!has(key)) return dflt;
        const json& v = j_.at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    [[nodiscard]] cplx complex(const json& v, const std::string& key) const {
        if (v.is_number()) return {v.get<double>(), 0.0};
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return {v[0].get<double>(), v[1].get<double>()};
        fail(key, "expected a number or [re, im]");
    }

    [[nodiscard]] cplx complex(const char* key, cplx dflt) const { return has(key) ? complex(j_.at(key), key) : dflt; }

    [[nodiscard]] const json& array(const char* key) const {
        const json& v = j_.at(key);
        if (!v.is_array()) fail(key, "expected an array");
        return v;
    }

    [[nodiscard]] std::vector<double> numbers(const char* key, std::vector<double> dflt) const {
        if (!has(key)) return dflt;
        std::vector<double> out;
        for (std::size_t i = 0; i < array(key).size(); ++i) {
            const json& v = array(key)[i];
            if (!v.is_number()) fail(std::string(key) + "/" + std::to_string(i), "expected a number");
            out.push_back(v.get<double>());
        }
        return out;
    }

    [[nodiscard]] const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
};

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": syntax error at " + line_col(text, e.byte) + ": " + e.what());
    }
    const Node top(root, "");
    top.allow({"schema_version", "experiment", "geometry", "media", "drive", "sweep", "orders", "cutoff", "quadrature",
               "tolerance", "threads", "scalar", "profiles", "exact"});
    ExperimentConfig c;
    c.schema_version = top.integer("schema_version", -1);
    if (c.schema_version != kSchemaVersion)
        top.fail("schema_version", "required and must equal " + std::to_string(kSchemaVersion));
    c.experiment = top.string("experiment", "");
    if (!c.experiment.empty()) (void)parse_kind(c.experiment);

    if (top.has("geometry")) {
        const Node g = top.child("geometry");
        g.allow({"kind", "r_sigma", "r_gamma"});
        const std::string kind = g.string("kind", "cylinder");
        if (kind == "cylinder")
            c.geometry.kind = GeometryKind::ConcentricCylinders;
        else if (kind == "sphere")
            c.geometry.kind = GeometryKind::ConcentricSpheres;
        else
            g.fail("kind", "expected \"cylinder\" or \"sphere\"");
        c.geometry.r_sigma = g.number("r_sigma", c.geometry.r_sigma);
        c.geometry.r_gamma = g.number("r_gamma", c.geometry.r_gamma);
    }
    if (top.has("media")) {
        const Node m = top.child("media");
        m.allow({"omega", "eps0", "mu_plus", "mu_r", "sigma_plus", "sigma_minus"});
        c.media.omega = m.number("omega", c.media.omega);
        c.media.eps0 = m.number("eps0", c.media.eps0);
        c.media.mu_plus = m.number("mu_plus", c.media.mu_plus);
        c.media.mu_r = m.number("mu_r", c.media.mu_r);
        c.media.sigma_plus = m.number("sigma_plus", c.media.sigma_plus);
        c.media.sigma_minus = m.number("sigma_minus", c.media.sigma_minus);
    }
    if (top.has("drive")) {
        const Node d = top.child("drive");
        d.allow({"kind", "polarization", "order", "azimuthal", "amplitude", "shell_a", "shell_b"});
        const std::string kind = d.string("kind", "boundary_trace");
        if (kind == "boundary_trace")
            c.drive.kind = DriveKind::BoundaryTrace;
        else if (kind == "shell_current")
            c.drive.kind = DriveKind::ShellCurrent;
        else
            d.fail("kind", "expected \"boundary_trace\" or \"shell_current\"");
        const std::string pol = d.string("polarization", "TM");
        if (pol != "TM" && pol != "TE") d.fail("polarization", "expected \"TM\" or \"TE\"");
        c.drive.pol = pol == "TM" ? Polarization::TM : Polarization::TE;
        c.drive.order = d.integer("order", c.drive.order);
        c.drive.azimuthal = d.integer("azimuthal", c.drive.azimuthal);
        c.drive.amplitude = d.complex("amplitude", c.drive.amplitude);
        c.drive.shell_a = d.number("shell_a", c.drive.shell_a);
        c.drive.shell_b = d.number("shell_b", c.drive.shell_b);
    }
    if (top.has("sweep")) {
        const Node s = top.child("sweep");
        s.allow({"eps", "mu_r"});
        c.eps = s.numbers("eps", c.eps);
        c.mu_r = s.numbers("mu_r", c.mu_r);
    }
    if (top.has("orders")) {
        c.orders.clear();
        for (const json& v : top.array("orders")) {
            if (!v.is_number_integer()) top.fail("orders", "expected integers");
            c.orders.push_back(v.get<int>());
        }
    }
    if (top.has("cutoff")) {
        const Node k = top.child("cutoff");
        k.allow({"d0", "d1", "degree"});
        c.cutoff.d0 = k.number("d0", 0.3 * c.geometry.r_sigma);
        c.cutoff.d1 = k.number("d1", 0.6 * c.geometry.r_sigma);
        c.cutoff.degree = k.integer("degree", 5);
    }
    if (top.has("quadrature")) {
        const Node q = top.child("quadrature");
        q.allow({"radial_order", "angular_nodes", "refine_tol", "check_refinement"});
        c.norms.radial_order = q.integer("radial_order", c.norms.radial_order);
        c.norms.angular_nodes = q.integer("angular_nodes", c.norms.angular_nodes);
        c.norms.refine_tol = q.number("refine_tol", c.norms.refine_tol);
        c.norms.check_refinement = q.integer("check_refinement", 1) != 0;
    }
    if (top.has("tolerance")) {
        const Node t = top.child("tolerance");
        t.allow({"slope"});
        c.slope_tolerance = t.number("slope", c.slope_tolerance);
    }
    c.threads = top.integer("threads", 0);
    if (c.threads < 0) top.fail("threads", "must be positive");
    if (top.has("scalar")) {
        const Node s = top.child("scalar");
        s.allow({"a_plus", "ratios", "g"});
        c.scalar.a_plus = s.complex("a_plus", c.scalar.a_plus);
        if (s.has("ratios")) {
            c.scalar.ratios.clear();
            const json& r = s.array("ratios");
            for (std::size_t i = 0; i < r.size(); ++i) c.scalar.ratios.push_back(s.complex(r[i], "ratios/" + std::to_string(i)));
        }
        if (s.has("g")) {
            c.scalar.g.clear();
            const json& g = s.array("g");
            for (std::size_t i = 0; i < g.size(); ++i) {
                const Node m(g[i], s.path() + "/g/" + std::to_string(i));
                m.allow({"order", "azimuthal", "coeff"});
                c.scalar.g.push_back({m.integer("order", 1), m.integer("azimuthal", 0), m.complex("coeff", 0.0)});
            }
        }
    }
    if (top.has("profiles")) {
        const Node p = top.child("profiles");
        p.allow({"mu_r", "n_tangential", "n_depth"});
        c.profiles.mu_r = p.number("mu_r", c.profiles.mu_r);
        c.profiles.n_tangential = p.integer("n_tangential", c.profiles.n_tangential);
        c.profiles.n_depth = p.integer("n_depth", c.profiles.n_depth);
    }
    if (top.has("exact")) {
        const Node e = top.child("exact");
        e.allow({"mu_r", "points"});
        c.exact.mu_r = e.number("mu_r", c.exact.mu_r);
        if (e.has("points")) {
            const json& pts = e.array("points");
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const json& p = pts[i];
                if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
                    e.fail("points/" + std::to_string(i), "expected [x, y, z]");
                c.exact.points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
            }
        }
    }

    // Domain checks that would otherwise surface deep inside a run.
    try {
        validate(c.geometry);
        validate(c.media);
        validate(c.drive, c.geometry);
    } catch (const std::exception& ex) {
        throw ConfigError(source + ": " + ex.what());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

}  // namespace muskin
