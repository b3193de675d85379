#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "muskin/cli.hpp"
#include "muskin/errors.hpp"

namespace py = pybind11;
using namespace muskin;

namespace {

/// (N, 3) complex array from per-point Cartesian vectors.
py::array_t<cplx> to_array(const std::vector<FieldSample>& f, std::array<cplx, 3> FieldSample::*member) {
    py::array_t<cplx> out({static_cast<py::ssize_t>(f.size()), py::ssize_t{3}});
    auto a = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < f.size(); ++i)
        for (int c = 0; c < 3; ++c) a(i, c) = (f[i].*member)[c];
    return out;
}

std::vector<Point3> to_points(const py::array_t<double, py::array::c_style | py::array::forcecast>& pts) {
    if (pts.ndim() != 2 || pts.shape(1) != 3) throw py::value_error("points must have shape (N, 3)");
    auto a = pts.unchecked<2>();
    std::vector<Point3> out(static_cast<std::size_t>(pts.shape(0)));
    for (py::ssize_t i = 0; i < pts.shape(0); ++i) out[i] = {a(i, 0), a(i, 1), a(i, 2)};
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact modal solutions, boundary-layer expansions and verification experiments";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_ArithmeticError);
    py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);

    py::enum_<GeometryKind>(m, "GeometryKind")
        .value("cylinder", GeometryKind::ConcentricCylinders)
        .value("sphere", GeometryKind::ConcentricSpheres);
    py::enum_<Polarization>(m, "Polarization").value("TM", Polarization::TM).value("TE", Polarization::TE);
    py::enum_<DriveKind>(m, "DriveKind")
        .value("boundary_trace", DriveKind::BoundaryTrace)
        .value("shell_current", DriveKind::ShellCurrent);

    py::class_<Geometry>(m, "Geometry")
        .def(py::init([](GeometryKind kind, double r_sigma, double r_gamma) { return Geometry{kind, r_sigma, r_gamma}; }),
             py::arg("kind") = GeometryKind::ConcentricCylinders, py::arg("r_sigma") = 1.0, py::arg("r_gamma") = 2.0)
        .def_readwrite("kind", &Geometry::kind)
        .def_readwrite("r_sigma", &Geometry::r_sigma)
        .def_readwrite("r_gamma", &Geometry::r_gamma);

    py::class_<MediaParams>(m, "MediaParams")
        .def(py::init([](double omega, double eps0, double mu_plus, double mu_r, double sigma_plus, double sigma_minus) {
                 return MediaParams{omega, eps0, mu_plus, mu_r, sigma_plus, sigma_minus};
             }),
             py::arg("omega") = 1.0, py::arg("eps0") = 1.0, py::arg("mu_plus") = 1.0, py::arg("mu_r") = 1.0,
             py::arg("sigma_plus") = 1.0, py::arg("sigma_minus") = 1.0)
        .def_readwrite("omega", &MediaParams::omega)
        .def_readwrite("eps0", &MediaParams::eps0)
        .def_readwrite("mu_plus", &MediaParams::mu_plus)
        .def_readwrite("mu_r", &MediaParams::mu_r)
        .def_readwrite("sigma_plus", &MediaParams::sigma_plus)
        .def_readwrite("sigma_minus", &MediaParams::sigma_minus);

    py::class_<Drive>(m, "Drive")
        .def(py::init([](DriveKind kind, Polarization pol, int order, int azimuthal, cplx amplitude, double a, double b) {
                 return Drive{kind, pol, order, azimuthal, amplitude, a, b};
             }),
             py::arg("kind") = DriveKind::BoundaryTrace, py::arg("polarization") = Polarization::TM,
             py::arg("order") = 0, py::arg("azimuthal") = 0, py::arg("amplitude") = cplx(1.0),
             py::arg("shell_a") = 0.0, py::arg("shell_b") = 0.0)
        .def_readwrite("kind", &Drive::kind)
        .def_readwrite("polarization", &Drive::pol)
        .def_readwrite("order", &Drive::order)
        .def_readwrite("azimuthal", &Drive::azimuthal)
        .def_readwrite("amplitude", &Drive::amplitude)
        .def_readwrite("shell_a", &Drive::shell_a)
        .def_readwrite("shell_b", &Drive::shell_b);

    m.def("derive_params", [](const MediaParams& p) {
        const DerivedParams d = derive_params(p);
        py::dict out;
        out["eps"] = d.eps;
        out["kappa_plus"] = d.kappa_plus;
        out["alpha_plus"] = d.alpha_plus;
        out["alpha_minus"] = d.alpha_minus;
        out["lambda"] = d.lambda;
        out["k_plus"] = d.k_plus();
        out["k_minus"] = d.k_minus();
        return out;
    });
    m.def("stability_constants", [](const MediaParams& p) {
        const StabilityConstants c = stability_constants(p);
        return py::make_tuple(c.m, c.C1, c.C2);
    });

    py::class_<ModalSolution>(m, "ModalSolution")
        .def_property_readonly("coefficients", [](const ModalSolution& s) { return s.coeff; })
        .def_readonly("condition", &ModalSolution::condition)
        .def(
            "evaluate",
            [](const ModalSolution& s, const py::array_t<double, py::array::c_style | py::array::forcecast>& pts) {
                const std::vector<FieldSample> f = eval_field(s, to_points(pts));
                py::dict out;
                out["H"] = to_array(f, &FieldSample::H);
                out["curlH"] = to_array(f, &FieldSample::curlH);
                out["E"] = to_array(f, &FieldSample::E);
                out["j"] = to_array(f, &FieldSample::j);
                return out;
            },
            py::arg("points"), "Cartesian H, curl H, E and j at an (N, 3) array of points")
        .def("interface_residuals", [](const ModalSolution& s) {
            const InterfaceResiduals r = interface_residuals(s);
            return py::make_tuple(r.trace, r.flux, r.normal);
        });
    m.def("solve_exact", &solve_exact, py::arg("geometry"), py::arg("media"), py::arg("drive"));

    m.def(
        "_rates_json",
        [](const Geometry& g, const MediaParams& media, const Drive& d, std::vector<double> eps, std::vector<int> orders,
           int threads) {
            RatesRequest req;
            req.geometry = g;
            req.media = media;
            req.drive = d;
            req.eps = std::move(eps);
            req.orders = std::move(orders);
            req.threads = threads;
            py::gil_scoped_release nogil;
            return to_json(run_rates(req)).dump();
        },
        py::arg("geometry"), py::arg("media"), py::arg("drive"), py::arg("eps"), py::arg("orders"),
        py::arg("threads") = 1);

    m.def(
        "run_config",
        [](const std::string& kind, const std::string& config_text, const std::filesystem::path& out_dir, int threads) {
            const ExperimentConfig cfg = parse_config(config_text, "<string>");
            RunResult r;
            {
                py::gil_scoped_release nogil;
                r = run_experiment(parse_kind(kind), cfg, out_dir, threads, false);
            }
            return py::make_tuple(r.pass, r.files, r.summary);
        },
        py::arg("kind"), py::arg("config_text"), py::arg("out_dir"), py::arg("threads") = 1,
        "Run one experiment from JSON config text; returns (passed, files, summary)");

    m.attr("SCHEMA_VERSION") = kSchemaVersion;
}
