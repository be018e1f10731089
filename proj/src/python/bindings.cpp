#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "csim/certificate.hpp"
#include "csim/curve.hpp"
#include "csim/errors.hpp"
#include "csim/grid.hpp"
#include "csim/rays.hpp"
#include "csim/similarity.hpp"

namespace py = pybind11;
using namespace csim;

namespace {

py::array_t<std::uint8_t> grid_to_array(const GridSet& g) {
    const auto n = static_cast<py::ssize_t>(g.resolution());
    py::array_t<std::uint8_t> out({n, n});
    auto view = out.mutable_unchecked<2>();
    for (py::ssize_t j = 0; j < n; ++j) {
        for (py::ssize_t i = 0; i < n; ++i) view(j, i) = g.get(std::size_t(i), std::size_t(j)) ? 1 : 0;
    }
    return out;
}

GridSet array_to_grid(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a, double r) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw py::value_error("expected a square 2-d array");
    GridSet g(r, static_cast<std::size_t>(a.shape(0)));
    auto view = a.unchecked<2>();
    for (py::ssize_t j = 0; j < a.shape(0); ++j) {
        for (py::ssize_t i = 0; i < a.shape(1); ++i) g.set(std::size_t(i), std::size_t(j), view(j, i) != 0);
    }
    return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cubic-family Misiurewicz similarity toolkit";

    py::register_exception<Error>(m, "CsimError", PyExc_RuntimeError);

    py::class_<CubicMap>(m, "CubicMap")
        .def(py::init<Complex, Complex>(), py::arg("a"), py::arg("v"))
        .def_readwrite("a", &CubicMap::a)
        .def_readwrite("v", &CubicMap::v)
        .def("__call__", &CubicMap::operator())
        .def("derivative", &CubicMap::derivative)
        .def("escape_radius", &CubicMap::escape_radius)
        .def("cocritical", &CubicMap::cocritical)
        .def("__repr__", [](const CubicMap& f) {
            return "CubicMap(a=" + py::repr(py::cast(f.a)).cast<std::string>() +
                   ", v=" + py::repr(py::cast(f.v)).cast<std::string>() + ")";
        });

    m.def("iterate_n", &iterate_n, py::arg("f"), py::arg("z"), py::arg("n"));
    m.def("in_filled_julia", &in_filled_julia, py::arg("f"), py::arg("z"), py::arg("max_iter") = 500);
    m.def("green_potential", &green_potential, py::arg("f"), py::arg("z"), py::arg("tol") = 1e-13,
          py::arg("max_iter") = 100000);
    m.def("eta", &eta, py::arg("a"), py::arg("v"), py::arg("p"));

    py::class_<MisiurewiczCertificate>(m, "MisiurewiczCertificate")
        .def_readonly("map", &MisiurewiczCertificate::map)
        .def_readonly("p", &MisiurewiczCertificate::p)
        .def_readonly("ell", &MisiurewiczCertificate::ell)
        .def_readonly("m", &MisiurewiczCertificate::m)
        .def_readonly("a0", &MisiurewiczCertificate::a0)
        .def_readonly("lambda0", &MisiurewiczCertificate::lambda0)
        .def_readonly("A0", &MisiurewiczCertificate::A0)
        .def_readonly("B0", &MisiurewiczCertificate::B0)
        .def_readonly("Q", &MisiurewiczCertificate::Q)
        .def_readonly("q", &MisiurewiczCertificate::q)
        .def_property_readonly("domain_radius",
                               [](const MisiurewiczCertificate& c) { return c.chart.domain_radius; })
        .def("to_json", &certificate_to_json)
        .def_static("from_json", &certificate_from_json);

    m.def(
        "find_misiurewicz",
        [](int p, int ell, int mm, Complex seed_a, Complex seed_v) {
            return find_misiurewicz(p, ell, mm, seed_a, seed_v);
        },
        py::arg("p"), py::arg("ell"), py::arg("m"), py::arg("seed_a"), py::arg("seed_v"));
    m.def("transversality_winding", &transversality_winding, py::arg("cert"), py::arg("radius") = 1e-3,
          py::arg("samples") = 64);
    m.def("winding_number", &winding_number, py::arg("f"), py::arg("radius"), py::arg("samples") = 64,
          py::arg("center") = Complex{});

    py::class_<PoincareEvaluator>(m, "PoincareEvaluator")
        .def(py::init([](const CubicMap& f, Complex z, int period, double tol) {
                 Complex lam = 1.0, w = z;
                 for (int j = 0; j < period; ++j) {
                     lam *= f.derivative(w);
                     w = f(w);
                 }
                 return PoincareEvaluator(f, PeriodicPoint{z, period, lam}, tol);
             }),
             py::arg("f"), py::arg("cycle_point"), py::arg("period") = 1, py::arg("tol") = 1e-11)
        .def(py::init<const MisiurewiczCertificate&, double, double>(), py::arg("cert"), py::arg("tol") = 1e-11,
             py::arg("test_radius") = 2.0)
        .def("__call__", &PoincareEvaluator::operator())
        .def_property_readonly("lambda0", &PoincareEvaluator::lambda0)
        .def_property_readonly("inner_radius", &PoincareEvaluator::inner_radius);

    m.def("rho_k", &rho_k, py::arg("cert"), py::arg("k"));
    m.def("rho_k_chain_rule", &rho_k_chain_rule, py::arg("cert"), py::arg("k"));
    m.def(
        "rasterize",
        [](const MisiurewiczCertificate& cert, const std::string& mode, double r, std::size_t resolution,
           std::optional<int> k, std::size_t max_iter) {
            RasterMode rm = RasterMode::limit_model;
            if (mode == "rescaled_julia") rm = RasterMode::rescaled_julia;
            else if (mode == "rescaled_locus") rm = RasterMode::rescaled_locus;
            else if (mode != "limit_model") throw py::value_error("unknown raster mode '" + mode + "'");
            return grid_to_array(rasterize(cert, rm, r, resolution, k, max_iter));
        },
        py::arg("cert"), py::arg("mode"), py::arg("r"), py::arg("resolution"), py::arg("k") = py::none(),
        py::arg("max_iter") = 500);
    m.def(
        "hausdorff_distance",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& b, double r) {
            return hausdorff_distance(array_to_grid(a, r), array_to_grid(b, r));
        },
        py::arg("a"), py::arg("b"), py::arg("r"));
    m.def(
        "verify_main_theorem",
        [](const MisiurewiczCertificate& cert, double r, int k_min, int k_max, std::size_t resolution,
           std::size_t max_iter) {
            const SimilarityReport rep = verify_main_theorem(cert, r, k_min, k_max, resolution, max_iter);
            py::dict out;
            out["k"] = rep.k_range;
            out["d_dyn"] = rep.d_dyn;
            out["d_par"] = rep.d_par;
            out["cell_size"] = rep.cell_size;
            return out;
        },
        py::arg("cert"), py::arg("r"), py::arg("k_min"), py::arg("k_max"), py::arg("resolution"),
        py::arg("max_iter") = 500);

    m.def("bottcher_coordinate", &bottcher_coordinate, py::arg("f"), py::arg("z"), py::arg("tol") = 1e-16);
    m.def(
        "trace_dynamic_ray",
        [](const CubicMap& f, double theta, double s_start, double s_end, int steps) {
            const RayTrace ray = trace_dynamic_ray(f, theta, s_start, s_end, steps);
            std::vector<std::pair<double, Complex>> samples;
            for (const auto& s : ray.samples) samples.emplace_back(s.s, s.point);
            return py::make_tuple(samples, ray.landed);
        },
        py::arg("f"), py::arg("theta"), py::arg("s_start"), py::arg("s_end"), py::arg("steps") = 40);
    m.def(
        "landing_check",
        [](const MisiurewiczCertificate& cert, double theta, int mu, const std::vector<double>& ladder) {
            const LandingReport rep = landing_check(cert, theta, mu, ladder);
            std::vector<py::tuple> rows;
            for (const auto& row : rep.rows) rows.push_back(py::make_tuple(row.s, row.t, row.param_angle));
            return rows;
        },
        py::arg("cert"), py::arg("theta"), py::arg("mu"), py::arg("s_ladder"));
}
