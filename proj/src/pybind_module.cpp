#include <cstring>
#include <optional>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fclab/campaign.hpp"
#include "fclab/constants.hpp"
#include "fclab/corpus.hpp"
#include "fclab/field_io.hpp"
#include "fclab/functionals.hpp"
#include "fclab/solver.hpp"
#include "fclab/spectral.hpp"
#include "fclab/version.hpp"

namespace py = pybind11;
using namespace fclab;

namespace {

Field to_field(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
               double box_length) {
    auto buf = a.request();
    if (buf.ndim != 1) throw std::invalid_argument("expected a 1-D array");
    const int M = static_cast<int>(buf.shape[0]);
    Grid g = build_grid(1, box_length, M);
    Field f(g);
    std::memcpy(f.values.data(), buf.ptr, static_cast<std::size_t>(M) * sizeof(double));
    return f;
}

py::array_t<double> from_field(const Field& f) {
    py::array_t<double> out(f.values.size());
    std::memcpy(out.request().ptr, f.values.data(), f.values.size() * sizeof(double));
    return out;
}

ProblemParams make_params(int dim, double s, double mu, double alpha, double p,
                          double c) {
    ProblemParams pp{dim, s, mu, alpha, p, c};
    return pp;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spectral core for mass-constrained doubly nonlocal ground states";
    m.attr("__version__") = version_string;

    py::class_<ProblemParams>(m, "Params")
        .def(py::init(&make_params), py::arg("dim") = 1, py::arg("s") = 0.4,
             py::arg("mu") = 0.5, py::arg("alpha") = 1.0, py::arg("p") = 3.0,
             py::arg("c") = 1.0)
        .def_readwrite("dim", &ProblemParams::dim)
        .def_readwrite("s", &ProblemParams::s)
        .def_readwrite("mu", &ProblemParams::mu)
        .def_readwrite("alpha", &ProblemParams::alpha)
        .def_readwrite("p", &ProblemParams::p)
        .def_readwrite("c", &ProblemParams::c)
        .def("q", &ProblemParams::q)
        .def("p_critical", &ProblemParams::p_critical)
        .def("p_upper", &ProblemParams::p_upper)
        .def("gamma_ps", &ProblemParams::gamma_ps)
        .def("p_gamma", &ProblemParams::p_gamma);

    m.def("derived_exponents",
          [](const ProblemParams& pp, std::optional<double> s_mu) {
              DerivedExponents d = derived_exponents(pp, s_mu);
              py::dict out;
              out["gamma_ps"] = d.gamma_ps;
              out["p_gamma"] = d.p_gamma;
              out["two_mu_star"] = d.two_mu_star;
              out["two_mu_s_star"] = d.two_mu_s_star;
              out["a"] = d.a;
              out["b"] = d.b;
              out["m1_exponent"] = d.m1_exponent;
              if (d.a_mu) out["a_mu"] = *d.a_mu;
              out["regime"] = regime_name(d.regime);
              return out;
          },
          py::arg("params"), py::arg("s_mu") = std::nullopt);

    m.def("frac_laplacian",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> u,
             double box_length, double s) {
              return from_field(frac_laplacian(to_field(u, box_length), s));
          },
          py::arg("u"), py::arg("box_length"), py::arg("s"));

    m.def("riesz_convolve",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> f,
             double box_length, double mu) {
              return from_field(riesz_convolve(to_field(f, box_length), mu));
          },
          py::arg("f"), py::arg("box_length"), py::arg("mu"));

    m.def("hartree",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> u,
             double box_length, double r, double mu) {
              return hartree(to_field(u, box_length), r, mu);
          },
          py::arg("u"), py::arg("box_length"), py::arg("r"), py::arg("mu"));

    m.def("norms",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> u,
             double box_length, double s) {
              Norms n = norms(to_field(u, box_length), s);
              return py::make_tuple(n.mass, n.kinetic);
          },
          py::arg("u"), py::arg("box_length"), py::arg("s"));

    m.def("energy_terms",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> u,
             double box_length, const ProblemParams& pp) {
              EnergyBreakdown e = energy(to_field(u, box_length), pp);
              py::dict out;
              out["kinetic"] = e.kinetic;
              out["d_star"] = e.d_star;
              out["d_p"] = e.d_p;
              out["j_alpha"] = e.j_alpha;
              out["p_alpha"] = e.p_alpha;
              return out;
          },
          py::arg("u"), py::arg("box_length"), py::arg("params"));

    m.def("gradient",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> u,
             double box_length, const ProblemParams& pp) {
              return from_field(gradient(to_field(u, box_length), pp));
          },
          py::arg("u"), py::arg("box_length"), py::arg("params"));

    m.def("scale",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> u,
             double box_length, double t) {
              ScaleResult r = scale(to_field(u, box_length), t);
              return py::make_tuple(from_field(r.field), r.renorm_factor);
          },
          py::arg("u"), py::arg("box_length"), py::arg("t"));

    m.def("fiber",
          [](double kinetic, double d_star, double d_p, const ProblemParams& pp,
             double t) {
              FiberSample f = fiber_from_terms(kinetic, d_star, d_p, pp, t);
              return py::make_tuple(f.e, f.de, f.dde);
          },
          py::arg("kinetic"), py::arg("d_star"), py::arg("d_p"), py::arg("params"),
          py::arg("t"));

    m.def("fiber_argmax",
          [](double kinetic, double d_p, const ProblemParams& pp) {
              return fiber_argmax_from_terms(kinetic, d_p, pp);
          },
          py::arg("kinetic"), py::arg("d_p"), py::arg("params"));

    m.def("project_pohozaev",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> u,
             double box_length, const ProblemParams& pp) {
              return from_field(project_pohozaev(to_field(u, box_length), pp));
          },
          py::arg("u"), py::arg("box_length"), py::arg("params"));

    m.def("optimizer_field",
          [](double box_length, int points, double eps, double z, double c) {
              Grid g = build_grid(1, box_length, points);
              OptimizerField f = optimizer_field(g, eps, z, c);
              return py::make_tuple(from_field(f.field), f.renorm_factor,
                                    f.resolution_warning);
          },
          py::arg("box_length"), py::arg("points"), py::arg("eps"), py::arg("z"),
          py::arg("c"));

    m.def("s_mu_estimate",
          [](double box_length, int points, double mu) {
              Grid g = build_grid(1, box_length, points);
              SmuEstimate e = s_mu_estimate(g, mu);
              return py::make_tuple(e.value, e.spread);
          },
          py::arg("box_length"), py::arg("points"), py::arg("mu"));

    m.def("fit_powerlaw",
          [](const std::vector<double>& xs, const std::vector<double>& ys) {
              if (xs.size() != ys.size())
                  throw std::invalid_argument("xs and ys must have equal length");
              std::vector<std::pair<double, double>> pairs;
              for (std::size_t i = 0; i < xs.size(); ++i)
                  pairs.emplace_back(xs[i], ys[i]);
              FitResult f = fit_powerlaw(pairs);
              return py::make_tuple(f.slope, f.intercept, f.r_squared);
          },
          py::arg("xs"), py::arg("ys"));

    m.def("solve_ground_state",
          [](const ProblemParams& pp, double box_length, int points, int max_iters,
             double pde_residual_tol, std::uint64_t seed, bool polish) {
              Grid g = build_grid(pp.dim, box_length, points);
              SolverConfig cfg;
              cfg.max_iters = max_iters;
              cfg.pde_residual_tol = pde_residual_tol;
              cfg.seed = seed;
              cfg.polish = polish;
              SolverResult r = ground_state(pp, g, cfg);
              py::dict out;
              out["field"] = from_field(r.field);
              out["lambda_c"] = r.lambda;
              out["m_1"] = r.m1;
              out["pde_residual"] = r.pde_residual;
              out["pohozaev_residual"] = r.pohozaev_residual;
              out["nehari_residual"] = r.nehari_residual;
              out["converged"] = r.converged;
              out["flag"] = r.flag;
              return out;
          },
          py::arg("params"), py::arg("box_length"), py::arg("points"),
          py::arg("max_iters") = 400, py::arg("pde_residual_tol") = 1e-6,
          py::arg("seed") = 0, py::arg("polish") = true);

    m.def("save_field",
          [](const std::string& path,
             py::array_t<double, py::array::c_style | py::array::forcecast> u,
             double box_length, const ProblemParams& pp) {
              save_field(path, to_field(u, box_length), pp);
          },
          py::arg("path"), py::arg("u"), py::arg("box_length"), py::arg("params"));

    m.def("load_field", [](const std::string& path) {
        auto [f, hdr] = load_field(path);
        py::dict h;
        h["dim"] = hdr.dim;
        h["box_length"] = hdr.L;
        h["points_per_dim"] = hdr.M;
        h["s"] = hdr.s;
        h["mu"] = hdr.mu;
        h["alpha"] = hdr.alpha;
        h["p"] = hdr.p;
        h["c"] = hdr.c;
        return py::make_tuple(from_field(f), h);
    });
}
