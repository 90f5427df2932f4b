// Python bindings for the core operations. Reports come back as plain dicts;
// library errors map onto a small exception hierarchy rooted at
// hopf_flow.HopfFlowError.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>
#include <vector>

#include "hopf_flow/error.hpp"
#include "hopf_flow/fields.hpp"
#include "hopf_flow/first_integral.hpp"
#include "hopf_flow/flows.hpp"
#include "hopf_flow/integrator.hpp"
#include "hopf_flow/reduced_system.hpp"
#include "hopf_flow/special_functions.hpp"
#include "hopf_flow/verify.hpp"

namespace py = pybind11;
using namespace hopf_flow;

namespace {

RhoForm rho_form(const std::string& s) {
  if (s == "principal") return RhoForm::Principal;
  if (s == "continued") return RhoForm::Continued;
  throw UsageError("form must be 'principal' or 'continued'");
}

ImplicitForm implicit_form(const std::string& s) {
  if (s == "continued") return ImplicitForm::ContinuedK;
  if (s == "real") return ImplicitForm::RealK;
  throw UsageError("form must be 'continued' or 'real'");
}

IntegratorConfig config(double rel_tol, double abs_tol, double max_step) {
  IntegratorConfig cfg;
  cfg.rel_tol = rel_tol;
  cfg.abs_tol = abs_tol;
  cfg.max_step = max_step;
  return cfg;
}

py::dict trajectory_dict(const Trajectory& tr, bool with_length) {
  const std::size_t n = tr.size(), dim = tr.front().y.size();
  py::array_t<double> t(static_cast<py::ssize_t>(n));
  py::array_t<double> y({static_cast<py::ssize_t>(n), static_cast<py::ssize_t>(dim)});
  auto tv = t.mutable_unchecked<1>();
  auto yv = y.mutable_unchecked<2>();
  for (std::size_t i = 0; i < n; ++i) {
    tv(i) = tr.samples[i].t;
    for (std::size_t j = 0; j < dim; ++j) yv(i, j) = tr.samples[i].y[j];
  }
  py::dict d;
  d["t"] = t;
  d["y"] = y;
  d["stop_reason"] = to_string(tr.meta.stop_reason);
  d["event"] = tr.meta.event_name;
  d["accepted_steps"] = tr.meta.accepted_steps;
  d["rejected_steps"] = tr.meta.rejected_steps;
  if (with_length) d["path_length"] = tr.path_length();
  return d;
}

py::dict pde_dict(const PdeResidual& r) {
  py::dict d;
  d["scaled"] = r.scaled;
  d["raw"] = r.raw;
  d["flag"] = r.flagged ? py::object(py::str(r.flag)) : py::object(py::none());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hopf-fibration flow: fields, reduced equations, first integral, checks";

  auto base = py::register_exception<Error>(m, "HopfFlowError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
  py::register_exception<TurningPointError>(m, "TurningPointError", base.ptr());
  py::register_exception<NoRootError>(m, "NoRootError", base.ptr());
  py::register_exception<DegenerateSampleError>(m, "DegenerateSampleError", base.ptr());
  py::register_exception<RegionError>(m, "RegionError", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());

  m.def("eval_cartesian", [](double x, double y, double z) {
    const Velocity3 v = eval_cartesian({x, y, z});
    return py::make_tuple(v.vx, v.vy, v.vz);
  }, py::arg("x"), py::arg("y"), py::arg("z"));

  m.def("eval_spherical", [](double r, double phi, double psi) {
    const SphericalVelocity v = eval_spherical({r, phi, psi, false});
    return py::make_tuple(v.dr, v.dphi, v.dpsi);
  }, py::arg("r"), py::arg("phi"), py::arg("psi"));

  m.def("derived_rates", [](double x, double y, double z) {
    const DerivedRates d = derived_rates({x, y, z});
    return py::make_tuple(d.rate_arctan ? py::object(py::float_(*d.rate_arctan)) : py::object(py::none()),
                          d.rate_r2);
  }, py::arg("x"), py::arg("y"), py::arg("z"));

  m.def("trace", [](std::vector<double> start, double span, const std::string& mode, double rel_tol,
                    double abs_tol, double max_step) {
    if (start.size() != 3) throw UsageError("trace: start needs three values");
    if (mode != "cartesian" && mode != "spherical") throw UsageError("trace: mode must be cartesian|spherical");
    const bool sph = mode == "spherical";
    IntegratorConfig cfg = config(rel_tol, abs_tol, max_step);
    if (sph) {
      if (!(start[0] > kGuardRadius) || !(std::abs(std::sin(start[2])) > kGuardSinPsi)) {
        throw SingularityError("trace: spherical start at the origin or on the z-axis");
      }
      cfg.events = spherical_guards();
    }
    Trajectory tr;
    {
      py::gil_scoped_release nogil;
      tr = integrate(sph ? spherical_flow() : cartesian_flow(), start, 0.0, span, cfg);
    }
    return trajectory_dict(tr, !sph);
  }, py::arg("start"), py::arg("span"), py::arg("mode") = "cartesian", py::arg("rel_tol") = 1e-10,
     py::arg("abs_tol") = 1e-12, py::arg("max_step") = 1.0);

  m.def("bessel", [](double z) {
    const BesselQuad q = bessel_quad(z);
    return py::make_tuple(q.i0, q.i1, q.k0, q.k1);
  }, py::arg("z"), "(I0, I1, K0, K1) at z > 0");

  m.def("h_rhs", &h_rhs, py::arg("r"), py::arg("H"));
  m.def("psi_rhs", &psi_rhs, py::arg("r"), py::arg("psi"));

  m.def("integrate_h", [](double r0, double H0, double r1, double rel_tol, double abs_tol, double max_step) {
    const Trajectory tr = integrate_h(r0, H0, r1, config(rel_tol, abs_tol, max_step));
    return trajectory_dict(tr, false);
  }, py::arg("r0"), py::arg("H0"), py::arg("r1"), py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12,
     py::arg("max_step") = 0.05);

  m.def("implicit_constant", [](double r, double H, const std::string& form) {
    const ImplicitConstant c = implicit_constant(r, H, implicit_form(form));
    py::dict d;
    d["c1"] = c.c1;
    d["effective"] = c.effective;
    d["form"] = to_string(c.form);
    return d;
  }, py::arg("r"), py::arg("H"), py::arg("form") = "continued");

  m.def("solve_implicit", [](double r0, double H0, double r, double H_lo, double H_hi, const std::string& form) {
    const ImplicitConstant c = implicit_constant(r0, H0, implicit_form(form));
    const ImplicitRoot root = solve_implicit(c, r, H_lo, H_hi);
    py::dict d;
    d["H"] = root.H;
    d["residual"] = root.residual;
    d["roots_in_bracket"] = root.roots_in_bracket;
    d["multiplicity_warning"] = root.multiplicity_warning;
    return d;
  }, py::arg("r0"), py::arg("H0"), py::arg("r"), py::arg("H_lo"), py::arg("H_hi"),
     py::arg("form") = "continued",
     "H(r) on the implicit curve through (r0, H0), searched in [H_lo, H_hi]");

  m.def("rho", [](double xi, double psi, double c2, std::vector<double> f1, const std::string& form) {
    const RhoPartials p = rho_partials({xi, psi, c2}, GaugeF1{std::move(f1)}, rho_form(form));
    py::dict d;
    d["rho"] = p.rho;
    d["rho_xi"] = p.rho_xi;
    d["rho_psi"] = p.rho_psi;
    d["rho_xixi"] = p.rho_xixi;
    d["real_region"] = p.real_region;
    return d;
  }, py::arg("xi"), py::arg("psi"), py::arg("c2") = 1.0, py::arg("f1") = std::vector<double>{},
     py::arg("form") = "principal");

  m.def("linear_pde_residual", [](double xi, double psi, double c2, std::vector<double> f1) {
    return pde_dict(linear_pde_residual({xi, psi, c2}, GaugeF1{std::move(f1)}));
  }, py::arg("xi"), py::arg("psi"), py::arg("c2") = 1.0, py::arg("f1") = std::vector<double>{});

  m.def("transformed_linear_residual", [](double xi, double psi, double c2, std::vector<double> f1) {
    return pde_dict(transformed_linear_residual({xi, psi, c2}, GaugeF1{std::move(f1)}));
  }, py::arg("xi"), py::arg("psi"), py::arg("c2") = 1.0, py::arg("f1") = std::vector<double>{});

  m.def("check_names", &check_names);

  m.def("run_verify_json", [](std::vector<std::string> only, double tol_scale, std::size_t grid, double c2,
                              std::vector<double> f1) {
    VerifyOptions o;
    o.only = std::move(only);
    o.tol_scale = tol_scale;
    o.grid = grid;
    o.c2 = c2;
    o.f1.coeffs = std::move(f1);
    std::string out;
    {
      py::gil_scoped_release nogil;
      out = run_verify(o).to_json().dump();
    }
    return out;
  }, py::arg("only") = std::vector<std::string>{}, py::arg("tol_scale") = 1.0, py::arg("grid") = 20,
     py::arg("c2") = 1.0, py::arg("f1") = std::vector<double>{});
}
