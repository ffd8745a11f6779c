// Python bindings. Complex arrays cross as numpy complex128, real arrays as float64.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lag_geoflow/cycle.hpp"
#include "lag_geoflow/errors.hpp"
#include "lag_geoflow/fiber.hpp"
#include "lag_geoflow/foliation.hpp"
#include "lag_geoflow/geodesic.hpp"
#include "lag_geoflow/io.hpp"
#include "lag_geoflow/tolerance.hpp"

namespace py = pybind11;
using namespace lag_geoflow;

namespace {

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

InvariantFunction to_invariant(py::array_t<double, py::array::c_style | py::array::forcecast> a, bool mean_zero) {
  if (a.ndim() != 1) throw GeoflowError(ErrorKind::InvalidInput, "invariant function must be one-dimensional");
  return {std::vector<double>(a.data(), a.data() + a.size()), mean_zero};
}

py::dict diagnostics_dict(const GeodesicDiagnostics& d) {
  py::dict out;
  out["positivity_margin"] = to_array(d.positivity_margin);
  out["leaf_drift"] = to_array(d.leaf_drift);
  out["endpoint_theta0"] = to_array(d.endpoint_theta0);
  out["endpoint_thetapi"] = to_array(d.endpoint_thetapi);
  out["cross_check"] = d.cross_check;
  out["tau_nodes"] = d.tau_nodes;
  out["horizon_reached"] = d.horizon_reached;
  out["horizon_reason"] = d.horizon_reason;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geodesics of positive Lagrangian circles in A_m Milnor fibers";

  // The module attribute keeps the type alive.
  static PyObject* geoflow_error = py::exception<GeoflowError>(m, "GeoflowError", PyExc_RuntimeError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const GeoflowError& e) {
      py::object err = py::handle(geoflow_error)(e.what());
      err.attr("kind") = std::string(to_string(e.kind()));
      err.attr("detail") = e.detail();
      err.attr("is_domain_error") = is_domain_error(e.kind());
      PyErr_SetObject(geoflow_error, err.ptr());
    }
  });

  py::class_<ToleranceProfile> tol(m, "ToleranceProfile");
  tol.def(py::init<>());
#define LG_TOL_FIELD(name) tol.def_readwrite(#name, &ToleranceProfile::name)
  LG_TOL_FIELD(root_simplicity_rel);
  LG_TOL_FIELD(root_simplicity_floor);
  LG_TOL_FIELD(root_residual);
  LG_TOL_FIELD(branch_delta);
  LG_TOL_FIELD(branch_residual);
  LG_TOL_FIELD(arc_endpoint);
  LG_TOL_FIELD(on_fiber);
  LG_TOL_FIELD(positivity_floor);
  LG_TOL_FIELD(special_tol);
  LG_TOL_FIELD(leaf_tol);
  LG_TOL_FIELD(leaf_rtol);
  LG_TOL_FIELD(leaf_max_step);
  LG_TOL_FIELD(min_step);
  LG_TOL_FIELD(sing_radius);
  LG_TOL_FIELD(chart_radius_factor);
  LG_TOL_FIELD(local_inverse_tol);
  LG_TOL_FIELD(hit_tol);
  LG_TOL_FIELD(sheet_match_rel);
  LG_TOL_FIELD(audit_extra);
  LG_TOL_FIELD(max_leaf_length);
  LG_TOL_FIELD(cross_tol);
#undef LG_TOL_FIELD
  tol.def("to_json", [](const ToleranceProfile& t) { return io::dump(io::tolerances_to_json(t)); });

  py::class_<MilnorFiber, std::shared_ptr<MilnorFiber>>(m, "MilnorFiber")
      .def(py::init<std::vector<cplx>, int, const ToleranceProfile&>(), py::arg("coeffs"), py::arg("n"),
           py::arg("tol") = ToleranceProfile{})
      .def_property_readonly("coeffs", [](const MilnorFiber& f) { return to_array(f.coeffs()); })
      .def_property_readonly("roots", [](const MilnorFiber& f) { return to_array(f.roots()); })
      .def_property_readonly("degree", &MilnorFiber::degree)
      .def_property_readonly("n", &MilnorFiber::dimension)
      .def_property_readonly("root_separation", &MilnorFiber::root_separation)
      .def("f", &MilnorFiber::f)
      .def("fprime", &MilnorFiber::fprime)
      .def("nearest_root", [](const MilnorFiber& f, cplx zeta) { return f.nearest_root(zeta); })
      .def("singular_angles", [](const MilnorFiber& f, int j) { return singular_angles(f, j); }, py::arg("j"))
      .def("to_json", [](const MilnorFiber& f) { return io::dump(io::fiber_to_json(f)); });

  py::class_<Arc>(m, "Arc")
      .def_static("segment", &Arc::segment, py::arg("start"), py::arg("end"))
      .def_static("parabolic", &Arc::parabolic, py::arg("start"), py::arg("end"), py::arg("a"))
      .def_static("bezier", &Arc::bezier, py::arg("control"))
      .def("__call__", &Arc::operator())
      .def("reversed", &Arc::reversed);

  py::class_<InvariantFunction>(m, "InvariantFunction")
      .def(py::init(&to_invariant), py::arg("values"), py::arg("mean_zero") = false)
      .def_property_readonly("values", [](const InvariantFunction& h) { return to_array(h.values); })
      .def_readonly("mean_zero", &InvariantFunction::mean_zero);

  py::class_<SymmetricCircle>(m, "SymmetricCircle")
      .def_property_readonly("N", &SymmetricCircle::half_size)
      .def_property_readonly("fiber", [](const SymmetricCircle& c) {
        return std::const_pointer_cast<MilnorFiber>(c.fiber_ptr());
      })
      .def_property_readonly("u", [](const SymmetricCircle& c) {
        std::vector<double> u(c.half_size() + 1);
        for (int k = 0; k <= c.half_size(); ++k) u[k] = c.u(k);
        return to_array(u);
      })
      .def_property_readonly("zeta", [](const SymmetricCircle& c) { return to_array(c.zeta()); })
      .def_property_readonly("z", [](const SymmetricCircle& c) { return to_array(c.z()); })
      .def("mirrored", &SymmetricCircle::mirrored)
      .def("function", [](const SymmetricCircle& c, const std::function<double(double)>& h) {
        return InvariantFunction::from(c, h);
      }, py::arg("h"), "Samples h(u) at the markers.")
      .def("to_json", [](const SymmetricCircle& c) { return io::dump(io::cycle_to_json(c)); });

  m.def("cycle_from_arc", [](const std::shared_ptr<MilnorFiber>& f, const Arc& arc, int N, const ToleranceProfile& t) {
    return cycle_from_arc(f, arc, N, t);
  }, py::arg("fiber"), py::arg("arc"), py::arg("N"), py::arg("tol") = ToleranceProfile{});
  m.def("cycle_from_json", [](const std::string& s, const ToleranceProfile& t) {
    return io::cycle_from_json(io::json::parse(s), nullptr, t);
  }, py::arg("text"), py::arg("tol") = ToleranceProfile{});

  m.def("check_positive", [](const SymmetricCircle& c, const ToleranceProfile& t) {
    const auto r = check_positive(c, t);
    py::dict out;
    out["is_positive"] = r.is_positive;
    out["margin"] = r.margin;
    out["worst_u"] = r.worst_u;
    return out;
  }, py::arg("cycle"), py::arg("tol") = ToleranceProfile{});
  m.def("is_special", [](const SymmetricCircle& c, const ToleranceProfile& t) { return is_special(c, t.special_tol, t); },
        py::arg("cycle"), py::arg("tol") = ToleranceProfile{});
  m.def("integrate", &integrate, py::arg("cycle"), py::arg("h"), py::arg("tol") = ToleranceProfile{});
  m.def("inner", &inner, py::arg("cycle"), py::arg("h"), py::arg("k"), py::arg("tol") = ToleranceProfile{});
  m.def("upsilon_norm", &upsilon_norm, py::arg("cycle"), py::arg("h"), py::arg("tol") = ToleranceProfile{});
  m.def("project_mean_zero", &project_mean_zero, py::arg("cycle"), py::arg("h"), py::arg("tol") = ToleranceProfile{});
  m.def("hausdorff_zeta", &hausdorff_zeta, py::arg("a"), py::arg("b"));

  m.def("trace_leaf", [](const MilnorFiber& f, cplx zeta, cplx z, int sign, double length, const ToleranceProfile& t) {
    const auto tr = trace_leaf(f, ChartPoint::zeta_chart(zeta, z), sign, StopRule::max_arclength(length), t);
    std::vector<cplx> pz, pw;
    for (const auto& p : tr.points) {
      pz.push_back(p.zeta);
      pw.push_back(p.z);
    }
    py::dict out;
    out["zeta"] = to_array(pz);
    out["z"] = to_array(pw);
    out["arclength"] = to_array(tr.arclength);
    return out;
  }, py::arg("fiber"), py::arg("zeta"), py::arg("z"), py::arg("sign") = 1, py::arg("length") = 1.0,
     py::arg("tol") = ToleranceProfile{});

  py::class_<GeodesicPath>(m, "GeodesicPath")
      .def_property_readonly("kind", [](const GeodesicPath& p) { return p.kind == GeodesicPath::Kind::Ivp ? "ivp" : "bvp"; })
      .def_property_readonly("times", [](const GeodesicPath& p) { return to_array(p.times); })
      .def_readonly("snapshots", &GeodesicPath::snapshots)
      .def_readonly("h", &GeodesicPath::h)
      .def_property_readonly("s", [](const GeodesicPath& p) { return to_array(p.s); })
      .def_property_readonly("ell", [](const GeodesicPath& p) { return to_array(p.ell); })
      .def_readonly("distance", &GeodesicPath::distance)
      .def_property_readonly("diagnostics", [](const GeodesicPath& p) { return diagnostics_dict(p.diagnostics); })
      .def("to_json", [](const GeodesicPath& p, int stride) { return io::dump(io::geodesic_to_json(p, stride)); },
           py::arg("stride") = 1);

  m.def("ivp_solve", &ivp_solve, py::arg("gamma0"), py::arg("h0"), py::arg("T") = 1.0, py::arg("dt") = 0.01,
        py::arg("tol") = ToleranceProfile{}, py::call_guard<py::gil_scoped_release>());
  m.def("bvp_solve", [](const SymmetricCircle& g0, const SymmetricCircle& g1, const std::vector<double>& t,
                        int tau_nodes, bool cross_check, const ToleranceProfile& tl) {
    return bvp_solve(g0, g1, t, tl, BvpOptions{tau_nodes, cross_check});
  }, py::arg("gamma0"), py::arg("gamma1"), py::arg("t") = std::vector<double>{0.0, 0.5, 1.0}, py::arg("tau_nodes") = 32,
     py::arg("cross_check") = true, py::arg("tol") = ToleranceProfile{}, py::call_guard<py::gil_scoped_release>());
  m.def("distance", &distance, py::arg("gamma0"), py::arg("gamma1"), py::arg("tol") = ToleranceProfile{},
        py::call_guard<py::gil_scoped_release>());

  m.def("verify_geodesic", [](const GeodesicPath& p, const ToleranceProfile& t) {
    const auto r = verify_geodesic(p, t);
    py::dict out;
    out["residual"] = r.residual;
    out["residual_per_time"] = to_array(r.residual_per_time);
    out["speed"] = to_array(r.speed);
    out["speed_variation"] = r.speed_variation;
    return out;
  }, py::arg("path"), py::arg("tol") = ToleranceProfile{});
  m.def("triangle_identity", &triangle_identity, py::arg("gamma0"), py::arg("gamma1"), py::arg("gamma2"),
        py::arg("tol") = ToleranceProfile{}, py::call_guard<py::gil_scoped_release>());
  m.def("exp_isometry_check", &exp_isometry_check, py::arg("gamma0"), py::arg("h1"), py::arg("h2"), py::arg("dt"),
        py::arg("tol") = ToleranceProfile{}, py::call_guard<py::gil_scoped_release>());
  m.def("check_horizontal_family", &check_horizontal_family, py::arg("snapshots"));
}
