#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "convexflow/discretization.hpp"
#include "convexflow/error.hpp"
#include "convexflow/geodesics.hpp"
#include "convexflow/ricci_flow.hpp"
#include "convexflow/smoothing.hpp"
#include "convexflow/study.hpp"
#include "convexflow/unfolding.hpp"
#include "convexflow/verification.hpp"

namespace py = pybind11;
using namespace convexflow;

namespace {

using PointArray = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

std::vector<Vec3> to_points(const PointArray& a) {
  std::vector<Vec3> p(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) p[i] = a.row(i).transpose();
  return p;
}

PointArray from_points(const std::vector<Vec3>& p) {
  PointArray a(p.size(), 3);
  for (std::size_t i = 0; i < p.size(); ++i) a.row(i) = p[i].transpose();
  return a;
}

}  // namespace

PYBIND11_MODULE(_convexflow, m) {
  m.doc() = "Ricci flow from convex surfaces";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<ConvexBody>(m, "ConvexBody")
      .def_property_readonly("vertices", [](const ConvexBody& b) { return from_points(b.vertices()); })
      .def_property_readonly("facets", &ConvexBody::facets)
      .def_property_readonly("center", &ConvexBody::center)
      .def_property_readonly("inradius", &ConvexBody::inradius)
      .def_property_readonly("circumradius", &ConvexBody::circumradius)
      .def("support", &ConvexBody::support)
      .def("radial", &ConvexBody::radial);
  m.def("convex_hull", [](const PointArray& points) { return convex_hull(to_points(points)); }, py::arg("points"));

  py::class_<SupportField>(m, "SupportField")
      .def_readonly("lmax", &SupportField::lmax)
      .def_readonly("coefficients", &SupportField::coefficients)
      .def_readonly("margin", &SupportField::margin)
      .def_readonly("shift", &SupportField::shift)
      .def_readonly("reconstruction_error", &SupportField::reconstruction_error)
      .def("evaluate", &SupportField::evaluate);
  m.def("project_support",
        [](const ConvexBody& b, int lmax, int q) { return project_support(b, lmax, q); },
        py::arg("body"), py::arg("lmax"), py::arg("quadrature_level") = 0);
  m.def("heat_mollify", &heat_mollify, py::arg("field"), py::arg("epsilon"));
  m.def("margin_repair", &margin_repair, py::arg("field"), py::arg("mu_min") = -1.0);
  m.def("hausdorff_distance",
        py::overload_cast<const SupportField&, const ConvexBody&, int>(&hausdorff_distance), py::arg("field"),
        py::arg("body"), py::arg("grid_level") = 5);

  py::class_<SphereMesh>(m, "SphereMesh")
      .def_readonly("level", &SphereMesh::level)
      .def_property_readonly("directions", [](const SphereMesh& s) { return from_points(s.directions); })
      .def_property_readonly("triangles", [](const SphereMesh& s) { return s.topology.triangles; });
  m.def("icosphere", &icosphere, py::arg("level"));

  py::class_<RadialField>(m, "RadialField").def_readonly("rho", &RadialField::rho);
  m.def("sample_radial", py::overload_cast<const ConvexBody&, const SphereMesh&>(&sample_radial));
  m.def("sample_radial", py::overload_cast<const SupportField&, const SphereMesh&>(&sample_radial));
  m.def("constant_radial", &constant_radial, py::arg("mesh"), py::arg("radius"));
  m.def("ellipsoid_radial", &ellipsoid_radial, py::arg("mesh"), py::arg("semiaxes"));

  py::class_<IntrinsicMesh>(m, "IntrinsicMesh")
      .def_property_readonly("num_vertices", &IntrinsicMesh::num_vertices)
      .def_property_readonly("lengths", &IntrinsicMesh::lengths)
      .def_property_readonly("base_lengths", &IntrinsicMesh::base_lengths)
      .def_property_readonly("conformal", &IntrinsicMesh::conformal)
      .def_property_readonly("curvature", &IntrinsicMesh::curvature)
      .def_property_readonly("angle_defects", &IntrinsicMesh::angle_defects)
      .def_property_readonly("total_area", &IntrinsicMesh::total_area)
      .def_property_readonly("defect_sum", &IntrinsicMesh::defect_sum)
      .def_property_readonly("min_margin", &IntrinsicMesh::min_margin);
  m.def("embed", &embed, py::arg("radial"), py::arg("mesh"));

  py::class_<FlowState>(m, "FlowState")
      .def_readonly("time", &FlowState::time)
      .def_readonly("mesh", &FlowState::mesh)
      .def_readonly("step_count", &FlowState::step_count)
      .def_property_readonly("extinction_time", &FlowState::extinction_time);
  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("time", &TraceRow::time)
      .def_readonly("min_k", &TraceRow::min_k)
      .def_readonly("max_k", &TraceRow::max_k)
      .def_readonly("area", &TraceRow::area)
      .def_readonly("min_u", &TraceRow::min_u)
      .def_readonly("max_u", &TraceRow::max_u)
      .def_readonly("panel", &TraceRow::panel);
  py::class_<FlowTrace>(m, "FlowTrace")
      .def_readonly("initial_area", &FlowTrace::initial_area)
      .def_readonly("rows", &FlowTrace::rows)
      .def_readonly("accepted_steps", &FlowTrace::accepted_steps)
      .def_readonly("max_defect_residual", &FlowTrace::max_defect_residual)
      .def_property_readonly("rejections", [](const FlowTrace& t) { return t.rejections.size(); });
  m.def("init_flow", &init_flow, py::arg("mesh"));
  m.def(
      "adaptive_run",
      [](const FlowState& state, double t_target, double cfl, std::vector<double> record_times,
         std::vector<std::pair<int, int>> pairs) {
        RunOptions opts;
        opts.t_target = t_target;
        opts.cfl = cfl;
        opts.record_times = std::move(record_times);
        DistancePanel panel;
        panel.pairs = std::move(pairs);
        if (!panel.pairs.empty())
          opts.panel = [&panel](const IntrinsicMesh& mesh) { return panel_eval(mesh, panel).values; };
        py::gil_scoped_release release;
        return adaptive_run(state, opts);
      },
      py::arg("state"), py::arg("t_target"), py::arg("cfl") = 0.1, py::arg("record_times") = std::vector<double>{},
      py::arg("pairs") = std::vector<std::pair<int, int>>{});
  m.def("area_law_check", &area_law_check);

  m.def("fast_march", &fast_march, py::arg("mesh"), py::arg("source"));
  m.def("dijkstra", &dijkstra, py::arg("mesh"), py::arg("source"));
  m.def("nearest_direction", &nearest_direction, py::arg("mesh"), py::arg("direction"));
  m.def("make_panel_pairs", &make_panel_pairs, py::arg("mesh"), py::arg("count"), py::arg("seed"),
        py::arg("min_angle"));
  m.def("unfold_polyhedron",
        py::overload_cast<const ConvexBody&, const Vec3&, const Vec3&, int>(&unfold_polyhedron), py::arg("body"),
        py::arg("a"), py::arg("b"), py::arg("max_faces") = 6);

  m.def(
      "run_study",
      [](const ConvexBody& body, const std::string& config) {
        const RunConfig cfg = RunConfig::parse(config);
        py::gil_scoped_release release;
        return emit_report(run_study(body, cfg).report);
      },
      py::arg("body"), py::arg("config") = "", "Run the verification study and return the report as JSON text.");
}
