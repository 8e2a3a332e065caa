#include <doctest.h>

#include <cmath>
#include <numbers>

#include "convexflow/discretization.hpp"
#include "convexflow/error.hpp"
#include "convexflow/ricci_flow.hpp"
#include "convexflow/smoothing.hpp"
#include "fixtures.hpp"

using namespace convexflow;

namespace {

FlowState sphere_state(int level, double radius = 1.0) {
  const SphereMesh m = icosphere(level);
  return init_flow(embed(constant_radial(m, radius), m));
}

FlowState ellipsoid_state(int level) {
  const SphereMesh m = icosphere(level);
  return init_flow(embed(ellipsoid_radial(m, Vec3(1.0, 1.0, 1.5)), m));
}

}  // namespace

TEST_CASE("zero step is the identity") {
  const FlowState s = sphere_state(2);
  const FlowState t = step(s, 0.0);
  CHECK(t.mesh.lengths() == s.mesh.lengths());
  CHECK(t.time == 0.0);
}

TEST_CASE("extinction time is A0 / 8pi") {
  const FlowState s = sphere_state(3);
  CHECK(s.extinction_time() == doctest::Approx(s.mesh.total_area() / (8.0 * std::numbers::pi)));
}

TEST_CASE("round sphere shrinks self-similarly") {
  FlowState s = sphere_state(5);
  RunOptions opts;
  opts.t_target = 0.3;
  auto [end, trace] = adaptive_run(s, opts);
  CHECK(end.time == doctest::Approx(0.3).epsilon(1e-14));
  // Area follows A0 - 8 pi t exactly, so the radius is sqrt(1 - 2t) up to
  // discretization.
  const double k = 1.0 / (1.0 - 2.0 * 0.3);
  double worst = 0.0;
  for (double ki : end.mesh.curvature()) worst = std::max(worst, std::abs(ki / k - 1.0));
  MESSAGE("max relative K deviation " << worst);
  CHECK(worst <= 0.01);
  CHECK(area_law_check(trace) < 1e-3);
}

TEST_CASE("flow invariants on an ellipsoid") {
  RunOptions opts;
  const FlowState s = ellipsoid_state(4);
  opts.t_target = 0.25 * s.extinction_time();
  opts.record_times = uniform_record_times(opts.t_target, 6);
  auto [end, trace] = adaptive_run(s, opts);
  CHECK(trace.rows.size() == 7);
  CHECK(trace.rows.front().time == 0.0);
  CHECK(trace.rows.back().time == opts.t_target);
  CHECK(trace.max_defect_residual < 1e-9);
  CHECK(trace.max_length_ratio <= 1.0 + 1e-12);
  CHECK(trace.max_u_increase <= 1e-12);
  CHECK(trace.max_area_increase <= 1e-12);
  CHECK(area_law_check(trace) < 1e-3);
  for (std::size_t i = 1; i < trace.rows.size(); ++i) {
    CHECK(trace.rows[i].area < trace.rows[i - 1].area);
    CHECK(trace.rows[i].min_k > 0.0);
  }
  CHECK(trace.min_curvature_ratio > 0.0);
}

TEST_CASE("record times are hit exactly") {
  const FlowState s = sphere_state(3);
  RunOptions opts;
  opts.t_target = 0.1;
  opts.record_times = {0.0123, 0.05, 0.0777};
  auto [end, trace] = adaptive_run(s, opts);
  REQUIRE(trace.rows.size() == 5);
  CHECK(trace.rows[1].time == 0.0123);
  CHECK(trace.rows[2].time == 0.05);
  CHECK(trace.rows[3].time == 0.0777);
}

TEST_CASE("panel callback fills recorded rows") {
  const FlowState s = sphere_state(2);
  RunOptions opts;
  opts.t_target = 0.05;
  opts.panel = [](const IntrinsicMesh& m) { return std::vector<double>{m.total_area()}; };
  auto [end, trace] = adaptive_run(s, opts);
  for (const TraceRow& row : trace.rows) {
    REQUIRE(row.panel.size() == 1);
    CHECK(row.panel[0] == doctest::Approx(row.area));
  }
}

TEST_CASE("flow is invariant under scaling") {
  // Scaling lengths by lambda maps u(t) to u(t / lambda^2).
  const double lambda = 2.0;
  const FlowState a = ellipsoid_state(3);
  const SphereMesh m = icosphere(3);
  RadialField big = ellipsoid_radial(m, Vec3(1.0, 1.0, 1.5));
  for (double& r : big.rho) r *= lambda;
  const FlowState b = init_flow(embed(big, m));
  const double t = 0.05;
  RunOptions oa, ob;
  oa.t_target = t;
  ob.t_target = t * lambda * lambda;
  // Matching step sequences: dt scales with lambda^2.
  const auto ra = adaptive_run(a, oa);
  const auto rb = adaptive_run(b, ob);
  CHECK(ra.first.step_count == rb.first.step_count);
  for (int i = 0; i < a.mesh.num_vertices(); ++i)
    CHECK(rb.first.mesh.conformal()[i] == doctest::Approx(ra.first.mesh.conformal()[i]).epsilon(1e-9));
}

TEST_CASE("curvature bound on the round sphere") {
  const FlowState s = sphere_state(4);
  RunOptions opts;
  opts.t_target = 0.25 * s.extinction_time();
  opts.record_times = uniform_record_times(opts.t_target, 8);
  auto [end, trace] = adaptive_run(s, opts);
  // max K * t = t / (1 - 2t) is largest at t = T/4 = 1/8.
  CHECK(curvature_bound_fit(trace) == doctest::Approx(0.125 / 0.75).epsilon(0.03));
}

TEST_CASE("halving cfl halves the step") {
  const FlowState s = ellipsoid_state(3);
  const double a = suggested_dt(s.mesh, 0.2);
  const double b = suggested_dt(s.mesh, 0.1);
  CHECK(b / a == doctest::Approx(0.5));
}

TEST_CASE("steps past extinction are refused") {
  const FlowState s = sphere_state(2);
  CHECK_THROWS_AS(step(s, s.extinction_time() * 1.01), Error);
}

TEST_CASE("steps that thin a triangle below the threshold are rejected") {
  const FlowState s = ellipsoid_state(3);
  const double threshold = s.mesh.min_margin() + 0.05;
  bool rejected = false;
  try {
    (void)step(s, 1e-4, threshold);
  } catch (const StepRejected& e) {
    rejected = true;
    CHECK(e.margin() < threshold);
  }
  CHECK(rejected);
}

TEST_CASE("coarse cfl on a sharp cube triggers halving") {
  const SupportField f = margin_repair(heat_mollify(project_support(fixtures::cube(), 24), 0.01));
  const SphereMesh m = icosphere(4);
  const FlowState s = init_flow(embed(sample_radial(f, m), m));
  RunOptions opts;
  opts.t_target = 0.25 * s.extinction_time();
  opts.cfl = 1.0;
  opts.record_times = uniform_record_times(opts.t_target, 8);
  auto [end, trace] = adaptive_run(s, opts);
  CHECK(end.time == opts.t_target);
  CHECK(!trace.rejections.empty());
  for (const RejectionEvent& r : trace.rejections) CHECK(r.margin < opts.reject_margin);
}

TEST_CASE("cfl outside (0, 1] is refused") {
  RunOptions opts;
  opts.t_target = 0.01;
  opts.cfl = 1.5;
  CHECK_THROWS_AS(adaptive_run(sphere_state(1), opts), Error);
}

TEST_CASE("stall is detected") {
  const FlowState s = ellipsoid_state(2);
  RunOptions opts;
  opts.t_target = 0.01;
  opts.reject_margin = 0.9;  // unreachable
  opts.max_halvings = 3;
  CHECK_THROWS_AS(adaptive_run(s, opts), Error);
}

TEST_CASE("max_steps stops early") {
  RunOptions opts;
  opts.t_target = 0.1;
  opts.max_steps = 3;
  auto [end, trace] = adaptive_run(sphere_state(2), opts);
  CHECK(end.step_count == 3);
  CHECK(end.time < 0.1);
}
