#include <doctest.h>

#include <cmath>
#include <numbers>

#include "convexflow/discretization.hpp"
#include "convexflow/error.hpp"
#include "convexflow/verification.hpp"

using namespace convexflow;

namespace {

FlowTrace synthetic_trace(const std::vector<double>& times, const std::vector<std::vector<double>>& panels) {
  FlowTrace t;
  t.initial_area = 1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    TraceRow row;
    row.time = times[i];
    row.panel = panels[i];
    row.area = 1.0 - 8.0 * std::numbers::pi * times[i];
    row.defect_sum = 4.0 * std::numbers::pi;
    row.min_k = 1.0;
    row.max_k = 2.0;
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace

TEST_CASE("helpers") {
  CHECK(panel_deviation({1.1, 1.8}, {1.0, 2.0}) == doctest::Approx(0.1));
  CHECK(decreasing_with_slack({1.0, 1.05, 0.5}, 0.1));
  CHECK_FALSE(decreasing_with_slack({1.0, 1.2}, 0.1));
  CHECK(relative_spread(2.0, 1.5) == doctest::Approx(0.25));
  CHECK(relative_spread(0.0, 0.0) == 0.0);
  CHECK(rank_correlation({1, 2, 3}, {10, 20, 30}) == doctest::Approx(1.0));
  CHECK(rank_correlation({1, 2, 3}, {30, 20, 10}) == doctest::Approx(-1.0));
  CHECK(rank_correlation({1, 2, 3, 4}, {5, 5, 6, 7}) == doctest::Approx(0.9486832980505138));
}

TEST_CASE("sandwich fit") {
  const FlowTrace t = synthetic_trace({0.0, 0.04, 0.16}, {{1.0, 2.0}, {0.9, 1.9}, {0.8, 1.6}});
  const SandwichFit f = fit_sandwich(t);
  CHECK(f.c2 == doctest::Approx(1.0));  // (2.0 - 1.6) / 0.4
  CHECK(f.upper_excess == doctest::Approx(0.0));
  FittedConstants c;
  const CheckResult r = check_distance_sandwich(t, &t, Tolerances{}, &c);
  CHECK(r.pass);
  CHECK(c.c2 == doctest::Approx(1.0));
  const FlowTrace up = synthetic_trace({0.0, 0.1}, {{1.0}, {1.01}});
  CHECK_FALSE(check_distance_sandwich(up, nullptr, Tolerances{}).pass);
}

TEST_CASE("missing panels are reported") {
  FlowTrace t = synthetic_trace({0.0, 0.1}, {{1.0, 2.0}, {1.0}});
  CHECK_THROWS_AS(fit_sandwich(t), Error);
  t.rows[0].panel.clear();
  CHECK_THROWS_AS(fit_sandwich(t), Error);
}

TEST_CASE("initial convergence") {
  const Tolerances tol;
  CHECK(check_initial_convergence({0.2, 0.1, 0.05}, {0.3, 0.15, 0.075}, {0.1, 0.06, 0.03}, tol).pass);
  CHECK_FALSE(check_initial_convergence({0.2, 0.1, 0.05}, {0.3, 0.15, 0.075}, {0.1, 0.06, 0.06}, tol).pass);
  CHECK_FALSE(check_initial_convergence({0.2, 0.1, 0.05}, {0.3, 0.15, 0.075}, {0.03, 0.06, 0.04}, tol).pass);
  CHECK_THROWS_AS(check_initial_convergence({0.2, 0.1}, {0.1, 0.2}, {0.1, 0.05}, tol), Error);
  CHECK_THROWS_AS(check_initial_convergence({0.2, 0.1}, {0.2}, {0.1, 0.05}, tol), Error);
}

TEST_CASE("Hausdorff control") {
  const Tolerances tol;
  CHECK(check_hausdorff_controls_intrinsic({0.2, 0.1, 0.05}, {0.3, 0.2, 0.1}, {0.2, 0.1, 0.05}, tol).pass);
  // Rank disagreement matters only when the Hausdorff distances spread out.
  CHECK_FALSE(check_hausdorff_controls_intrinsic({0.2, 0.1, 0.05}, {0.3, 0.2, 0.1}, {0.2, 0.1, 0.105}, tol).pass);
  const CheckResult flat =
      check_hausdorff_controls_intrinsic({0.2, 0.1, 0.05}, {0.100, 0.099, 0.098}, {0.2, 0.1, 0.105}, tol);
  CHECK(flat.pass);
  CHECK(flat.measured["rank_required"] == false);
}

TEST_CASE("metric equivalence constant of a scaled sphere") {
  const SphereMesh m = icosphere(2);
  const IntrinsicMesh mesh = embed(constant_radial(m, 2.0), m);
  CHECK(metric_equivalence_constant(mesh, round_edge_lengths(m)) == doctest::Approx(2.0));
  const IntrinsicMesh small = embed(constant_radial(m, 0.5), m);
  CHECK(metric_equivalence_constant(small, round_edge_lengths(m)) == doctest::Approx(2.0));
  FittedConstants c;
  CHECK(check_metric_equivalence(2.0, 2.2, true, Tolerances{}, &c).pass);
  CHECK(c.c_equiv == 2.0);
  CHECK_FALSE(check_metric_equivalence(2.0, 4.0, true, Tolerances{}).pass);
}

TEST_CASE("curvature bound stability") {
  FittedConstants c;
  CHECK(check_curvature_bound({0.2, 0.1, 0.05}, {0.5, 0.6, 0.65}, Tolerances{}, &c).pass);
  CHECK(c.k_bar == 0.65);
  CHECK_FALSE(check_curvature_bound({0.1, 0.05}, {0.5, 1.0}, Tolerances{}).pass);
}

TEST_CASE("reciprocal gradient check") {
  CHECK(check_reciprocal_gradient({"ball", "cube"}, {1.0, 0.5}, {1.0, 0.6}, Tolerances{}).pass);
  CHECK_FALSE(check_reciprocal_gradient({"bad"}, {1.05}, {1.0}, Tolerances{}).pass);
}

TEST_CASE("Alexandrov comparison on a round sphere") {
  // Spheres are CAT(1) with positive curvature: geodesic medians are longer
  // than their Euclidean comparison.
  const SphereMesh m = icosphere(5);
  const IntrinsicMesh mesh = embed(constant_radial(m, 1.0), m);
  const std::vector<AlexandrovSample> s = alexandrov_samples(mesh, 20, 3);
  CHECK(s.size() == 20);
  for (const AlexandrovSample& x : s) CHECK(x.d_am >= x.comparison * (1.0 - 0.02));
  CHECK(check_alexandrov(s, Tolerances{}).pass);
  CHECK(alexandrov_samples(mesh, 20, 3).front().a == s.front().a);
}

TEST_CASE("equivariance check") {
  const Tolerances tol;
  CHECK(check_equivariance(1e-8, 0.0, tol).pass);
  CHECK_FALSE(check_equivariance(1e-5, 0.0, tol).pass);
  CHECK_FALSE(check_equivariance(1e-8, 1e-10, tol).pass);
}

TEST_CASE("trace invariants") {
  FlowTrace t = synthetic_trace({0.0, 0.01}, {{1.0}, {0.9}});
  const std::vector<const FlowTrace*> ts{&t};
  const Tolerances tol;
  CHECK(check_gauss_bonnet(ts, tol).pass);
  CHECK(check_area_law(ts, tol).pass);
  CHECK(check_area_decreasing(ts).pass);
  CHECK(check_positivity(ts, tol).pass);
  t.rows[1].min_k = -0.1;
  CHECK_FALSE(check_positivity(ts, tol).pass);
  t.max_length_ratio = 1.0 + 1e-9;
  CHECK_FALSE(check_edge_monotonicity(ts, tol).pass);
  t.rows[1].area = 2.0;
  CHECK_FALSE(check_area_decreasing(ts).pass);
  t.rows[1].defect_sum += 1e-6;
  CHECK_FALSE(check_gauss_bonnet(ts, tol).pass);
}

TEST_CASE("report text is deterministic and sorted") {
  VerificationReport rep;
  rep.metadata["level"] = 3;
  CheckResult b{"zeta", "x", nlohmann::ordered_json::object(), 0.1, true};
  CheckResult a{"alpha", "y", nlohmann::ordered_json::object(), 0.2, false};
  rep.checks = {b, a};
  const std::string text = emit_report(rep);
  CHECK(text == emit_report(rep));
  CHECK(text.find("alpha") < text.find("zeta"));
  CHECK_FALSE(rep.all_pass());
  const auto j = nlohmann::json::parse(text);
  CHECK(j["all_pass"] == false);
  CHECK(j["checks"][0]["verdict"] == "fail");
}
