#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "convexflow/geodesics.hpp"
#include "convexflow/ricci_flow.hpp"

namespace convexflow {

struct Tolerances {
  double gauss_bonnet = 1e-9;
  double area_law = 1e-3;
  double monotone = 1e-12;
  double positivity = 1e-6;
  double upper_bound = 1e-9;
  double distance = 0.05;
  double slack = 0.10;
  double stability = 0.25;
  double closed_form = 0.01;
  double lemma = 0.01;
  double alexandrov = 0.02;
  double equivariance = 1e-6;
  double equivariance_exact = 1e-12;
};

struct CheckResult {
  std::string name;
  std::string anchor;
  nlohmann::ordered_json measured = nlohmann::ordered_json::object();
  double tolerance = 0.0;
  bool pass = false;
};

struct FittedConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double k_bar = 0.0;
  double c_equiv = 0.0;
};

struct VerificationReport {
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
  std::vector<CheckResult> checks;
  FittedConstants constants;

  bool all_pass() const;
};

/// Deterministic JSON text; checks ordered by name.
std::string emit_report(const VerificationReport& report);

/// max over pairs of |value - reference| / reference.
double panel_deviation(const std::vector<double>& values, const std::vector<double>& reference);

/// True when each entry is at most (1 + slack) times its predecessor.
bool decreasing_with_slack(const std::vector<double>& values, double slack);

/// |a - b| / max(|a|, |b|).
double relative_spread(double a, double b);

/// Spearman rank correlation; ties get their average rank.
double rank_correlation(const std::vector<double>& x, const std::vector<double>& y);

// Trace invariants over every run in `traces`.
CheckResult check_gauss_bonnet(const std::vector<const FlowTrace*>& traces, const Tolerances& tol);
CheckResult check_area_law(const std::vector<const FlowTrace*>& traces, const Tolerances& tol);
CheckResult check_edge_monotonicity(const std::vector<const FlowTrace*>& traces, const Tolerances& tol);
CheckResult check_u_monotonicity(const std::vector<const FlowTrace*>& traces, const Tolerances& tol);
CheckResult check_positivity(const std::vector<const FlowTrace*>& traces, const Tolerances& tol);
CheckResult check_area_decreasing(const std::vector<const FlowTrace*>& traces);

struct SandwichFit {
  double c1 = 0.0;
  double c2 = 0.0;
  /// max over rows and pairs of d_t / d_0 - 1.
  double upper_excess = 0.0;
};

/// Uses the t = 0 row as d_0. Throws Error(MissingPanel) if a row lacks the
/// panel.
SandwichFit fit_sandwich(const FlowTrace& trace);

/// Upper bound on `fine`; c2 stability between `fine` and `coarse` when
/// coarse is given.
CheckResult check_distance_sandwich(const FlowTrace& fine, const FlowTrace* coarse, const Tolerances& tol,
                                    FittedConstants* constants = nullptr);

/// deviations[k] is the panel deviation of run k at its schedule time.
CheckResult check_initial_convergence(const std::vector<double>& epsilons, const std::vector<double>& times,
                                      const std::vector<double>& deviations, const Tolerances& tol);

CheckResult check_d_equals_dhu(double time, double deviation, const Tolerances& tol);

CheckResult check_hausdorff_controls_intrinsic(const std::vector<double>& epsilons,
                                               const std::vector<double>& hausdorff,
                                               const std::vector<double>& deviations, const Tolerances& tol);

/// C = max over edges of max(r, 1/r), r = length / round length.
double metric_equivalence_constant(const IntrinsicMesh& mesh, const std::vector<double>& round_lengths);

CheckResult check_metric_equivalence(double c_fine, double c_coarse, bool has_coarse, const Tolerances& tol,
                                     FittedConstants* constants = nullptr);

/// Stability of K_bar between the last two entries.
CheckResult check_curvature_bound(const std::vector<double>& epsilons, const std::vector<double>& k_bars,
                                  const Tolerances& tol, FittedConstants* constants = nullptr);

CheckResult check_reciprocal_gradient(const std::vector<std::string>& labels, const std::vector<double>& combined,
                                      const std::vector<double>& vsq, const Tolerances& tol);

struct AlexandrovSample {
  int a, b, c, m;
  double d_am;
  double comparison;
};

/// Sample `count` vertex triangles with a fixed seed; m is the vertex that
/// best balances the distances to b and c, and the comparison value is the
/// distance from a to the matching point of the Euclidean comparison
/// triangle.
std::vector<AlexandrovSample> alexandrov_samples(const IntrinsicMesh& mesh, int count, std::uint64_t seed);

CheckResult check_alexandrov(const std::vector<AlexandrovSample>& samples, const Tolerances& tol);

CheckResult check_equivariance(double random_difference, double symmetric_difference, const Tolerances& tol);

}  // namespace convexflow
