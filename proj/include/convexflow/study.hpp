#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convexflow/convex_body.hpp"
#include "convexflow/discretization.hpp"
#include "convexflow/ricci_flow.hpp"
#include "convexflow/smoothing.hpp"
#include "convexflow/verification.hpp"

namespace convexflow {

/// Parameters of a full verification study. Text form is "key = value" per
/// line with '#' comments; list values are comma separated.
struct RunConfig {
  std::string input;
  /// Ground truth distances on the unsmoothed body: unfolding (polyhedra),
  /// round (great circles of radius `radius`) or fast_marching (level + 2).
  std::string reference = "unfolding";
  double radius = 0.0;
  int level = 6;
  /// Second resolution for the stability checks; negative disables it.
  int companion_level = 5;
  double companion_epsilon = 0.1;
  int lmax = 24;
  int quadrature_level = 0;
  std::vector<double> epsilon{0.2, 0.1, 0.05};
  double cfl = 0.1;
  double t_target_fraction = 0.25;
  int record_count = 8;
  int panel_size = 20;
  std::uint64_t panel_seed = 20240611;
  double panel_min_angle = 0.52359877559829882;
  bool special_pairs = true;
  double mu_min = -1.0;
  int alexandrov_samples = 100;
  std::uint64_t alexandrov_seed = 7;
  int jobs = 1;
  std::string output;
  Tolerances tol;

  static RunConfig parse(const std::string& text);
  void set(const std::string& key, const std::string& value);
  /// Throws Error(ParseError) on violated invariants.
  void validate() const;
  /// Every key in fixed order; input and output paths excluded.
  std::string canonical() const;
  std::string hash() const;
  int panel_level() const;
};

struct PreparedSurface {
  SupportField field;
  SphereMesh sphere;
  RadialField radial;
  IntrinsicMesh mesh;
  std::vector<Vec3> positions;
  double hausdorff = 0.0;
};

/// project -> mollify -> repair -> sample -> embed. The quadrature grid is
/// expressed in `frame`; `sphere` defaults to the icosphere of `level`.
PreparedSurface prepare_surface(const ConvexBody& body, const RunConfig& cfg, double epsilon, int level,
                                const Mat3& frame = Mat3::Identity(), const SphereMesh* sphere = nullptr);

struct FlowRun {
  double epsilon = 0.0;
  int level = 0;
  double hausdorff = 0.0;
  double field_margin = 0.0;
  double field_shift = 0.0;
  double t_target = 0.0;
  double schedule_time = 0.0;
  std::vector<double> schedule_panel;
  FlowState final_state;
  FlowTrace trace;
  std::vector<Vec3> positions;
  double c_equiv = 0.0;
  double k_bar = 0.0;
  ReciprocalGradientBound lemma;
};

FlowRun run_epsilon(const ConvexBody& body, const RunConfig& cfg, double epsilon, int level,
                    const std::vector<std::pair<int, int>>& pairs);

/// Fixed-seed panel on the panel level, plus the face-centre and
/// opposite-corner pairs when enabled.
std::vector<std::pair<int, int>> study_pairs(const RunConfig& cfg);

/// Distances on the unsmoothed body between the surface points hit along the
/// pair directions.
std::vector<double> reference_distances(const ConvexBody& body, const RunConfig& cfg,
                                        const std::vector<std::pair<int, int>>& pairs);

struct StudyResult {
  VerificationReport report;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> reference;
  std::vector<FlowRun> runs;
  std::optional<FlowRun> companion;
};

StudyResult run_study(const ConvexBody& body, const RunConfig& cfg);

/// Max relative edge-length difference between the run on `body` and the
/// run on the rotated body at t_target. With `symmetric` the plain icosphere
/// is reused and vertices are matched by nearest direction (exact for mesh
/// symmetries); otherwise the icosphere is rotated along with the body.
double equivariance_difference(const ConvexBody& body, const Mat3& rotation, const RunConfig& cfg, double epsilon,
                               int level, bool symmetric);

}  // namespace convexflow
