#pragma once

#include <functional>
#include <vector>

#include "convexflow/intrinsic_mesh.hpp"

namespace convexflow {

/// Discrete 2D Ricci flow in conformal gauge: du_i/dt = -K_i with K_i the
/// angle-defect curvature of the current metric.
struct FlowState {
  double time = 0.0;
  IntrinsicMesh mesh;
  long step_count = 0;
  double last_dt = 0.0;

  /// Area of the base metric (u = 0), set by init_flow.
  double initial_area = 0.0;

  /// A0 / (8 pi): total area decreases at rate 8 pi.
  double extinction_time() const;
};

struct TraceRow {
  double time = 0.0;
  double min_k = 0.0;
  double max_k = 0.0;
  double area = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double min_margin = 0.0;
  std::vector<double> panel;
  // In-memory only; not part of the CSV layout.
  double defect_sum = 0.0;
  std::vector<double> u;
};

struct RejectionEvent {
  double time;
  double dt;
  double margin;
};

struct FlowTrace {
  double initial_area = 0.0;
  std::vector<TraceRow> rows;
  std::vector<RejectionEvent> rejections;

  // Extremes over every accepted step, not only recorded rows.
  long accepted_steps = 0;
  double max_defect_residual = 0.0;   // |sum defects - 4 pi|
  double max_length_ratio = 0.0;      // max current / base edge length
  double max_u_increase = 0.0;        // max per-vertex u(t+dt) - u(t)
  double max_area_increase = 0.0;     // max per-vertex area growth
  double min_curvature_ratio = 0.0;   // min over steps of min K / max K
};

FlowState init_flow(IntrinsicMesh mesh);

/// One explicit Euler step u <- u - dt K.
/// Throws StepRejected if the new triangle margin is below `reject_margin`,
/// Error(ExtinctionReached) if the step would reach the extinction time.
FlowState step(const FlowState& state, double dt, double reject_margin = 1e-6);

/// Stable explicit step size: cfl * min(1 / max|K|, min edge length^2).
double suggested_dt(const IntrinsicMesh& mesh, double cfl);

struct RunOptions {
  double t_target = 0.0;
  double cfl = 0.1;
  /// Times (in (time, t_target]) at which rows are recorded in addition to
  /// the start and t_target. Steps land exactly on them.
  std::vector<double> record_times;
  /// Fills TraceRow::panel at recorded times when set.
  std::function<std::vector<double>(const IntrinsicMesh&)> panel;
  bool keep_u = false;
  long max_steps = -1;
  int max_halvings = 20;
  double reject_margin = 1e-6;
};

/// Advance to opts.t_target (or opts.max_steps accepted steps), halving dt on
/// StepRejected. Throws Error(StallDetected) after max_halvings consecutive
/// rejections.
std::pair<FlowState, FlowTrace> adaptive_run(FlowState state, const RunOptions& opts);

/// max over rows of |A(t) - (A0 - 8 pi t)| / A0.
double area_law_check(const FlowTrace& trace);

/// max over rows with t > 0 of (max K) * t.
double curvature_bound_fit(const FlowTrace& trace);

/// Evenly spaced record times in (0, t_target].
std::vector<double> uniform_record_times(double t_target, int count);

}  // namespace convexflow
