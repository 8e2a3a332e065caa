#include "convexflow/ricci_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "convexflow/error.hpp"

namespace convexflow {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kEightPi = 8.0 * std::numbers::pi;

double base_area(const IntrinsicMesh& mesh) {
  const auto& topo = mesh.topology();
  const auto& base = mesh.base_lengths();
  std::vector<double> areas(topo.triangles.size());
  for (std::size_t t = 0; t < topo.triangles.size(); ++t) {
    double s[3] = {base[topo.tri_edges[t][0]], base[topo.tri_edges[t][1]], base[topo.tri_edges[t][2]]};
    std::sort(s, s + 3, std::greater<>());
    const double a = s[0], b = s[1], c = s[2];
    areas[t] = 0.25 * std::sqrt(std::max(0.0, (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))));
  }
  return compensated_sum(areas);
}

// u_new = u - dt K, written into `next` (whose storage is reused).
void advance(const FlowState& cur, double dt, double reject_margin, std::vector<double>& scratch, FlowState& next) {
  if (!(dt >= 0.0)) throw Error(Errc::StepRejected, "negative time step");
  const double extinction = cur.extinction_time();
  if (cur.time + dt >= extinction)
    throw Error(Errc::ExtinctionReached, "step would cross the extinction time");
  const auto& u = cur.mesh.conformal();
  const auto& k = cur.mesh.curvature();
  scratch.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) scratch[i] = u[i] - dt * k[i];
  next.mesh.assign_conformal(scratch);
  if (next.mesh.total_area() <= 0.0) throw Error(Errc::ExtinctionReached, "area vanished");
  if (!(next.mesh.min_margin() >= reject_margin)) throw StepRejected(next.mesh.min_margin());
  next.time = cur.time + dt;
  next.step_count = cur.step_count + 1;
  next.last_dt = dt;
}

TraceRow make_row(const FlowState& s, const RunOptions& opts) {
  const auto& k = s.mesh.curvature();
  const auto& u = s.mesh.conformal();
  TraceRow row;
  row.time = s.time;
  row.min_k = *std::min_element(k.begin(), k.end());
  row.max_k = *std::max_element(k.begin(), k.end());
  row.area = s.mesh.total_area();
  row.min_u = *std::min_element(u.begin(), u.end());
  row.max_u = *std::max_element(u.begin(), u.end());
  row.min_margin = s.mesh.min_margin();
  row.defect_sum = s.mesh.defect_sum();
  if (opts.panel) row.panel = opts.panel(s.mesh);
  if (opts.keep_u) row.u = u;
  return row;
}

}  // namespace

double FlowState::extinction_time() const { return initial_area / kEightPi; }

FlowState init_flow(IntrinsicMesh mesh) {
  FlowState s;
  s.initial_area = base_area(mesh);
  s.mesh = std::move(mesh);
  return s;
}

FlowState step(const FlowState& state, double dt, double reject_margin) {
  FlowState next = state;
  if (dt == 0.0) return next;
  std::vector<double> scratch;
  advance(state, dt, reject_margin, scratch, next);
  return next;
}

double suggested_dt(const IntrinsicMesh& mesh, double cfl) {
  double kmax = 0.0;
  for (double k : mesh.curvature()) kmax = std::max(kmax, std::abs(k));
  const double lmin = *std::min_element(mesh.lengths().begin(), mesh.lengths().end());
  double limit = lmin * lmin;
  if (kmax > 0.0) limit = std::min(limit, 1.0 / kmax);
  return cfl * limit;
}

std::vector<double> uniform_record_times(double t_target, int count) {
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(t_target * i / count);
  return out;
}

std::pair<FlowState, FlowTrace> adaptive_run(FlowState state, const RunOptions& opts) {
  if (!(opts.cfl > 0.0 && opts.cfl <= 1.0)) throw Error(Errc::ParseError, "cfl must lie in (0, 1]");
  FlowTrace trace;
  if (state.initial_area <= 0.0) state.initial_area = base_area(state.mesh);
  const double a0 = state.initial_area;
  trace.initial_area = a0;
  if (!(opts.t_target < a0 / kEightPi))
    throw Error(Errc::ExtinctionReached, "target time beyond extinction");

  std::vector<double> stops;
  for (double t : opts.record_times)
    if (t > state.time && t < opts.t_target) stops.push_back(t);
  stops.push_back(opts.t_target);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  trace.rows.push_back(make_row(state, opts));
  trace.max_defect_residual = std::abs(state.mesh.defect_sum() - kFourPi);
  trace.min_curvature_ratio = trace.rows.back().min_k / trace.rows.back().max_k;
  for (std::size_t e = 0; e < state.mesh.lengths().size(); ++e)
    trace.max_length_ratio =
        std::max(trace.max_length_ratio, state.mesh.lengths()[e] / state.mesh.base_lengths()[e]);
  trace.max_u_increase = -std::numeric_limits<double>::infinity();
  trace.max_area_increase = -std::numeric_limits<double>::infinity();

  FlowState next = state;
  std::vector<double> scratch;
  std::size_t stop = 0;
  long steps = 0;
  while (stop < stops.size() && (opts.max_steps < 0 || steps < opts.max_steps)) {
    double dt = suggested_dt(state.mesh, opts.cfl);
    bool lands = false;
    if (state.time + dt >= stops[stop]) {
      dt = stops[stop] - state.time;
      lands = true;
    }
    int halvings = 0;
    while (true) {
      try {
        advance(state, dt, opts.reject_margin, scratch, next);
        break;
      } catch (const StepRejected& rej) {
        trace.rejections.push_back({state.time, dt, rej.margin()});
        if (++halvings > opts.max_halvings)
          throw Error(Errc::StallDetected, "step size halved " + std::to_string(opts.max_halvings) + " times");
        dt *= 0.5;
        lands = false;
      }
    }
    if (lands) next.time = stops[stop];

    const auto& u0 = state.mesh.conformal();
    const auto& u1 = next.mesh.conformal();
    for (std::size_t i = 0; i < u0.size(); ++i) {
      trace.max_u_increase = std::max(trace.max_u_increase, u1[i] - u0[i]);
      trace.max_area_increase =
          std::max(trace.max_area_increase, next.mesh.vertex_areas()[i] - state.mesh.vertex_areas()[i]);
    }
    const auto& len = next.mesh.lengths();
    const auto& base = next.mesh.base_lengths();
    for (std::size_t e = 0; e < len.size(); ++e) trace.max_length_ratio = std::max(trace.max_length_ratio, len[e] / base[e]);
    trace.max_defect_residual = std::max(trace.max_defect_residual, std::abs(next.mesh.defect_sum() - kFourPi));
    const auto& k = next.mesh.curvature();
    const auto [kmin, kmax] = std::minmax_element(k.begin(), k.end());
    trace.min_curvature_ratio = std::min(trace.min_curvature_ratio, *kmin / *kmax);
    ++trace.accepted_steps;
    ++steps;

    std::swap(state, next);
    if (lands) {
      trace.rows.push_back(make_row(state, opts));
      ++stop;
    }
  }
  if (!trace.rows.empty() && trace.rows.back().time != state.time) trace.rows.push_back(make_row(state, opts));
  return {std::move(state), std::move(trace)};
}

double area_law_check(const FlowTrace& trace) {
  double worst = 0.0;
  for (const auto& row : trace.rows)
    worst = std::max(worst, std::abs(row.area - (trace.initial_area - kEightPi * row.time)) / trace.initial_area);
  return worst;
}

double curvature_bound_fit(const FlowTrace& trace) {
  double kbar = 0.0;
  for (const auto& row : trace.rows)
    if (row.time > 0.0) kbar = std::max(kbar, row.max_k * row.time);
  return kbar;
}

}  // namespace convexflow
