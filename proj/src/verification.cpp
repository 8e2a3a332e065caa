#include "convexflow/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "convexflow/error.hpp"

namespace convexflow {

using nlohmann::ordered_json;

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

CheckResult make(std::string name, std::string anchor, double tolerance) {
  CheckResult r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.tolerance = tolerance;
  return r;
}

}  // namespace

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string emit_report(const VerificationReport& report) {
  std::vector<const CheckResult*> sorted;
  for (const auto& c : report.checks) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->name < b->name; });
  ordered_json j;
  j["metadata"] = report.metadata;
  j["constants"] = {{"c1", report.constants.c1},
                    {"c2", report.constants.c2},
                    {"K_bar", report.constants.k_bar},
                    {"C_equiv", report.constants.c_equiv}};
  j["checks"] = ordered_json::array();
  for (const auto* c : sorted)
    j["checks"].push_back({{"name", c->name},
                           {"anchor", c->anchor},
                           {"measured", c->measured},
                           {"tolerance", c->tolerance},
                           {"verdict", c->pass ? "pass" : "fail"}});
  j["all_pass"] = report.all_pass();
  return j.dump(2) + "\n";
}

double panel_deviation(const std::vector<double>& values, const std::vector<double>& reference) {
  if (values.size() != reference.size()) throw Error(Errc::MissingPanel, "panel size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (reference[i] > 0.0) worst = std::max(worst, std::abs(values[i] - reference[i]) / reference[i]);
  return worst;
}

bool decreasing_with_slack(const std::vector<double>& values, double slack) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1] * (1.0 + slack)) return false;
  return true;
}

double relative_spread(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

namespace {

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = 0.5 * (i + j);
    i = j + 1;
  }
  return r;
}

}  // namespace

double rank_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return sxx == syy ? 1.0 : 0.0;
  return sxy / std::sqrt(sxx * syy);
}

CheckResult check_gauss_bonnet(const std::vector<const FlowTrace*>& traces, const Tolerances& tol) {
  CheckResult r = make("gauss_bonnet", "int_X K_g(t) dV_g(t) = 4 pi", tol.gauss_bonnet);
  double worst = 0.0;
  for (const auto* t : traces) {
    worst = std::max(worst, t->max_defect_residual);
    for (const auto& row : t->rows) worst = std::max(worst, std::abs(row.defect_sum - kFourPi));
  }
  r.measured["max_residual"] = worst;
  r.pass = worst <= tol.gauss_bonnet;
  return r;
}

CheckResult check_area_law(const std::vector<const FlowTrace*>& traces, const Tolerances& tol) {
  CheckResult r = make("area_law", "d/dt dV_g(t) = -R dV_g(t), so A(t) = A0 - 8 pi t", tol.area_law);
  double worst = 0.0;
  ordered_json per_run = ordered_json::array();
  for (const auto* t : traces) {
    const double res = area_law_check(*t);
    per_run.push_back(res);
    worst = std::max(worst, res);
  }
  r.measured["per_run"] = per_run;
  r.measured["max_residual"] = worst;
  r.pass = worst <= tol.area_law;
  return r;
}

CheckResult check_area_decreasing(const std::vector<const FlowTrace*>& traces) {
  CheckResult r = make("area_decreasing", "plumbing", 0.0);
  long violations = 0;
  for (const auto* t : traces)
    for (std::size_t i = 1; i < t->rows.size(); ++i)
      if (!(t->rows[i].area < t->rows[i - 1].area) || !(t->rows[i].time > t->rows[i - 1].time)) ++violations;
  r.measured["violations"] = violations;
  r.pass = violations == 0;
  return r;
}

CheckResult check_edge_monotonicity(const std::vector<const FlowTrace*>& traces, const Tolerances& tol) {
  CheckResult r = make("edge_monotonicity", "g(t) <= exp(L1 T) g0 with L1 = 0", tol.monotone);
  double worst = 0.0;
  for (const auto* t : traces) worst = std::max(worst, t->max_length_ratio - 1.0);
  r.measured["max_length_ratio_minus_one"] = worst;
  r.pass = worst <= tol.monotone;
  return r;
}

CheckResult check_u_monotonicity(const std::vector<const FlowTrace*>& traces, const Tolerances& tol) {
  CheckResult r = make("u_monotonicity", "du/dt = exp(-2u)(Lap_h u - K_h) = -K_g(t) <= 0", tol.monotone);
  double worst = -kInf;
  double min_u = 0.0;
  for (const auto* t : traces) {
    worst = std::max(worst, t->max_u_increase);
    for (std::size_t i = 1; i < t->rows.size(); ++i) {
      const auto& a = t->rows[i - 1].u;
      const auto& b = t->rows[i].u;
      for (std::size_t v = 0; v < std::min(a.size(), b.size()); ++v) worst = std::max(worst, b[v] - a[v]);
    }
    for (const auto& row : t->rows) min_u = std::min(min_u, row.min_u);
  }
  if (!std::isfinite(worst)) worst = 0.0;
  r.measured["max_u_increase"] = worst;
  r.measured["min_u"] = min_u;
  r.pass = worst <= tol.monotone;
  return r;
}

CheckResult check_positivity(const std::vector<const FlowTrace*>& traces, const Tolerances& tol) {
  CheckResult r = make("positivity", "K_g(t) is positive everywhere", tol.positivity);
  double worst = kInf;
  for (const auto* t : traces) {
    worst = std::min(worst, t->min_curvature_ratio);
    for (const auto& row : t->rows) worst = std::min(worst, row.min_k / row.max_k);
  }
  r.measured["min_k_over_max_k"] = worst;
  r.pass = worst >= -tol.positivity;
  return r;
}

SandwichFit fit_sandwich(const FlowTrace& trace) {
  if (trace.rows.empty() || trace.rows.front().panel.empty())
    throw Error(Errc::MissingPanel, "trace has no panel distances");
  const auto& d0 = trace.rows.front().panel;
  SandwichFit fit;
  fit.upper_excess = -kInf;
  for (const auto& row : trace.rows) {
    if (row.panel.size() != d0.size()) throw Error(Errc::MissingPanel, "panel missing at t = " + std::to_string(row.time));
    for (std::size_t p = 0; p < d0.size(); ++p) {
      if (d0[p] <= 0.0) continue;
      fit.upper_excess = std::max(fit.upper_excess, row.panel[p] / d0[p] - 1.0);
      if (row.time > 0.0) fit.c2 = std::max(fit.c2, (d0[p] - row.panel[p]) / std::sqrt(row.time));
    }
  }
  return fit;
}

CheckResult check_distance_sandwich(const FlowTrace& fine, const FlowTrace* coarse, const Tolerances& tol,
                                    FittedConstants* constants) {
  CheckResult r = make("distance_sandwich", "d(p,q) - c2 sqrt(t) <= d_g(t)(p,q) <= exp(c1 t) d(p,q)", tol.stability);
  const SandwichFit f = fit_sandwich(fine);
  r.measured["c1"] = f.c1;
  r.measured["c2"] = f.c2;
  r.measured["upper_excess"] = f.upper_excess;
  bool pass = f.upper_excess <= tol.upper_bound;
  if (coarse) {
    const SandwichFit g = fit_sandwich(*coarse);
    const double spread = relative_spread(f.c2, g.c2);
    r.measured["c2_coarse"] = g.c2;
    r.measured["upper_excess_coarse"] = g.upper_excess;
    r.measured["c2_spread"] = spread;
    pass = pass && g.upper_excess <= tol.upper_bound && spread <= tol.stability;
  }
  r.pass = pass;
  if (constants) {
    constants->c1 = f.c1;
    constants->c2 = f.c2;
  }
  return r;
}

CheckResult check_initial_convergence(const std::vector<double>& epsilons, const std::vector<double>& times,
                                      const std::vector<double>& deviations, const Tolerances& tol) {
  CheckResult r = make("initial_convergence", "max_{p,q} |d_g(t)(p,q) - d(p,q)| -> 0", tol.distance);
  if (epsilons.size() != deviations.size() || times.size() != deviations.size())
    throw Error(Errc::ScheduleMismatch, "schedule and deviation lengths differ");
  for (std::size_t k = 1; k < epsilons.size(); ++k)
    if (!(epsilons[k] < epsilons[k - 1]) || !(times[k] < times[k - 1]))
      throw Error(Errc::ScheduleMismatch, "schedule is not strictly decreasing");
  r.measured["epsilon"] = epsilons;
  r.measured["time"] = times;
  r.measured["deviation"] = deviations;
  r.measured["slack"] = tol.slack;
  const bool decreasing = decreasing_with_slack(deviations, tol.slack);
  const double finest = deviations.empty() ? kInf : deviations.back();
  r.measured["decreasing"] = decreasing;
  r.measured["finest"] = finest;
  r.pass = epsilons.size() >= 3 && decreasing && finest <= tol.distance;
  return r;
}

CheckResult check_d_equals_dhu(double time, double deviation, const Tolerances& tol) {
  CheckResult r = make("d_equals_dhu", "d = d_{h,u0}", tol.distance);
  r.measured["time"] = time;
  r.measured["deviation"] = deviation;
  r.pass = deviation <= tol.distance;
  return r;
}

CheckResult check_hausdorff_controls_intrinsic(const std::vector<double>& epsilons,
                                               const std::vector<double>& hausdorff,
                                               const std::vector<double>& deviations, const Tolerances& tol) {
  CheckResult r = make("hausdorff_controls_intrinsic", "d_i(x,y) converges to d(x,y) uniformly", tol.slack);
  r.measured["epsilon"] = epsilons;
  r.measured["hausdorff"] = hausdorff;
  r.measured["deviation"] = deviations;
  const bool dh = decreasing_with_slack(hausdorff, tol.slack);
  const bool dev = decreasing_with_slack(deviations, tol.slack);
  const double rho = rank_correlation(hausdorff, deviations);
  r.measured["hausdorff_decreasing"] = dh;
  r.measured["deviation_decreasing"] = dev;
  r.measured["rank_correlation"] = rho;
  // Ranks are only meaningful when the Hausdorff distances actually differ.
  bool rank_required = false;
  if (hausdorff.size() >= 3) {
    const auto [lo, hi] = std::minmax_element(hausdorff.begin(), hausdorff.end());
    rank_required = relative_spread(*lo, *hi) > tol.slack;
  }
  r.measured["rank_required"] = rank_required;
  r.pass = dh && dev && (!rank_required || rho >= 1.0 - 1e-12);
  return r;
}

double metric_equivalence_constant(const IntrinsicMesh& mesh, const std::vector<double>& round_lengths) {
  double c = 1.0;
  const auto& len = mesh.lengths();
  for (std::size_t e = 0; e < len.size(); ++e) {
    const double ratio = len[e] / round_lengths[e];
    c = std::max(c, std::max(ratio, 1.0 / ratio));
  }
  return c;
}

CheckResult check_metric_equivalence(double c_fine, double c_coarse, bool has_coarse, const Tolerances& tol,
                                     FittedConstants* constants) {
  CheckResult r = make("metric_equivalence", "(1/C) delta <= g(t) <= C delta", tol.stability);
  r.measured["C_equiv"] = c_fine;
  bool pass = std::isfinite(c_fine);
  if (has_coarse) {
    const double spread = relative_spread(c_fine, c_coarse);
    r.measured["C_equiv_coarse"] = c_coarse;
    r.measured["spread"] = spread;
    pass = pass && std::isfinite(c_coarse) && spread <= tol.stability;
  }
  r.pass = pass;
  if (constants) constants->c_equiv = c_fine;
  return r;
}

CheckResult check_curvature_bound(const std::vector<double>& epsilons, const std::vector<double>& k_bars,
                                  const Tolerances& tol, FittedConstants* constants) {
  CheckResult r = make("curvature_bound", "sup |Riem(g(t))| <= K / t", tol.stability);
  r.measured["epsilon"] = epsilons;
  r.measured["K_bar"] = k_bars;
  bool pass = !k_bars.empty();
  for (double k : k_bars) pass = pass && std::isfinite(k);
  if (k_bars.size() >= 2) {
    const double spread = relative_spread(k_bars[k_bars.size() - 1], k_bars[k_bars.size() - 2]);
    r.measured["spread"] = spread;
    pass = pass && spread <= tol.stability;
  }
  r.pass = pass;
  if (constants && !k_bars.empty()) constants->k_bar = *std::max_element(k_bars.begin(), k_bars.end());
  return r;
}

CheckResult check_reciprocal_gradient(const std::vector<std::string>& labels, const std::vector<double>& combined,
                                      const std::vector<double>& vsq, const Tolerances& tol) {
  CheckResult r = make("reciprocal_gradient_bound", "max_S2 (|grad v|^2 + v^2) <= max_S2 v^2", tol.lemma);
  r.measured["label"] = labels;
  r.measured["max_combined"] = combined;
  r.measured["max_vsq"] = vsq;
  double worst = 0.0;
  for (std::size_t i = 0; i < combined.size(); ++i) worst = std::max(worst, combined[i] / vsq[i] - 1.0);
  r.measured["max_excess"] = worst;
  r.pass = !combined.empty() && worst <= tol.lemma;
  return r;
}

std::vector<AlexandrovSample> alexandrov_samples(const IntrinsicMesh& mesh, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = mesh.num_vertices();
  std::vector<AlexandrovSample> out;
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < 50 * count; ++attempt) {
    AlexandrovSample s{};
    s.a = static_cast<int>(rng() % n);
    s.b = static_cast<int>(rng() % n);
    s.c = static_cast<int>(rng() % n);
    if (s.a == s.b || s.b == s.c || s.a == s.c) continue;
    const std::vector<double> da = fast_march(mesh, s.a);
    const double span = *std::max_element(da.begin(), da.end());
    // Keep triangles well above the mesh scale.
    if (da[s.b] < 0.2 * span || da[s.c] < 0.2 * span) continue;
    const std::vector<double> db = fast_march(mesh, s.b);
    if (db[s.c] < 0.2 * span) continue;
    const std::vector<double> dc = fast_march(mesh, s.c);
    double best = kInf;
    for (int v = 0; v < n; ++v) {
      const double w = std::max(db[v], dc[v]);
      if (w < best) {
        best = w;
        s.m = v;
      }
    }
    const double ab = da[s.b], ac = da[s.c], bc = 0.5 * (db[s.c] + dc[s.b]);
    const double lambda = db[s.m] / (db[s.m] + dc[s.m]);
    const double d0sq = lambda * ac * ac + (1.0 - lambda) * ab * ab - lambda * (1.0 - lambda) * bc * bc;
    s.d_am = da[s.m];
    s.comparison = std::sqrt(std::max(0.0, d0sq));
    out.push_back(s);
  }
  return out;
}

CheckResult check_alexandrov(const std::vector<AlexandrovSample>& samples, const Tolerances& tol) {
  CheckResult r = make("alexandrov_comparison", "d(a,m) >= d0(a~,m~)", tol.alexandrov);
  double worst = kInf;
  long failures = 0;
  for (const auto& s : samples) {
    const double slack = (s.d_am - s.comparison) / s.d_am;
    worst = std::min(worst, slack);
    if (slack < -tol.alexandrov) ++failures;
  }
  r.measured["samples"] = samples.size();
  r.measured["min_relative_slack"] = samples.empty() ? 0.0 : worst;
  r.measured["failures"] = failures;
  r.pass = !samples.empty() && failures == 0;
  return r;
}

CheckResult check_equivariance(double random_difference, double symmetric_difference, const Tolerances& tol) {
  CheckResult r = make("equivariance", "g1(t) = f* g2(t)", tol.equivariance);
  r.measured["random_rotation"] = random_difference;
  r.measured["symmetry_rotation"] = symmetric_difference;
  r.measured["symmetry_tolerance"] = tol.equivariance_exact;
  r.pass = random_difference <= tol.equivariance && symmetric_difference <= tol.equivariance_exact;
  return r;
}

}  // namespace convexflow
