#include "convexflow/study.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "convexflow/error.hpp"
#include "convexflow/geodesics.hpp"
#include "convexflow/io.hpp"
#include "convexflow/unfolding.hpp"

namespace convexflow {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(Errc::ParseError, "key '" + key + "' expects a number, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw Error(Errc::ParseError, "key '" + key + "' expects an integer, got '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(Errc::ParseError, "key '" + key + "' expects a boolean, got '" + v + "'");
}

std::map<std::string, double Tolerances::*> tolerance_keys() {
  return {{"tol_gauss_bonnet", &Tolerances::gauss_bonnet},
          {"tol_area_law", &Tolerances::area_law},
          {"tol_monotone", &Tolerances::monotone},
          {"tol_positivity", &Tolerances::positivity},
          {"tol_upper_bound", &Tolerances::upper_bound},
          {"tol_distance", &Tolerances::distance},
          {"tol_slack", &Tolerances::slack},
          {"tol_stability", &Tolerances::stability},
          {"tol_closed_form", &Tolerances::closed_form},
          {"tol_lemma", &Tolerances::lemma},
          {"tol_alexandrov", &Tolerances::alexandrov},
          {"tol_equivariance", &Tolerances::equivariance},
          {"tol_equivariance_exact", &Tolerances::equivariance_exact}};
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::ParseError, "expected 'key = value': '" + line + "'");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  static const auto tols = tolerance_keys();
  if (auto it = tols.find(key); it != tols.end()) {
    tol.*(it->second) = parse_double(key, value);
  } else if (key == "input") {
    input = value;
  } else if (key == "output") {
    output = value;
  } else if (key == "reference") {
    reference = value;
  } else if (key == "radius") {
    radius = parse_double(key, value);
  } else if (key == "level") {
    level = static_cast<int>(parse_int(key, value));
  } else if (key == "companion_level") {
    companion_level = static_cast<int>(parse_int(key, value));
  } else if (key == "companion_epsilon") {
    companion_epsilon = parse_double(key, value);
  } else if (key == "lmax") {
    lmax = static_cast<int>(parse_int(key, value));
  } else if (key == "quadrature_level") {
    quadrature_level = static_cast<int>(parse_int(key, value));
  } else if (key == "epsilon") {
    epsilon.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) epsilon.push_back(parse_double(key, trim(item)));
  } else if (key == "cfl") {
    cfl = parse_double(key, value);
  } else if (key == "t_target_fraction") {
    t_target_fraction = parse_double(key, value);
  } else if (key == "record_count") {
    record_count = static_cast<int>(parse_int(key, value));
  } else if (key == "panel_size") {
    panel_size = static_cast<int>(parse_int(key, value));
  } else if (key == "panel_seed") {
    panel_seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "panel_min_angle") {
    panel_min_angle = parse_double(key, value);
  } else if (key == "special_pairs") {
    special_pairs = parse_bool(key, value);
  } else if (key == "mu_min") {
    mu_min = parse_double(key, value);
  } else if (key == "alexandrov_samples") {
    alexandrov_samples = static_cast<int>(parse_int(key, value));
  } else if (key == "alexandrov_seed") {
    alexandrov_seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "jobs") {
    jobs = static_cast<int>(parse_int(key, value));
  } else {
    throw Error(Errc::ParseError, "unknown config key '" + key + "'");
  }
}

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::ParseError, "invalid config: " + what); };
  if (epsilon.empty()) fail("epsilon list is empty");
  for (std::size_t i = 0; i < epsilon.size(); ++i) {
    if (!(epsilon[i] > 0.0)) fail("epsilon values must be positive");
    if (i > 0 && !(epsilon[i] < epsilon[i - 1])) fail("epsilon list must be strictly decreasing");
  }
  if (!(t_target_fraction > 0.0 && t_target_fraction < 1.0)) fail("t_target_fraction must lie in (0, 1)");
  if (epsilon.front() >= 1.0) fail("schedule times epsilon * A0 / (8 pi) must precede extinction");
  if (panel_size < 2) fail("panel_size must be at least 2");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl must lie in (0, 1]");
  if (level < 0 || level > 8) fail("level must lie in [0, 8]");
  if (companion_level > 8) fail("companion_level must not exceed 8");
  if (lmax < 0) fail("lmax must be non-negative");
  if (record_count < 1) fail("record_count must be positive");
  if (jobs < 1) fail("jobs must be positive");
  if (reference != "unfolding" && reference != "round" && reference != "fast_marching")
    fail("reference must be unfolding, round or fast_marching");
  if (companion_level >= 0 && std::find(epsilon.begin(), epsilon.end(), companion_epsilon) == epsilon.end())
    fail("companion_epsilon must be one of the epsilon values");
}

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "reference = " << reference << "\n"
      << "radius = " << format_double(radius) << "\n"
      << "level = " << level << "\n"
      << "companion_level = " << companion_level << "\n"
      << "companion_epsilon = " << format_double(companion_epsilon) << "\n"
      << "lmax = " << lmax << "\n"
      << "quadrature_level = " << quadrature_level << "\n"
      << "epsilon = " << join(epsilon) << "\n"
      << "cfl = " << format_double(cfl) << "\n"
      << "t_target_fraction = " << format_double(t_target_fraction) << "\n"
      << "record_count = " << record_count << "\n"
      << "panel_size = " << panel_size << "\n"
      << "panel_seed = " << panel_seed << "\n"
      << "panel_min_angle = " << format_double(panel_min_angle) << "\n"
      << "special_pairs = " << (special_pairs ? "true" : "false") << "\n"
      << "mu_min = " << format_double(mu_min) << "\n"
      << "alexandrov_samples = " << alexandrov_samples << "\n"
      << "alexandrov_seed = " << alexandrov_seed << "\n";
  for (const auto& [key, member] : tolerance_keys()) out << key << " = " << format_double(tol.*member) << "\n";
  return out.str();
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical()); }

int RunConfig::panel_level() const { return companion_level >= 0 ? std::min(level, companion_level) : level; }

PreparedSurface prepare_surface(const ConvexBody& body, const RunConfig& cfg, double epsilon, int level,
                                const Mat3& frame, const SphereMesh* sphere) {
  PreparedSurface s;
  const SupportField projected = project_support(body, cfg.lmax, cfg.quadrature_level, frame);
  s.field = margin_repair(heat_mollify(projected, epsilon), cfg.mu_min);
  s.sphere = sphere ? *sphere : icosphere(level);
  s.radial = sample_radial(s.field, s.sphere);
  s.positions = embedded_positions(s.radial, s.sphere);
  s.mesh = embed(s.radial, s.sphere);
  s.hausdorff = hausdorff_distance(s.field, body);
  return s;
}

FlowRun run_epsilon(const ConvexBody& body, const RunConfig& cfg, double epsilon, int level,
                    const std::vector<std::pair<int, int>>& pairs) {
  PreparedSurface s = prepare_surface(body, cfg, epsilon, level);
  FlowRun run;
  run.epsilon = epsilon;
  run.level = level;
  run.hausdorff = s.hausdorff;
  run.field_margin = s.field.margin;
  run.field_shift = s.field.shift;
  run.lemma = reciprocal_gradient_bound(s.radial, s.sphere, 2);
  run.positions = s.positions;

  FlowState state = init_flow(std::move(s.mesh));
  const double extinction = state.extinction_time();
  run.schedule_time = epsilon * extinction;
  run.t_target = std::max(cfg.t_target_fraction * extinction, run.schedule_time);

  const std::vector<double> round = round_edge_lengths(s.sphere);
  std::vector<double> equiv;
  DistancePanel panel;
  panel.pairs = pairs;
  RunOptions opts;
  opts.t_target = run.t_target;
  opts.cfl = cfg.cfl;
  opts.record_times = uniform_record_times(run.t_target, cfg.record_count);
  opts.record_times.push_back(run.schedule_time);
  opts.panel = [&](const IntrinsicMesh& mesh) {
    equiv.push_back(metric_equivalence_constant(mesh, round));
    return panel_eval(mesh, panel, cfg.jobs).values;
  };
  auto [final_state, trace] = adaptive_run(std::move(state), opts);
  run.final_state = std::move(final_state);
  run.trace = std::move(trace);
  for (std::size_t r = 0; r < run.trace.rows.size(); ++r) {
    if (run.trace.rows[r].time > 0.0) run.c_equiv = std::max(run.c_equiv, equiv[r]);
    if (run.trace.rows[r].time == run.schedule_time) run.schedule_panel = run.trace.rows[r].panel;
  }
  run.k_bar = curvature_bound_fit(run.trace);
  return run;
}

std::vector<std::pair<int, int>> study_pairs(const RunConfig& cfg) {
  const SphereMesh mesh = icosphere(cfg.panel_level());
  std::vector<std::pair<int, int>> pairs = make_panel_pairs(mesh, cfg.panel_size, cfg.panel_seed, cfg.panel_min_angle);
  if (cfg.special_pairs) {
    const int ex = nearest_direction(mesh, Vec3::UnitX()), ey = nearest_direction(mesh, Vec3::UnitY());
    const int mx = nearest_direction(mesh, -Vec3::UnitX()), my = nearest_direction(mesh, -Vec3::UnitY());
    const int cp = nearest_direction(mesh, Vec3(1, 1, 1).normalized());
    const int cm = nearest_direction(mesh, Vec3(-1, -1, -1).normalized());
    pairs.emplace_back(ex, ey);
    pairs.emplace_back(mx, my);
    pairs.emplace_back(cp, cm);
  }
  return pairs;
}

std::vector<double> reference_distances(const ConvexBody& body, const RunConfig& cfg,
                                        const std::vector<std::pair<int, int>>& pairs) {
  const SphereMesh mesh = icosphere(cfg.panel_level());
  std::vector<double> out;
  if (cfg.reference == "unfolding") {
    std::vector<std::pair<Vec3, Vec3>> points;
    auto hit = [&](int v) { return body.center() + body.radial(mesh.directions[v]) * mesh.directions[v]; };
    for (const auto& [a, b] : pairs) points.emplace_back(hit(a), hit(b));
    return unfold_polyhedron(body, points);
  }
  if (cfg.reference == "round") {
    double r = cfg.radius;
    if (!(r > 0.0)) {
      for (const auto& d : mesh.directions) r += body.radial(d);
      r /= static_cast<double>(mesh.directions.size());
    }
    for (const auto& [a, b] : pairs)
      out.push_back(r * std::acos(std::clamp(mesh.directions[a].dot(mesh.directions[b]), -1.0, 1.0)));
    return out;
  }
  const SphereMesh fine = icosphere(std::min(8, cfg.level + 2));
  const IntrinsicMesh surface = embed(sample_radial(body, fine), fine);
  DistancePanel panel;
  panel.pairs = pairs;
  return panel_eval(surface, panel, cfg.jobs).values;
}

StudyResult run_study(const ConvexBody& body, const RunConfig& cfg) {
  cfg.validate();
  StudyResult res;
  res.pairs = study_pairs(cfg);
  res.reference = reference_distances(body, cfg, res.pairs);
  for (double eps : cfg.epsilon) res.runs.push_back(run_epsilon(body, cfg, eps, cfg.level, res.pairs));
  if (cfg.companion_level >= 0)
    res.companion = run_epsilon(body, cfg, cfg.companion_epsilon, cfg.companion_level, res.pairs);

  const Tolerances& tol = cfg.tol;
  VerificationReport& rep = res.report;
  std::vector<const FlowTrace*> traces;
  for (const auto& r : res.runs) traces.push_back(&r.trace);
  if (res.companion) traces.push_back(&res.companion->trace);

  rep.checks.push_back(check_gauss_bonnet(traces, tol));
  rep.checks.push_back(check_area_law(traces, tol));
  rep.checks.push_back(check_area_decreasing(traces));
  rep.checks.push_back(check_edge_monotonicity(traces, tol));
  rep.checks.push_back(check_u_monotonicity(traces, tol));
  rep.checks.push_back(check_positivity(traces, tol));

  const FlowRun* fine = &res.runs.back();
  for (const auto& r : res.runs)
    if (r.epsilon == cfg.companion_epsilon) fine = &r;
  const FlowRun* coarse = res.companion ? &*res.companion : nullptr;
  rep.checks.push_back(check_distance_sandwich(fine->trace, coarse ? &coarse->trace : nullptr, tol, &rep.constants));
  rep.checks.push_back(
      check_metric_equivalence(fine->c_equiv, coarse ? coarse->c_equiv : 0.0, coarse != nullptr, tol, &rep.constants));

  std::vector<double> eps, times, dev_schedule, dev_initial, hausdorff, kbar, combined, vsq;
  std::vector<std::string> labels;
  for (const auto& r : res.runs) {
    eps.push_back(r.epsilon);
    times.push_back(r.schedule_time);
    dev_schedule.push_back(panel_deviation(r.schedule_panel, res.reference));
    dev_initial.push_back(panel_deviation(r.trace.rows.front().panel, res.reference));
    hausdorff.push_back(r.hausdorff);
    kbar.push_back(r.k_bar);
    labels.push_back("epsilon=" + format_double(r.epsilon));
    combined.push_back(r.lemma.max_combined);
    vsq.push_back(r.lemma.max_vsq);
  }
  rep.checks.push_back(check_initial_convergence(eps, times, dev_schedule, tol));
  rep.checks.push_back(check_d_equals_dhu(times.back(), dev_schedule.back(), tol));
  rep.checks.push_back(check_hausdorff_controls_intrinsic(eps, hausdorff, dev_initial, tol));
  rep.checks.push_back(check_curvature_bound(eps, kbar, tol, &rep.constants));
  rep.checks.push_back(check_reciprocal_gradient(labels, combined, vsq, tol));
  if (cfg.alexandrov_samples > 0)
    rep.checks.push_back(
        check_alexandrov(alexandrov_samples(fine->final_state.mesh, cfg.alexandrov_samples, cfg.alexandrov_seed), tol));

  auto& md = rep.metadata;
  md["config_hash"] = cfg.hash();
  md["level"] = cfg.level;
  md["companion_level"] = cfg.companion_level;
  md["lmax"] = cfg.lmax;
  md["epsilon"] = cfg.epsilon;
  md["cfl"] = cfg.cfl;
  md["t_target_fraction"] = cfg.t_target_fraction;
  md["panel_seed"] = cfg.panel_seed;
  md["reference"] = cfg.reference;
  nlohmann::ordered_json pj = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < res.pairs.size(); ++p)
    pj.push_back({{"src", res.pairs[p].first}, {"dst", res.pairs[p].second}, {"reference", res.reference[p]}});
  md["panel"] = pj;
  nlohmann::ordered_json rj = nlohmann::ordered_json::array();
  auto describe = [](const FlowRun& r) {
    return nlohmann::ordered_json{{"epsilon", r.epsilon},
                                  {"level", r.level},
                                  {"hausdorff", r.hausdorff},
                                  {"margin", r.field_margin},
                                  {"shift", r.field_shift},
                                  {"t_target", r.t_target},
                                  {"schedule_time", r.schedule_time},
                                  {"accepted_steps", r.trace.accepted_steps},
                                  {"rejections", r.trace.rejections.size()},
                                  {"C_equiv", r.c_equiv},
                                  {"K_bar", r.k_bar}};
  };
  for (const auto& r : res.runs) rj.push_back(describe(r));
  if (res.companion) rj.push_back(describe(*res.companion));
  md["runs"] = rj;
  return res;
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

double equivariance_difference(const ConvexBody& body, const Mat3& rotation, const RunConfig& cfg, double epsilon,
                               int level, bool symmetric) {
  const SphereMesh base_sphere = icosphere(level);
  PreparedSurface a = prepare_surface(body, cfg, epsilon, level, Mat3::Identity(), &base_sphere);
  const ConvexBody turned = transformed(body, rotation, Vec3::Zero());
  const SphereMesh other_sphere = symmetric ? base_sphere : rotated(base_sphere, rotation);
  PreparedSurface b = prepare_surface(turned, cfg, epsilon, level, rotation, &other_sphere);

  const int n = static_cast<int>(base_sphere.directions.size());
  std::vector<int> match(n);
  std::vector<char> taken(n, 0);
  for (int i = 0; i < n; ++i) {
    match[i] = nearest_direction(other_sphere, rotation * base_sphere.directions[i]);
    if (taken[match[i]]) throw Error(Errc::CorrespondenceAmbiguous, "nearest-direction matching is not a bijection");
    taken[match[i]] = 1;
  }

  FlowState sa = init_flow(std::move(a.mesh));
  FlowState sb = init_flow(std::move(b.mesh));
  RunOptions opts;
  opts.cfl = cfg.cfl;
  opts.t_target = cfg.t_target_fraction * sa.extinction_time();
  const FlowState fa = adaptive_run(std::move(sa), opts).first;
  const FlowState fb = adaptive_run(std::move(sb), opts).first;

  std::unordered_map<std::uint64_t, int> edges_b;
  const auto& eb = fb.mesh.topology().edges;
  for (int e = 0; e < static_cast<int>(eb.size()); ++e) edges_b[edge_key(eb[e].v0, eb[e].v1)] = e;
  double worst = 0.0;
  const auto& ea = fa.mesh.topology().edges;
  for (int e = 0; e < static_cast<int>(ea.size()); ++e) {
    const auto it = edges_b.find(edge_key(match[ea[e].v0], match[ea[e].v1]));
    if (it == edges_b.end()) throw Error(Errc::CorrespondenceAmbiguous, "matched vertices do not share an edge");
    const double la = fa.mesh.lengths()[e], lb = fb.mesh.lengths()[it->second];
    worst = std::max(worst, std::abs(la - lb) / la);
  }
  return worst;
}

}  // namespace convexflow
