// Command-line front end: ingest, smooth, flow, verify, distance, unfold.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "convexflow/error.hpp"
#include "convexflow/geodesics.hpp"
#include "convexflow/io.hpp"
#include "convexflow/study.hpp"
#include "convexflow/unfolding.hpp"

namespace fs = std::filesystem;
using namespace convexflow;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kInputError = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::ParseError, "cannot write '" + path.string() + "'");
  out << text;
}

bool starts_with_record(const std::string& text, const std::string& tag) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    return line.rfind(tag, 0) == 0;
  }
  return false;
}

ConvexBody load_body(const std::string& path) {
  const std::string text = slurp(path);
  std::istringstream in(text);
  ConvexBody body = starts_with_record(text, "v ") ? read_body(in) : convex_hull(read_points(in));
  nondegeneracy(body);
  return body;
}

Vec3 parse_point(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  Vec3 p;
  if (!(in >> p.x() >> p.y() >> p.z())) throw Error(Errc::ParseError, "expected 'x,y,z', got '" + s + "'");
  return p;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& spec) {
  std::string t = spec;
  for (char& c : t)
    if (c == ';') c = '\n';
  std::istringstream in(t);
  return read_pairs(in);
}

int input_error(const std::string& msg) {
  std::cerr << msg << "\n";
  return kInputError;
}

struct FlowArgs {
  std::string input;
  std::string out_dir = ".";
  int level = 5;
  double cfl = 0.1;
  double t_fraction = 0.25;
  int records = 8;
  int panel_size = 20;
  std::uint64_t seed = 20240611;
  long max_steps = -1;
};

int cmd_flow(const FlowArgs& a, int jobs) {
  const std::string text = slurp(a.input);
  std::ostringstream params;
  params << "level=" << a.level << " cfl=" << format_double(a.cfl) << " t_fraction=" << format_double(a.t_fraction)
         << " records=" << a.records << " panel_size=" << a.panel_size << " seed=" << a.seed;
  const SphereMesh sphere = icosphere(a.level);
  FlowState state;
  std::vector<Vec3> positions;
  std::string hash;
  std::istringstream in(text);
  if (starts_with_record(text, "t ")) {
    Checkpoint ck = read_checkpoint(in);
    if (ck.state.mesh.num_vertices() != static_cast<int>(sphere.directions.size()))
      throw Error(Errc::ArtifactMismatch, "checkpoint does not match --level");
    state = std::move(ck.state);
    positions = std::move(ck.positions);
    hash = ck.hash;
  } else {
    const std::string field_hash = read_config_hash(in);
    const SupportField field = read_field(in);
    const RadialField radial = sample_radial(field, sphere);
    positions = embedded_positions(radial, sphere);
    state = init_flow(embed(radial, sphere));
    hash = fnv1a_hex((field_hash.empty() ? fnv1a_hex(text) : field_hash) + "\n" + params.str());
  }

  DistancePanel panel;
  panel.pairs = make_panel_pairs(sphere, a.panel_size, a.seed, std::numbers::pi / 6);
  RunOptions opts;
  opts.cfl = a.cfl;
  opts.t_target = a.t_fraction * state.extinction_time();
  opts.record_times = uniform_record_times(opts.t_target, a.records);
  opts.max_steps = a.max_steps;
  opts.panel = [&](const IntrinsicMesh& mesh) { return panel_eval(mesh, panel, jobs).values; };
  auto [final_state, trace] = adaptive_run(std::move(state), opts);

  const fs::path dir(a.out_dir);
  std::ostringstream tr, ck, rej;
  write_trace_csv(tr, trace, hash);
  write_checkpoint(ck, final_state, positions, hash);
  rej << "# config " << hash << "\ntime,dt,margin\n";
  for (const auto& r : trace.rejections)
    rej << format_double(r.time) << ',' << format_double(r.dt) << ',' << format_double(r.margin) << "\n";
  spill(dir / "trace.csv", tr.str());
  spill(dir / "checkpoint.txt", ck.str());
  spill(dir / "rejections.csv", rej.str());
  std::cout << "time " << format_double(final_state.time) << " steps " << final_state.step_count << " rejections "
            << trace.rejections.size() << " area_residual " << area_law_check(trace) << "\n";
  for (const auto& r : trace.rejections)
    std::cerr << "step rejected at t=" << r.time << " dt=" << r.dt << " margin=" << r.margin << "\n";
  return kPass;
}

int verify_traces(const std::vector<std::string>& paths, const std::string& out) {
  std::vector<FlowTrace> traces;
  std::string hash;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw Error(Errc::ParseError, "cannot open '" + p + "'");
    std::string h;
    traces.push_back(read_trace_csv(in, &h));
    if (&p != &paths.front() && h != hash)
      throw Error(Errc::ArtifactMismatch, "trace '" + p + "' carries config " + h + ", expected " + hash);
    hash = h;
  }
  std::vector<const FlowTrace*> ptrs;
  for (const auto& t : traces) ptrs.push_back(&t);
  Tolerances tol;
  VerificationReport rep;
  rep.metadata["config_hash"] = hash;
  rep.metadata["traces"] = paths;
  rep.checks.push_back(check_area_law(ptrs, tol));
  rep.checks.push_back(check_area_decreasing(ptrs));
  rep.checks.push_back(check_positivity(ptrs, tol));
  bool has_panel = !traces.empty();
  for (const auto& t : traces) has_panel = has_panel && !t.rows.front().panel.empty();
  if (has_panel) {
    double excess = -1.0;
    for (const auto& t : traces) excess = std::max(excess, fit_sandwich(t).upper_excess);
    CheckResult r;
    r.name = "distance_upper_bound";
    r.anchor = "d_g(t)(p,q) <= exp(c1 t) d(p,q), c1 = 0";
    r.tolerance = tol.upper_bound;
    r.measured["upper_excess"] = excess;
    r.pass = excess <= tol.upper_bound;
    rep.checks.push_back(r);
  }
  const std::string text = emit_report(rep);
  if (!out.empty()) spill(fs::path(out), text);
  std::cout << text;
  return rep.all_pass() ? kPass : kCheckFailure;
}

int verify_config(const std::string& config_path, const std::string& out_override, int jobs) {
  RunConfig cfg = RunConfig::parse(slurp(config_path));
  if (!out_override.empty()) cfg.output = out_override;
  if (jobs > 1) cfg.jobs = jobs;
  if (cfg.input.empty()) throw Error(Errc::ParseError, "config has no 'input'");
  fs::path input(cfg.input);
  if (input.is_relative()) input = fs::path(config_path).parent_path() / input;
  const ConvexBody body = load_body(input.string());
  const StudyResult res = run_study(body, cfg);
  const std::string hash = cfg.hash();
  const std::string report = emit_report(res.report);
  if (!cfg.output.empty()) {
    const fs::path dir(cfg.output);
    spill(dir / "report.json", report);
    for (std::size_t k = 0; k < res.runs.size(); ++k) {
      std::ostringstream tr;
      write_trace_csv(tr, res.runs[k].trace, hash);
      spill(dir / ("trace_eps" + std::to_string(k) + ".csv"), tr.str());
    }
    if (res.companion) {
      std::ostringstream tr;
      write_trace_csv(tr, res.companion->trace, hash);
      spill(dir / "trace_companion.csv", tr.str());
    }
    DistancePanel ref;
    ref.pairs = res.pairs;
    ref.values = res.reference;
    ref.method = cfg.reference == "unfolding" ? DistanceMethod::Unfolding : DistanceMethod::FastMarching;
    std::ostringstream pc;
    write_panel_csv(pc, ref, hash);
    spill(dir / "panel_reference.csv", pc.str());
  }
  std::cout << report;
  return res.report.all_pass() ? kPass : kCheckFailure;
}

struct DistanceArgs {
  std::string input;
  std::string pairs;
  std::string pairs_file;
  std::string method;
  int level = -1;
  int max_faces = 6;
};

int cmd_distance(const DistanceArgs& a, int jobs) {
  std::vector<std::pair<int, int>> pairs;
  if (!a.pairs_file.empty()) {
    std::ifstream in(a.pairs_file);
    if (!in) throw Error(Errc::ParseError, "cannot open '" + a.pairs_file + "'");
    pairs = read_pairs(in);
  }
  if (!a.pairs.empty()) {
    const auto more = parse_pairs(a.pairs);
    pairs.insert(pairs.end(), more.begin(), more.end());
  }
  if (pairs.empty()) throw Error(Errc::ParseError, "no pairs given");

  const std::string text = slurp(a.input);
  DistancePanel panel;
  panel.pairs = pairs;
  std::istringstream in(text);
  IntrinsicMesh mesh;
  std::string method = a.method;
  std::string hash;
  if (starts_with_record(text, "t ")) {
    Checkpoint ck = read_checkpoint(in);
    hash = ck.hash;
    mesh = std::move(ck.state.mesh);
    if (method.empty()) method = "fast_marching";
    if (method == "unfolding") throw Error(Errc::ParseError, "unfolding needs a polyhedron, not a checkpoint");
  } else {
    const ConvexBody body = load_body(a.input);
    if (method.empty()) method = "unfolding";
    if (method == "unfolding") {
      // Pair indices name hull vertices, or icosphere directions with --level.
      std::vector<Vec3> points;
      if (a.level >= 0) {
        const SphereMesh sphere = icosphere(a.level);
        for (const auto& d : sphere.directions) points.push_back(body.center() + body.radial(d) * d);
      } else {
        points = body.vertices();
      }
      std::vector<std::pair<Vec3, Vec3>> ends;
      for (const auto& [s, t] : pairs) {
        if (s < 0 || t < 0 || s >= static_cast<int>(points.size()) || t >= static_cast<int>(points.size()))
          throw Error(Errc::ParseError, "pair index out of range");
        ends.emplace_back(points[s], points[t]);
      }
      panel.values = unfold_polyhedron(body, ends, a.max_faces);
      panel.method = DistanceMethod::Unfolding;
    } else {
      const SphereMesh sphere = icosphere(a.level >= 0 ? a.level : 5);
      mesh = embed(sample_radial(body, sphere), sphere);
    }
  }
  if (panel.values.empty()) {
    for (const auto& [s, t] : pairs)
      if (s < 0 || t < 0 || s >= mesh.num_vertices() || t >= mesh.num_vertices())
        throw Error(Errc::ParseError, "pair index out of range");
    if (method == "dijkstra") {
      panel.method = DistanceMethod::Dijkstra;
      for (const auto& [s, t] : pairs) panel.values.push_back(dijkstra(mesh, s)[t]);
    } else if (method == "fast_marching") {
      panel = panel_eval(mesh, panel, jobs);
    } else {
      throw Error(Errc::ParseError, "unknown method '" + method + "'");
    }
  }
  write_panel_csv(std::cout, panel, hash);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ricci flow from convex surfaces: smoothing, flow, distances and verification"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker cap for parallel distance evaluation")->check(CLI::PositiveNumber);

  std::string ingest_in, ingest_out;
  double r_min = 1e-6;
  auto* ingest = app.add_subcommand("ingest", "Convex hull of a point file");
  ingest->add_option("points", ingest_in)->required();
  ingest->add_option("-o,--output", ingest_out);
  ingest->add_option("--r-min", r_min, "Degeneracy threshold relative to the circumradius");

  std::string smooth_in, smooth_out;
  int lmax = 24, qlevel = 0;
  double epsilon = 0.1, mu_min = -1.0;
  auto* smooth = app.add_subcommand("smooth", "Mollified support function of a body");
  smooth->add_option("body", smooth_in)->required();
  smooth->add_option("--lmax", lmax);
  smooth->add_option("--epsilon", epsilon)->check(CLI::NonNegativeNumber);
  smooth->add_option("--mu-min", mu_min, "Convexity margin floor; negative selects 1e-3 x mean support");
  smooth->add_option("--quadrature-level", qlevel);
  smooth->add_option("-o,--output", smooth_out);

  FlowArgs fa;
  auto* flow = app.add_subcommand("flow", "Run the flow from a support field or resume a checkpoint");
  flow->add_option("input", fa.input, "Support field file or checkpoint")->required();
  flow->add_option("-o,--output-dir", fa.out_dir);
  flow->add_option("--level", fa.level);
  flow->add_option("--cfl", fa.cfl);
  flow->add_option("--t-fraction", fa.t_fraction, "Target time as a fraction of the extinction time");
  flow->add_option("--records", fa.records);
  flow->add_option("--panel-size", fa.panel_size);
  flow->add_option("--seed", fa.seed);
  flow->add_option("--max-steps", fa.max_steps, "Stop after this many accepted steps");

  std::string config_path, report_out;
  std::vector<std::string> trace_paths;
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  auto* cfg_opt = verify->add_option("--config", config_path, "Study configuration (key = value)");
  auto* trace_opt = verify->add_option("--trace", trace_paths, "Re-check saved trace CSV files");
  cfg_opt->excludes(trace_opt);
  verify->add_option("-o,--output", report_out, "Output directory (config) or report file (traces)");

  DistanceArgs da;
  auto* distance = app.add_subcommand("distance", "Distance panel on a body or checkpoint");
  distance->add_option("input", da.input)->required();
  distance->add_option("--pairs", da.pairs, "Pairs as 'i,j;k,l'");
  distance->add_option("--pairs-file", da.pairs_file);
  distance->add_option("--method", da.method)->check(CLI::IsMember({"fast_marching", "dijkstra", "unfolding"}));
  distance->add_option("--level", da.level, "Icosphere level for body input");
  distance->add_option("--max-faces", da.max_faces);

  std::string unfold_in, from, to;
  int max_faces = 6;
  auto* unfold = app.add_subcommand("unfold", "Polyhedral surface distance between two points");
  unfold->add_option("body", unfold_in)->required();
  unfold->add_option("--from", from)->required();
  unfold->add_option("--to", to)->required();
  unfold->add_option("--max-faces", max_faces);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*ingest) {
      const std::string text = slurp(ingest_in);
      std::istringstream in(text);
      const ConvexBody body = convex_hull(read_points(in));
      const double r = nondegeneracy(body, r_min);
      std::ostringstream out;
      write_body(out, body, fnv1a_hex(text));
      if (ingest_out.empty()) {
        std::cout << out.str();
      } else {
        spill(ingest_out, out.str());
      }
      std::cerr << "vertices " << body.vertices().size() << " facets " << body.facets().size() << " inradius "
                << format_double(r) << "\n";
      return kPass;
    }
    if (*smooth) {
      const std::string text = slurp(smooth_in);
      const ConvexBody body = load_body(smooth_in);
      const SupportField field = margin_repair(heat_mollify(project_support(body, lmax, qlevel), epsilon), mu_min);
      std::ostringstream params;
      params << "lmax=" << lmax << " epsilon=" << format_double(epsilon) << " mu_min=" << format_double(mu_min)
             << " quadrature_level=" << qlevel;
      std::ostringstream out;
      write_field(out, field, fnv1a_hex(text + "\n" + params.str()));
      if (smooth_out.empty()) {
        std::cout << out.str();
      } else {
        spill(smooth_out, out.str());
      }
      std::cerr << "margin " << format_double(field.margin) << " shift " << format_double(field.shift)
                << " hausdorff " << format_double(hausdorff_distance(field, body)) << "\n";
      return kPass;
    }
    if (*flow) return cmd_flow(fa, jobs);
    if (*verify) {
      if (!config_path.empty()) return verify_config(config_path, report_out, jobs);
      if (!trace_paths.empty()) return verify_traces(trace_paths, report_out);
      return input_error("verify needs --config or --trace");
    }
    if (*distance) return cmd_distance(da, jobs);
    if (*unfold) {
      const ConvexBody body = load_body(unfold_in);
      std::cout << format_double(unfold_polyhedron(body, parse_point(from), parse_point(to), max_faces)) << "\n";
      return kPass;
    }
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::DegenerateInput:
      case Errc::Degenerate:
        return input_error(std::string("degenerate input: ") + e.what());
      case Errc::ParseError:
      case Errc::ArtifactMismatch:
      case Errc::QuadratureTooCoarse:
      case Errc::LevelTooLarge:
      case Errc::NoIntersection:
        return input_error(std::string(to_string(e.code())) + ": " + e.what());
      default:
        std::cerr << to_string(e.code()) << ": " << e.what() << "\n";
        return kCheckFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
  return kPass;
}
