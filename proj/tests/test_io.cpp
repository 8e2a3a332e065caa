#include <doctest.h>

#include <sstream>

#include "convexflow/discretization.hpp"
#include "convexflow/error.hpp"
#include "convexflow/io.hpp"
#include "convexflow/study.hpp"
#include "fixtures.hpp"

using namespace convexflow;

TEST_CASE("doubles round-trip through text") {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("hash") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("a").size() == 16);
}

TEST_CASE("points") {
  std::istringstream in("# comment\n1 2 3\n\n4 5 6  # trailing\n");
  const auto p = read_points(in);
  REQUIRE(p.size() == 2);
  CHECK(p[1] == Vec3(4, 5, 6));
  std::istringstream bad("1 2\n");
  CHECK_THROWS_AS(read_points(bad), Error);
}

TEST_CASE("body round-trip") {
  const ConvexBody cube = fixtures::cube();
  std::ostringstream out;
  write_body(out, cube, "abc");
  std::istringstream in(out.str());
  CHECK(read_config_hash(in) == "abc");
  in.seekg(0);
  const ConvexBody back = read_body(in);
  CHECK(back.vertices() == cube.vertices());
  CHECK(back.facets() == cube.facets());
}

TEST_CASE("field round-trip is exact") {
  const Mat3 r = Eigen::AngleAxisd(0.4, Vec3::UnitY()).toRotationMatrix();
  const SupportField f = margin_repair(heat_mollify(project_support(fixtures::cube(), 8, 0, r), 0.1));
  std::ostringstream out;
  write_field(out, f);
  std::istringstream in(out.str());
  const SupportField g = read_field(in);
  CHECK(g.coefficients == f.coefficients);
  CHECK(g.frame == f.frame);
  CHECK(g.margin == f.margin);
  CHECK(g.shift == f.shift);
  CHECK(g.lmax == f.lmax);
  CHECK(g.quadrature_level == f.quadrature_level);
}

TEST_CASE("checkpoint resume reproduces an uninterrupted run") {
  const SphereMesh m = icosphere(3);
  const RadialField radial = ellipsoid_radial(m, Vec3(1.0, 1.0, 1.5));
  const FlowState s = init_flow(embed(radial, m));
  RunOptions opts;
  opts.t_target = 0.05;
  const auto full = adaptive_run(s, opts);
  RunOptions first = opts;
  first.max_steps = 7;
  const auto half = adaptive_run(s, first);
  std::ostringstream out;
  write_checkpoint(out, half.first, embedded_positions(radial, m), "h");
  std::istringstream in(out.str());
  const Checkpoint cp = read_checkpoint(in);
  CHECK(cp.hash == "h");
  CHECK(cp.state.time == half.first.time);
  CHECK(cp.state.mesh.conformal() == half.first.mesh.conformal());
  const auto resumed = adaptive_run(cp.state, opts);
  CHECK(resumed.first.time == full.first.time);
  CHECK(resumed.first.step_count == full.first.step_count);
  CHECK(resumed.first.mesh.conformal() == full.first.mesh.conformal());
}

TEST_CASE("trace round-trip") {
  const SphereMesh m = icosphere(2);
  RunOptions opts;
  opts.t_target = 0.02;
  opts.record_times = uniform_record_times(opts.t_target, 3);
  opts.panel = [](const IntrinsicMesh& mesh) { return std::vector<double>{mesh.lengths()[0], mesh.lengths()[1]}; };
  const auto run = adaptive_run(init_flow(embed(constant_radial(m, 1.0), m)), opts);
  std::ostringstream out;
  write_trace_csv(out, run.second, "cafe");
  std::istringstream in(out.str());
  std::string hash;
  const FlowTrace back = read_trace_csv(in, &hash);
  CHECK(hash == "cafe");
  REQUIRE(back.rows.size() == run.second.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    CHECK(back.rows[i].time == run.second.rows[i].time);
    CHECK(back.rows[i].area == run.second.rows[i].area);
    CHECK(back.rows[i].panel == run.second.rows[i].panel);
  }
  CHECK(back.initial_area == doctest::Approx(run.second.initial_area).epsilon(1e-12));
  std::istringstream broken("# config x\ntime,minK\n0,1,2\n");
  CHECK_THROWS_AS(read_trace_csv(broken), Error);
}

TEST_CASE("panel and pairs") {
  DistancePanel p;
  p.pairs = {{0, 5}, {3, 2}};
  p.values = {1.25, 0.1};
  p.method = DistanceMethod::Dijkstra;
  std::ostringstream out;
  write_panel_csv(out, p);
  std::istringstream in(out.str());
  const DistancePanel q = read_panel_csv(in);
  CHECK(q.pairs == p.pairs);
  CHECK(q.values == p.values);
  CHECK(q.method == DistanceMethod::Dijkstra);
  std::istringstream pairs("0 1\n# skip\n2,3\n");
  CHECK(read_pairs(pairs) == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
}

TEST_CASE("run configuration") {
  const RunConfig cfg = RunConfig::parse(
      "input = cube.xyz  # body\n"
      "level = 4\n"
      "epsilon = 0.3, 0.1\n"
      "companion_epsilon = 0.1\n"
      "tol_distance = 0.2\n"
      "special_pairs = false\n");
  CHECK(cfg.input == "cube.xyz");
  CHECK(cfg.level == 4);
  CHECK(cfg.epsilon == std::vector<double>{0.3, 0.1});
  CHECK(cfg.tol.distance == 0.2);
  CHECK_FALSE(cfg.special_pairs);
  CHECK(RunConfig::parse(cfg.canonical()).canonical() == cfg.canonical());
  RunConfig moved = cfg;
  moved.input = "elsewhere.xyz";
  moved.output = "out";
  CHECK(moved.hash() == cfg.hash());
  moved.cfl = 0.05;
  CHECK(moved.hash() != cfg.hash());

  CHECK_THROWS_AS(RunConfig::parse("level = four\n"), Error);
  CHECK_THROWS_AS(RunConfig::parse("bogus = 1\n"), Error);
  CHECK_THROWS_AS(RunConfig::parse("epsilon = 0.1, 0.2\n"), Error);
  CHECK_THROWS_AS(RunConfig::parse("cfl = 1.5\n"), Error);
  CHECK_THROWS_AS(RunConfig::parse("level = 9\n"), Error);
  CHECK_THROWS_AS(RunConfig::parse("no equals sign\n"), Error);
}
