#include "convexflow/io.hpp"

#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "convexflow/error.hpp"

namespace convexflow {

namespace {

bool content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_error(const std::string& what, const std::string& line) {
  throw Error(Errc::ParseError, what + ": '" + line + "'");
}

void write_hash(std::ostream& out, const std::string& hash) {
  if (!hash.empty()) out << "# config " << hash << "\n";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    parse_error("not a number", s);
  }
  if (s.find_first_not_of(" \t\r", used) != std::string::npos) parse_error("not a number", s);
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_config_hash(std::istream& in) {
  const auto pos = in.tellg();
  std::string line;
  std::string hash;
  if (std::getline(in, line) && line.rfind("# config ", 0) == 0) {
    hash = line.substr(9);
    while (!hash.empty() && (hash.back() == '\r' || hash.back() == ' ')) hash.pop_back();
  } else {
    in.clear();
    in.seekg(pos);
  }
  return hash;
}

std::vector<Vec3> read_points(std::istream& in) {
  std::vector<Vec3> pts;
  std::string line;
  while (content_line(in, line)) {
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x >> y >> z)) parse_error("expected 'x y z'", line);
    pts.emplace_back(x, y, z);
  }
  return pts;
}

void write_body(std::ostream& out, const ConvexBody& body, const std::string& hash) {
  write_hash(out, hash);
  for (const auto& v : body.vertices())
    out << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << "\n";
  for (const auto& f : body.facets()) out << "f " << f[0] << ' ' << f[1] << ' ' << f[2] << "\n";
}

ConvexBody read_body(std::istream& in) {
  std::vector<Vec3> pts;
  std::string line;
  while (content_line(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) parse_error("bad vertex line", line);
      pts.emplace_back(x, y, z);
    } else if (tag != "f") {
      parse_error("unknown record", line);
    }
  }
  return convex_hull(pts);
}

void write_field(std::ostream& out, const SupportField& field, const std::string& hash) {
  write_hash(out, hash);
  out << "lmax " << field.lmax << "\n";
  out << "quadrature_level " << field.quadrature_level << "\n";
  out << "center " << format_double(field.center.x()) << ' ' << format_double(field.center.y()) << ' '
      << format_double(field.center.z()) << "\n";
  out << "frame";
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out << ' ' << format_double(field.frame(r, c));
  out << "\n";
  out << "margin " << format_double(field.margin) << "\n";
  out << "shift " << format_double(field.shift) << "\n";
  out << "reconstruction_error " << format_double(field.reconstruction_error) << "\n";
  for (int l = 0; l <= field.lmax; ++l)
    for (int m = -l; m <= l; ++m)
      out << l << ' ' << m << ' ' << format_double(field.coefficients[ShBasis::index(l, m)]) << "\n";
}

SupportField read_field(std::istream& in) {
  SupportField f;
  f.lmax = -1;
  std::string line;
  while (content_line(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "lmax") {
      ss >> f.lmax;
      f.coefficients.assign((f.lmax + 1) * (f.lmax + 1), 0.0);
    } else if (tag == "quadrature_level") {
      ss >> f.quadrature_level;
    } else if (tag == "center") {
      ss >> f.center.x() >> f.center.y() >> f.center.z();
    } else if (tag == "frame") {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) ss >> f.frame(r, c);
    } else if (tag == "margin") {
      ss >> f.margin;
    } else if (tag == "shift") {
      ss >> f.shift;
    } else if (tag == "reconstruction_error") {
      ss >> f.reconstruction_error;
    } else {
      std::istringstream cs(line);
      int l, m;
      double v;
      if (!(cs >> l >> m >> v) || f.lmax < 0 || l > f.lmax || std::abs(m) > l) parse_error("bad coefficient", line);
      f.coefficients[ShBasis::index(l, m)] = v;
      continue;
    }
    if (!ss) parse_error("bad field header", line);
  }
  if (f.lmax < 0) throw Error(Errc::ParseError, "missing lmax");
  if (f.quadrature_level == 0) f.quadrature_level = default_quadrature_level(f.lmax);
  return f;
}

void write_checkpoint(std::ostream& out, const FlowState& state, const std::vector<Vec3>& positions,
                      const std::string& hash) {
  write_hash(out, hash);
  out << "t " << format_double(state.time) << " steps " << state.step_count << "\n";
  for (const auto& p : positions)
    out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << "\n";
  for (const auto& t : state.mesh.topology().triangles) out << "f " << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
  const auto& u = state.mesh.conformal();
  for (std::size_t i = 0; i < u.size(); ++i) out << "u " << i << ' ' << format_double(u[i]) << "\n";
}

Checkpoint read_checkpoint(std::istream& in) {
  Checkpoint ck;
  ck.hash = read_config_hash(in);
  std::vector<Tri> tris;
  std::vector<std::pair<int, double>> us;
  double time = 0.0;
  long steps = 0;
  bool header = false;
  std::string line;
  while (content_line(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "t") {
      std::string word;
      if (!(ss >> time >> word >> steps) || word != "steps") parse_error("bad checkpoint header", line);
      header = true;
    } else if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) parse_error("bad vertex line", line);
      ck.positions.emplace_back(x, y, z);
    } else if (tag == "f") {
      Tri t;
      if (!(ss >> t[0] >> t[1] >> t[2])) parse_error("bad face line", line);
      tris.push_back(t);
    } else if (tag == "u") {
      int i;
      double v;
      if (!(ss >> i >> v)) parse_error("bad conformal line", line);
      us.emplace_back(i, v);
    } else {
      parse_error("unknown record", line);
    }
  }
  if (!header) throw Error(Errc::ParseError, "missing 't <time> steps <n>' header");
  const int nv = static_cast<int>(ck.positions.size());
  for (const auto& t : tris)
    for (int v : t)
      if (v < 0 || v >= nv) throw Error(Errc::ParseError, "face index out of range");
  auto topo = std::make_shared<const Topology>(Topology::build(nv, std::move(tris)));
  IntrinsicMesh mesh = IntrinsicMesh::from_positions(topo, ck.positions);
  ck.state = init_flow(mesh);
  std::vector<double> u(nv, 0.0);
  for (const auto& [i, v] : us) {
    if (i < 0 || i >= nv) throw Error(Errc::ParseError, "conformal index out of range");
    u[i] = v;
  }
  ck.state.mesh.set_conformal(std::move(u));
  ck.state.time = time;
  ck.state.step_count = steps;
  return ck;
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace, const std::string& hash) {
  write_hash(out, hash);
  const std::size_t panel = trace.rows.empty() ? 0 : trace.rows.front().panel.size();
  out << "time,minK,maxK,area,minU,maxU,minMargin";
  for (std::size_t p = 0; p < panel; ++p) out << ",d_" << p;
  out << "\n";
  for (const auto& r : trace.rows) {
    out << format_double(r.time) << ',' << format_double(r.min_k) << ',' << format_double(r.max_k) << ','
        << format_double(r.area) << ',' << format_double(r.min_u) << ',' << format_double(r.max_u) << ','
        << format_double(r.min_margin);
    for (double d : r.panel) out << ',' << format_double(d);
    out << "\n";
  }
}

FlowTrace read_trace_csv(std::istream& in, std::string* hash) {
  const std::string h = read_config_hash(in);
  if (hash) *hash = h;
  std::string line;
  if (!content_line(in, line)) throw Error(Errc::ParseError, "empty trace");
  const auto header = split_csv(line);
  if (header.size() < 7 || header[0] != "time" || header[3] != "area") parse_error("bad trace header", line);
  FlowTrace trace;
  while (content_line(in, line)) {
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) parse_error("column count mismatch", line);
    TraceRow r;
    r.time = to_double(cells[0]);
    r.min_k = to_double(cells[1]);
    r.max_k = to_double(cells[2]);
    r.area = to_double(cells[3]);
    r.min_u = to_double(cells[4]);
    r.max_u = to_double(cells[5]);
    r.min_margin = to_double(cells[6]);
    for (std::size_t c = 7; c < cells.size(); ++c) r.panel.push_back(to_double(cells[c]));
    r.defect_sum = 4.0 * std::numbers::pi;
    trace.rows.push_back(std::move(r));
  }
  if (trace.rows.empty()) throw Error(Errc::ParseError, "trace has no rows");
  trace.initial_area = trace.rows.front().area + 8.0 * std::numbers::pi * trace.rows.front().time;
  trace.max_length_ratio = 1.0;
  trace.min_curvature_ratio = 1.0;
  for (const auto& r : trace.rows) trace.min_curvature_ratio = std::min(trace.min_curvature_ratio, r.min_k / r.max_k);
  return trace;
}

void write_panel_csv(std::ostream& out, const DistancePanel& panel, const std::string& hash) {
  write_hash(out, hash);
  out << "src,dst,value,method\n";
  for (std::size_t p = 0; p < panel.pairs.size(); ++p)
    out << panel.pairs[p].first << ',' << panel.pairs[p].second << ','
        << format_double(p < panel.values.size() ? panel.values[p] : 0.0) << ',' << to_string(panel.method) << "\n";
}

DistancePanel read_panel_csv(std::istream& in) {
  read_config_hash(in);
  DistancePanel panel;
  std::string line;
  if (!content_line(in, line) || line.rfind("src,dst,value,method", 0) != 0) parse_error("bad panel header", line);
  while (content_line(in, line)) {
    const auto cells = split_csv(line);
    if (cells.size() != 4) parse_error("bad panel row", line);
    panel.pairs.emplace_back(std::stoi(cells[0]), std::stoi(cells[1]));
    panel.values.push_back(to_double(cells[2]));
    const std::string m = cells[3].substr(0, cells[3].find_last_not_of("\r ") + 1);
    panel.method = m == "dijkstra" ? DistanceMethod::Dijkstra
                   : m == "unfolding" ? DistanceMethod::Unfolding
                                      : DistanceMethod::FastMarching;
  }
  return panel;
}

std::vector<std::pair<int, int>> read_pairs(std::istream& in) {
  std::vector<std::pair<int, int>> out;
  std::string line;
  while (content_line(in, line)) {
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    int a, b;
    if (!(ss >> a >> b)) parse_error("expected a vertex pair", line);
    out.emplace_back(a, b);
  }
  return out;
}

}  // namespace convexflow
