#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "convexflow/convex_body.hpp"
#include "convexflow/geodesics.hpp"
#include "convexflow/ricci_flow.hpp"
#include "convexflow/smoothing.hpp"

namespace convexflow {

/// 17 significant digits; round-trips every double.
std::string format_double(double value);

/// FNV-1a, 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// Artifacts start with "# config <hash>"; returns "" when absent.
std::string read_config_hash(std::istream& in);

std::vector<Vec3> read_points(std::istream& in);

void write_body(std::ostream& out, const ConvexBody& body, const std::string& hash = "");
/// Rebuilds the hull from the "v" lines.
ConvexBody read_body(std::istream& in);

void write_field(std::ostream& out, const SupportField& field, const std::string& hash = "");
SupportField read_field(std::istream& in);

struct Checkpoint {
  FlowState state;
  std::vector<Vec3> positions;
  std::string hash;
};

/// Base embedding ("v"/"f" lines), conformal factors ("u" lines) and a
/// "t <time> steps <n>" header.
void write_checkpoint(std::ostream& out, const FlowState& state, const std::vector<Vec3>& positions,
                      const std::string& hash = "");
Checkpoint read_checkpoint(std::istream& in);

void write_trace_csv(std::ostream& out, const FlowTrace& trace, const std::string& hash = "");
/// Rows only; per-step extremes are not stored. A0 is taken from the first
/// row through the area law.
FlowTrace read_trace_csv(std::istream& in, std::string* hash = nullptr);

void write_panel_csv(std::ostream& out, const DistancePanel& panel, const std::string& hash = "");
DistancePanel read_panel_csv(std::istream& in);

/// "i j" or "i,j" per line.
std::vector<std::pair<int, int>> read_pairs(std::istream& in);

}  // namespace convexflow
