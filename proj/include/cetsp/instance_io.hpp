#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cetsp/geometry.hpp"

namespace cetsp {

struct Instance {
  std::string name;
  std::vector<Circle> circles;
};

// One tour point together with the input circles assigned to it.
struct SolutionPoint {
  Point2 position;
  std::vector<std::size_t> covered;
};

struct Solution {
  std::string instance_name;
  std::vector<SolutionPoint> points;
  double length = 0.0;
  std::uint64_t seed = 0;
  std::string params;
  std::uint64_t wall_ms = 0;
};

// Reads "x y [z] [r]" rows; z is accepted and ignored, a missing r column
// falls back to default_radius. Lines starting with '#' or "//" (after
// leading spaces) and blank lines are skipped. Throws std::runtime_error
// naming the 1-based line of any bad row, or on zero data rows.
Instance parse_instance(std::istream& in, double default_radius = 0.0);
Instance load_instance(const std::string& path, double default_radius = 0.0);

// Writes one "x y 0 r" row per circle.
void write_instance(std::ostream& out, const Instance& inst);
void save_instance(const std::string& path, const Instance& inst);

// Centers uniform in [-L, L]^2, radii uniform in [0.01 L, 0.02 L].
Instance gen_random(std::size_t n, double extent, std::uint64_t seed);
// floor(sqrt(n))^2 grid points with +-0.1 jitter, the rest uniform over the
// grid area; radii uniform in [0.2, 0.5].
Instance gen_structured(std::size_t n, std::uint64_t seed);

// Smallest uniform radius r such that every center has a tour point within r.
double reconstruct_radius(const std::vector<Point2>& centers,
                          const std::vector<Point2>& tour);

struct Violation {
  std::size_t circle = 0;
  double distance = 0.0;  // distance from assigned point to center, or inf if unassigned
  bool assigned = true;
};

struct ValidationReport {
  bool feasible = true;
  std::vector<Violation> violations;
  double max_violation = 0.0;  // max of (distance - radius) over violations
  double recomputed_length = 0.0;
  bool length_consistent = true;
};

// Checks that each circle's assigned tour position lies within radius + eps
// of its center and that the stored length matches the recomputed one to
// 1e-9 relative. eps <= 0 picks the default 1e-6 * bounding-box diagonal.
ValidationReport validate(const Instance& inst, const Solution& sol,
                          double eps = 0.0);

void emit_svg(std::ostream& out, const Instance& inst, const Solution& sol);

void write_solution(std::ostream& out, const Solution& sol);
void save_solution(const std::string& path, const Solution& sol);

// Strict reader for write_solution's format; throws std::runtime_error naming
// the offending field. warnings collects non-fatal notes (currently: stored
// length disagreeing with the recomputed one by > 1e-9 relative).
Solution read_solution(std::istream& in, std::vector<std::string>* warnings = nullptr);
Solution load_solution(const std::string& path,
                       std::vector<std::string>* warnings = nullptr);

double tour_length(const std::vector<Point2>& tour);

// Shared 17-significant-digit float formatting: shortest form that
// round-trips doubles exactly.
std::string format_double(double v);

}  // namespace cetsp
