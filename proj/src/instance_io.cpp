#include "cetsp/instance_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cetsp/random.hpp"

namespace cetsp {

namespace {

// Axis-aligned bounds of the circle extents (center +- r per axis).
struct Bounds {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  double diagonal() const { return std::hypot(width(), height()); }
};

Bounds instance_bounds(const Instance& inst) {
  Bounds b;
  if (inst.circles.empty()) return b;
  b.min_x = b.max_x = inst.circles[0].center.x;
  b.min_y = b.max_y = inst.circles[0].center.y;
  for (const Circle& c : inst.circles) {
    b.min_x = std::min(b.min_x, c.center.x - c.radius);
    b.max_x = std::max(b.max_x, c.center.x + c.radius);
    b.min_y = std::min(b.min_y, c.center.y - c.radius);
    b.max_y = std::max(b.max_y, c.center.y + c.radius);
  }
  return b;
}

bool parse_full_double(const std::string& tok, double& out) {
  const char* s = tok.c_str();
  char* end = nullptr;
  out = std::strtod(s, &end);
  return end == s + tok.size() && end != s;
}

std::string basename_no_ext(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const std::size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base.resize(dot);
  return base;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Instance parse_instance(std::istream& in, double default_radius) {
  Instance inst;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    if (line.compare(pos, 2, "//") == 0) continue;

    std::istringstream row(line.substr(pos));
    std::vector<double> cols;
    std::string tok;
    while (row >> tok) {
      double v;
      if (!parse_full_double(tok, v)) {
        throw std::runtime_error("instance parse error at line " +
                                 std::to_string(lineno) + ": non-numeric token '" +
                                 tok + "'");
      }
      cols.push_back(v);
    }
    if (cols.size() < 2 || cols.size() > 4) {
      throw std::runtime_error("instance parse error at line " +
                               std::to_string(lineno) + ": expected 2-4 columns, got " +
                               std::to_string(cols.size()));
    }
    // Columns are x y [z] [r]; z is carried by some datasets and ignored here.
    const double r = cols.size() == 4 ? cols[3] : default_radius;
    inst.circles.push_back(Circle{{cols[0], cols[1]}, r});
  }
  if (inst.circles.empty()) {
    throw std::runtime_error("instance parse error: no data rows");
  }
  return inst;
}

Instance load_instance(const std::string& path, double default_radius) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  Instance inst = parse_instance(in, default_radius);
  inst.name = basename_no_ext(path);
  return inst;
}

void write_instance(std::ostream& out, const Instance& inst) {
  for (const Circle& c : inst.circles) {
    out << format_double(c.center.x) << ' ' << format_double(c.center.y)
        << " 0 " << format_double(c.radius) << '\n';
  }
}

void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_instance(out, inst);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Instance gen_random(std::size_t n, double extent, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_random: n must be >= 1");
  if (!(extent > 0.0)) throw std::invalid_argument("gen_random: extent must be > 0");
  RandomSource rng(seed);
  Instance inst;
  inst.name = "random_" + std::to_string(n) + "_" + std::to_string(seed);
  inst.circles.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(-extent, extent);
    const double y = rng.uniform(-extent, extent);
    const double r = rng.uniform(0.01 * extent, 0.02 * extent);
    inst.circles.push_back(Circle{{x, y}, r});
  }
  return inst;
}

Instance gen_structured(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_structured: n must be >= 1");
  RandomSource rng(seed);
  Instance inst;
  inst.name = "structured_" + std::to_string(n) + "_" + std::to_string(seed);
  inst.circles.reserve(n);
  const std::size_t m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double x = static_cast<double>(j) + rng.uniform(-0.1, 0.1);
      const double y = static_cast<double>(i) + rng.uniform(-0.1, 0.1);
      const double r = rng.uniform(0.2, 0.5);
      inst.circles.push_back(Circle{{x, y}, r});
    }
  }
  const double span = m > 1 ? static_cast<double>(m - 1) : 1.0;
  for (std::size_t i = m * m; i < n; ++i) {
    const double x = rng.uniform(0.0, span);
    const double y = rng.uniform(0.0, span);
    const double r = rng.uniform(0.2, 0.5);
    inst.circles.push_back(Circle{{x, y}, r});
  }
  return inst;
}

double reconstruct_radius(const std::vector<Point2>& centers,
                          const std::vector<Point2>& tour) {
  if (centers.empty() || tour.empty()) {
    throw std::invalid_argument("reconstruct_radius: empty point list");
  }
  double worst = 0.0;
  for (const Point2& c : centers) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& p : tour) best = std::min(best, distance(p, c));
    worst = std::max(worst, best);
  }
  return worst;
}

double tour_length(const std::vector<Point2>& tour) {
  if (tour.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < tour.size(); ++i) {
    total += distance(tour[i], tour[(i + 1) % tour.size()]);
  }
  return total;
}

ValidationReport validate(const Instance& inst, const Solution& sol, double eps) {
  ValidationReport report;
  if (eps <= 0.0) eps = 1e-6 * instance_bounds(inst).diagonal();

  // First assignment of a circle wins; the solver never double-assigns.
  constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> assigned_to(inst.circles.size(), kUnassigned);
  for (std::size_t pi = 0; pi < sol.points.size(); ++pi) {
    for (const std::size_t ci : sol.points[pi].covered) {
      if (ci < assigned_to.size() && assigned_to[ci] == kUnassigned) {
        assigned_to[ci] = pi;
      }
    }
  }

  for (std::size_t ci = 0; ci < inst.circles.size(); ++ci) {
    const Circle& c = inst.circles[ci];
    if (assigned_to[ci] == kUnassigned) {
      report.feasible = false;
      report.violations.push_back(
          Violation{ci, std::numeric_limits<double>::infinity(), false});
      continue;
    }
    const double d = distance(sol.points[assigned_to[ci]].position, c.center);
    if (d > c.radius + eps) {
      report.feasible = false;
      report.violations.push_back(Violation{ci, d, true});
      report.max_violation = std::max(report.max_violation, d - c.radius);
    }
  }

  std::vector<Point2> positions;
  positions.reserve(sol.points.size());
  for (const SolutionPoint& p : sol.points) positions.push_back(p.position);
  report.recomputed_length = tour_length(positions);
  const double scale = std::max(1.0, std::abs(report.recomputed_length));
  report.length_consistent =
      std::abs(sol.length - report.recomputed_length) <= 1e-9 * scale;
  return report;
}

void emit_svg(std::ostream& out, const Instance& inst, const Solution& sol) {
  Bounds b = instance_bounds(inst);
  for (const SolutionPoint& p : sol.points) {
    b.min_x = std::min(b.min_x, p.position.x);
    b.max_x = std::max(b.max_x, p.position.x);
    b.min_y = std::min(b.min_y, p.position.y);
    b.max_y = std::max(b.max_y, p.position.y);
  }
  const double pad = std::max(0.05 * std::max(b.width(), b.height()), 1e-3);
  const double vx = b.min_x - pad;
  const double vy = b.min_y - pad;
  const double vw = b.width() + 2 * pad;
  const double vh = b.height() + 2 * pad;
  const double stroke = 0.002 * std::max(vw, vh);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << format_double(vx) << ' ' << format_double(vy) << ' '
      << format_double(vw) << ' ' << format_double(vh) << "\">\n";
  // Instance y grows upward, SVG y grows downward: mirror about the
  // viewport's horizontal midline so the figure is not upside down.
  out << "<g transform=\"translate(0 " << format_double(2 * vy + vh)
      << ") scale(1 -1)\">\n";
  for (const Circle& c : inst.circles) {
    out << "<circle cx=\"" << format_double(c.center.x) << "\" cy=\""
        << format_double(c.center.y) << "\" r=\""
        << format_double(std::max(c.radius, 0.25 * stroke))
        << "\" fill=\"none\" stroke=\"#4477aa\" stroke-width=\""
        << format_double(stroke) << "\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#cc3311\" stroke-width=\""
      << format_double(1.5 * stroke) << "\" points=\"";
  for (const SolutionPoint& p : sol.points) {
    out << format_double(p.position.x) << ',' << format_double(p.position.y) << ' ';
  }
  if (!sol.points.empty()) {
    // Repeat the first point to close the tour (degenerate for one point).
    out << format_double(sol.points[0].position.x) << ','
        << format_double(sol.points[0].position.y);
  }
  out << "\"/>\n</g>\n</svg>\n";
}

void write_solution(std::ostream& out, const Solution& sol) {
  out << "cetsp-solution 1\n";
  out << "instance " << sol.instance_name << '\n';
  out << "seed " << sol.seed << '\n';
  out << "params " << sol.params << '\n';
  out << "wall_ms " << sol.wall_ms << '\n';
  out << "length " << format_double(sol.length) << '\n';
  out << "points " << sol.points.size() << '\n';
  for (const SolutionPoint& p : sol.points) {
    out << "p " << format_double(p.position.x) << ' '
        << format_double(p.position.y) << ' ' << p.covered.size();
    for (const std::size_t ci : p.covered) out << ' ' << ci;
    out << '\n';
  }
}

void save_solution(const std::string& path, const Solution& sol) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_solution(out, sol);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

[[noreturn]] void solution_error(const std::string& field, const std::string& why) {
  throw std::runtime_error("solution parse error at field '" + field + "': " + why);
}

// Reads the next line and strips the expected "<field> " prefix, returning
// the remainder (which may be empty for text fields).
std::string take_field(std::istream& in, const std::string& field) {
  std::string line;
  if (!std::getline(in, line)) solution_error(field, "missing line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line == field) return "";
  if (line.compare(0, field.size() + 1, field + " ") != 0) {
    solution_error(field, "expected '" + field + " ...', got '" + line + "'");
  }
  return line.substr(field.size() + 1);
}

std::uint64_t parse_u64(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing garbage");
    return v;
  } catch (const std::exception&) {
    solution_error(field, "not an unsigned integer: '" + text + "'");
  }
}

double parse_f64(const std::string& field, const std::string& text) {
  double v;
  if (!parse_full_double(text, v)) solution_error(field, "not a number: '" + text + "'");
  return v;
}

}  // namespace

Solution read_solution(std::istream& in, std::vector<std::string>* warnings) {
  const std::string header = take_field(in, "cetsp-solution");
  if (header != "1") solution_error("cetsp-solution", "unsupported version '" + header + "'");

  Solution sol;
  sol.instance_name = take_field(in, "instance");
  sol.seed = parse_u64("seed", take_field(in, "seed"));
  sol.params = take_field(in, "params");
  sol.wall_ms = parse_u64("wall_ms", take_field(in, "wall_ms"));
  sol.length = parse_f64("length", take_field(in, "length"));
  const std::uint64_t count = parse_u64("points", take_field(in, "points"));

  sol.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::string field = "p[" + std::to_string(i) + "]";
    std::string line;
    if (!std::getline(in, line)) solution_error(field, "missing line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream row(line);
    std::string tag, xs, ys, ks;
    if (!(row >> tag >> xs >> ys >> ks) || tag != "p") {
      solution_error(field, "expected 'p x y k ...', got '" + line + "'");
    }
    SolutionPoint p;
    p.position.x = parse_f64(field + ".x", xs);
    p.position.y = parse_f64(field + ".y", ys);
    const std::uint64_t k = parse_u64(field + ".covered_count", ks);
    for (std::uint64_t j = 0; j < k; ++j) {
      std::string cs;
      if (!(row >> cs)) solution_error(field + ".covered", "fewer indices than declared");
      p.covered.push_back(parse_u64(field + ".covered", cs));
    }
    std::string extra;
    if (row >> extra) solution_error(field, "trailing token '" + extra + "'");
    sol.points.push_back(std::move(p));
  }

  if (warnings) {
    std::vector<Point2> positions;
    positions.reserve(sol.points.size());
    for (const SolutionPoint& p : sol.points) positions.push_back(p.position);
    const double recomputed = tour_length(positions);
    const double scale = std::max(1.0, std::abs(recomputed));
    if (std::abs(sol.length - recomputed) > 1e-9 * scale) {
      warnings->push_back("length field " + format_double(sol.length) +
                          " disagrees with recomputed tour length " +
                          format_double(recomputed));
    }
  }
  return sol;
}

Solution load_solution(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solution file: " + path);
  return read_solution(in, warnings);
}

}  // namespace cetsp
