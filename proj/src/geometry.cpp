#include "cetsp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cetsp {

double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }

double norm(Point2 p) { return std::hypot(p.x, p.y); }

double distance(Point2 a, Point2 b) { return norm(a - b); }

double effective_distance(const Circle& c1, const Circle& c2) {
  // Grouping the radii keeps the value bitwise symmetric in its arguments.
  return distance(c1.center, c2.center) - (c1.radius + c2.radius);
}

Circle proxy_circle(const Circle& c1, const Circle& c2, RandomSource& rng) {
  const double r1 = c1.radius;
  const double r2 = c2.radius;
  const double d = distance(c1.center, c2.center);

  // Containment (boundary contact included): the smaller disk already
  // implies the larger one, so it stands in for the pair unchanged.
  if (d + std::min(r1, r2) <= std::max(r1, r2)) {
    return r1 <= r2 ? c1 : c2;
  }

  // d > 0 from here on: d == 0 always lands in the containment branch.
  const Point2 u = (1.0 / d) * (c2.center - c1.center);
  const Point2 e1 = c1.center + r1 * u;
  const Point2 e2 = c2.center - r2 * u;
  const Point2 mid = 0.5 * (e1 + e2);

  if (d >= r1 + r2) return {mid, 0.0};

  const double depth = 0.5 * (r1 + r2 - d);
  const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, r1 * r1 - a * a));
  return {mid, rng.uniform(std::min(depth, h), std::max(depth, h))};
}

namespace {

Point2 closest_point_on_segment(const Segment& seg, Point2 q) {
  const Point2 ab = seg.b - seg.a;
  const double len_sq = dot(ab, ab);
  if (len_sq <= 0.0) return seg.a;
  const double t = std::clamp(dot(q - seg.a, ab) / len_sq, 0.0, 1.0);
  return seg.a + t * ab;
}

}  // namespace

double segment_point_distance(const Segment& seg, Point2 q) {
  return distance(closest_point_on_segment(seg, q), q);
}

InsertionCandidate alhazen_bisection(const Segment& seg, const Circle& circle) {
  const Point2 o = circle.center;
  const double r = circle.radius;
  const double ab = seg.length();

  if (ab == 0.0) {
    const double d = distance(seg.a, o);
    if (d <= r) return {seg.a, 0.0};
    const Point2 p = o + (r / d) * (seg.a - o);
    return {p, 2.0 * (d - r)};
  }

  const Point2 cp = closest_point_on_segment(seg, o);
  if (distance(cp, o) <= r) return {cp, 0.0};

  // Both endpoints are strictly outside the disk. Take the boundary point
  // where the bisector of angle a-o-b exits the circle.
  const Point2 va = seg.a - o;
  const Point2 vb = seg.b - o;
  const Point2 da = (1.0 / norm(va)) * va;
  const Point2 db = (1.0 / norm(vb)) * vb;
  Point2 bis = da + db;
  const double bl = norm(bis);
  const Point2 dir = bl > 1e-12 ? (1.0 / bl) * bis : da;
  const Point2 p = o + r * dir;
  const double delta = distance(seg.a, p) + distance(p, seg.b) - ab;
  return {p, std::max(delta, 0.0)};
}

Point2 newton_refine(const Segment& seg, const Circle& circle, Point2 p0) {
  const Point2 o = circle.center;
  const double r = circle.radius;
  if (!(r > 0.0)) return p0;

  const auto boundary = [&](double phi) -> Point2 {
    return {o.x + r * std::cos(phi), o.y + r * std::sin(phi)};
  };
  // Value and first two derivatives of f(phi) = |A - X(phi)| + |B - X(phi)|.
  const auto eval = [&](double phi, double& val, double& d1, double& d2) {
    const Point2 x = boundary(phi);
    const Point2 xp{-r * std::sin(phi), r * std::cos(phi)};
    const Point2 xpp{-r * std::cos(phi), -r * std::sin(phi)};
    val = d1 = d2 = 0.0;
    for (const Point2 e : {seg.a, seg.b}) {
      const Point2 u = x - e;
      const double n = norm(u);
      if (n <= 0.0) {
        val = d1 = d2 = std::numeric_limits<double>::quiet_NaN();
        return;
      }
      const double un = dot(u, xp);
      val += n;
      d1 += un / n;
      d2 += (dot(xp, xp) + dot(u, xpp)) / n - (un * un) / (n * n * n);
    }
  };

  const double phi0 = std::atan2(p0.y - o.y, p0.x - o.x);
  double v0, g0, h0;
  eval(phi0, v0, g0, h0);
  if (!std::isfinite(g0) || !std::isfinite(h0) || !(h0 > 0.0)) return p0;

  const double phi1 = phi0 - g0 / h0;
  double v1, g1, h1;
  eval(phi1, v1, g1, h1);
  if (!std::isfinite(v1) || v1 > v0) return p0;
  return boundary(phi1);
}

Point2 detour_gradient(Point2 a, Point2 b, Point2 p) {
  Point2 g{0.0, 0.0};
  const double na = distance(p, a);
  const double nb = distance(p, b);
  if (na > 0.0) g = g + (1.0 / na) * (p - a);
  if (nb > 0.0) g = g + (1.0 / nb) * (p - b);
  return g;
}

Point2 reoptimize_point(Point2 a, Point2 b, Point2 p,
                        std::span<const Circle> disks) {
  // Step 1: if the segment ab passes through the common intersection of all
  // disks, any shared parameter interval gives a detour-free placement.
  const Point2 ab = b - a;
  const double ab_sq = dot(ab, ab);
  if (ab_sq > 0.0) {
    double t_lo = 0.0;
    double t_hi = 1.0;
    bool feasible = true;
    for (const Circle& c : disks) {
      // |a + t*ab - center|^2 <= r^2 as a quadratic in t.
      const Point2 w = a - c.center;
      const double B = dot(w, ab);
      const double C = dot(w, w) - c.radius * c.radius;
      const double disc = B * B - ab_sq * C;
      if (disc < 0.0) {
        feasible = false;
        break;
      }
      const double sq = std::sqrt(disc);
      t_lo = std::max(t_lo, (-B - sq) / ab_sq);
      t_hi = std::min(t_hi, (-B + sq) / ab_sq);
      if (t_lo > t_hi) {
        feasible = false;
        break;
      }
    }
    if (feasible) return a + (0.5 * (t_lo + t_hi)) * ab;
  } else {
    bool inside_all = true;
    for (const Circle& c : disks) {
      if (!c.contains(a)) {
        inside_all = false;
        break;
      }
    }
    if (inside_all) return a;
  }

  // Step 2: descend along -g where g is the gradient of |pa| + |pb|.
  const Point2 g = detour_gradient(a, b, p);
  const double gn = norm(g);
  if (gn < 1e-15) return p;
  const Point2 dir{-g.x / gn, -g.y / gn};

  // Largest step keeping p inside every disk.
  double t_max = std::numeric_limits<double>::infinity();
  for (const Circle& c : disks) {
    const Point2 w = p - c.center;
    const double s = dot(dir, w);
    const double c0 = dot(w, w) - c.radius * c.radius;
    const double disc = std::max(0.0, s * s - c0);
    t_max = std::min(t_max, std::max(0.0, -s + std::sqrt(disc)));
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) return p;

  // The objective is convex along the ray; cap the step at its minimizer so
  // a full-length move can never overshoot into an increase.
  const auto deriv = [&](double t) {
    const Point2 q = p + t * dir;
    double d = 0.0;
    const double qa = distance(q, a);
    const double qb = distance(q, b);
    if (qa > 0.0) d += dot(dir, q - a) / qa;
    if (qb > 0.0) d += dot(dir, q - b) / qb;
    return d;
  };
  double t = t_max;
  if (deriv(t_max) > 0.0) {
    double lo = 0.0;
    double hi = t_max;
    for (int i = 0; i < 64; ++i) {
      const double mid = 0.5 * (lo + hi);
      (deriv(mid) > 0.0 ? hi : lo) = mid;
    }
    t = lo;
  }
  if (!(t > 0.0)) return p;

  const Point2 q = p + t * dir;
  const double before = distance(p, a) + distance(p, b);
  const double after = distance(q, a) + distance(q, b);
  return after <= before ? q : p;
}

Point2 rotate_about(Point2 p, Point2 pivot, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Point2 v = p - pivot;
  return {pivot.x + c * v.x - s * v.y, pivot.y + s * v.x + c * v.y};
}

Point2 centroid_of_centers(std::span<const Circle> circles) {
  Point2 acc{0.0, 0.0};
  if (circles.empty()) return acc;
  for (const Circle& c : circles) acc = acc + c.center;
  return (1.0 / static_cast<double>(circles.size())) * acc;
}

std::vector<Circle> rotate_instance(std::span<const Circle> circles,
                                    double angle) {
  std::vector<Circle> out;
  out.reserve(circles.size());
  const Point2 pivot = centroid_of_centers(circles);
  for (const Circle& c : circles) {
    out.push_back({rotate_about(c.center, pivot, angle), c.radius});
  }
  return out;
}

}  // namespace cetsp
