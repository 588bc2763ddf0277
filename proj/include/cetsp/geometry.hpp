#pragma once

#include <span>
#include <vector>

#include "cetsp/random.hpp"

namespace cetsp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

double dot(Point2 a, Point2 b);
double norm(Point2 p);
double distance(Point2 a, Point2 b);

struct Circle {
  Point2 center;
  double radius = 0.0;

  // Closed-disk membership with an additive slack.
  bool contains(Point2 p, double eps = 0.0) const {
    return distance(center, p) <= radius + eps;
  }
};

struct Segment {
  Point2 a;
  Point2 b;

  double length() const { return distance(a, b); }
};

// Gap between the two disk boundaries along the center line. Negative when
// the disks overlap; -2 * min(r1, r2) - containment depth when one disk is
// inside the other.
double effective_distance(const Circle& c1, const Circle& c2);

// Stand-in circle for a merged pair.
//  - one disk contains the other: the smaller circle, unchanged;
//  - disjoint disks: midpoint of the boundary gap, radius 0;
//  - overlapping disks: center midway between the boundary crossings of the
//    center line, radius drawn uniformly between the overlap half-depth and
//    the half-height of the lens (whichever ordering makes the interval
//    valid). Draws from rng only in this branch.
Circle proxy_circle(const Circle& c1, const Circle& c2, RandomSource& rng);

struct InsertionCandidate {
  Point2 position;
  double delta_len = 0.0;  // |AP| + |PB| - |AB|
};

// Cheapest point of the disk to visit between the segment endpoints,
// approximated in closed form. If the segment meets the disk the detour is
// zero and a segment point inside the disk is returned; otherwise the
// boundary point where the bisector of angle A-center-B leaves the circle.
// A degenerate segment (a == b) yields the disk point closest to a.
InsertionCandidate alhazen_bisection(const Segment& seg, const Circle& circle);

// One guarded Newton step on the boundary angle minimizing |AP| + |PB|,
// starting from boundary point p0. Returns p0 unchanged whenever the step
// does not improve. Assumes the segment misses the disk.
Point2 newton_refine(const Segment& seg, const Circle& circle, Point2 p0);

// Gradient of the detour |pa| + |pb| with respect to p; a term whose
// distance is zero contributes nothing (subgradient choice).
Point2 detour_gradient(Point2 a, Point2 b, Point2 p);

// Best reachable position for a tour point p between neighbors a and b while
// staying inside every disk. If the segment ab crosses the common
// intersection of the disks, a point of ab inside all of them is returned
// (detour zero). Otherwise p moves against detour_gradient(a, b, p) as far
// as the disks allow without overshooting the one-dimensional minimum.
// Never increases |ap| + |pb|.
Point2 reoptimize_point(Point2 a, Point2 b, Point2 p,
                        std::span<const Circle> disks);

double segment_point_distance(const Segment& seg, Point2 q);

Point2 rotate_about(Point2 p, Point2 pivot, double angle);

Point2 centroid_of_centers(std::span<const Circle> circles);

// Rotates every center by angle around the centroid of the centers; radii
// are unchanged. Empty input stays empty.
std::vector<Circle> rotate_instance(std::span<const Circle> circles,
                                    double angle);

}  // namespace cetsp
