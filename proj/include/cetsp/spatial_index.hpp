#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "cetsp/geometry.hpp"

namespace cetsp {

struct Rect {
  Point2 lo;
  Point2 hi;

  static Rect of_point(Point2 p) { return {p, p}; }
  static Rect of_circle(const Circle& c) {
    return {{c.center.x - c.radius, c.center.y - c.radius},
            {c.center.x + c.radius, c.center.y + c.radius}};
  }
  static Rect of_segment(const Segment& s);

  // Closed containment: boundary contact counts, identical rects contain
  // each other.
  bool contains(const Rect& other) const {
    return lo.x <= other.lo.x && lo.y <= other.lo.y && hi.x >= other.hi.x &&
           hi.y >= other.hi.y;
  }
};

// Distance from q to the closest point of the rectangle; 0 when q is inside.
double rect_distance(const Rect& r, Point2 q);

// Dynamic rectangle index keyed by caller-chosen ids. All query results are
// deterministic: equal distances are broken by ascending id.
class SpatialIndex {
 public:
  using Id = std::uint64_t;

  struct Hit {
    Id id = 0;
    double distance = 0.0;
  };

  SpatialIndex();
  ~SpatialIndex();
  SpatialIndex(SpatialIndex&&) noexcept;
  SpatialIndex& operator=(SpatialIndex&&) noexcept;
  SpatialIndex(const SpatialIndex&) = delete;
  SpatialIndex& operator=(const SpatialIndex&) = delete;

  // Throws std::invalid_argument when id is already live.
  void insert(Id id, const Rect& rect);
  // Throws std::invalid_argument when id is not live.
  void remove(Id id);

  bool contains(Id id) const;
  const Rect& rect_of(Id id) const;  // throws when id is not live
  std::size_t size() const;

  // Up to k entries with minimal point-to-rectangle distance, sorted by
  // (distance, id).
  std::vector<Hit> knn_rects(Point2 q, std::size_t k) const;

  // The k nearest entries by rectangle distance, re-ranked by the exact
  // distance from q to the segment each entry stands for. Hit::distance is
  // the exact segment distance; order is (segment distance, id).
  std::vector<Hit> knn_segments(
      Point2 q, std::size_t k,
      const std::function<Segment(Id)>& segment_of) const;

  // Ids of all live rects that fully cover `rect`, ascending.
  std::vector<Id> covering_rects(const Rect& rect) const;

  // Snapshot of live entries, ascending by id. Intended for checks.
  std::vector<std::pair<Id, Rect>> entries() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cetsp
