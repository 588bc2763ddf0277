#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <vector>

#include "cetsp/clustering.hpp"
#include "cetsp/geometry.hpp"
#include "cetsp/spatial_index.hpp"
#include "cetsp/trace.hpp"

namespace cetsp {

using NodeId = std::size_t;
using PointId = std::uint64_t;
inline constexpr PointId kNoPoint = std::numeric_limits<PointId>::max();

struct TourPoint {
  Point2 position;
  std::vector<NodeId> covered;  // circles this point currently satisfies
  int energy = 0;
  std::uint64_t insert_count = 0;
  PointId prev = kNoPoint;
  PointId next = kNoPoint;
  bool live = false;
  bool reset_pending = false;
};

// Circular doubly-linked tour over an append-only arena, mirrored by two
// spatial indexes: one over point positions, one over the segment that
// starts at each point (point -> point.next; a single-point tour holds the
// degenerate segment (p, p)). An assignment table maps cluster nodes to the
// point covering them.
class Tour {
 public:
  explicit Tour(std::size_t node_count);

  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }

  TourPoint& point(PointId id) { return arena_[id]; }
  const TourPoint& point(PointId id) const { return arena_[id]; }
  PointId assigned(NodeId node) const { return assignment_[node]; }

  // Bootstrap: the first point of an empty tour.
  PointId insert_first(Point2 pos, NodeId node);
  // New point covering `node` spliced between `after` and its successor.
  PointId splice_after(PointId after, Point2 pos, NodeId node);
  void attach(PointId id, NodeId node);
  void detach(PointId id, NodeId node);
  // Unlinks a point whose covered list has been emptied. Requires size >= 2.
  void remove_point(PointId id);
  void move_point(PointId id, Point2 pos);

  std::vector<SpatialIndex::Hit> nearest_points(Point2 q,
                                                std::size_t k) const;

  struct SegmentHit {
    PointId start = kNoPoint;  // segment runs start -> start.next
    Segment geometry;
    double distance = 0.0;
  };
  std::vector<SegmentHit> nearest_segments(Point2 q, std::size_t k) const;

  // Sum of consecutive point distances, closing edge included.
  double length() const;
  // Live points in tour order, starting from the lowest live id.
  std::vector<PointId> order() const;

  // Verifies list, index, and assignment consistency; throws on violation.
  void check_consistent() const;

 private:
  void add_segment_entry(PointId id);
  void drop_segment_entry(PointId id);

  std::deque<TourPoint> arena_;
  SpatialIndex points_;
  SpatialIndex segments_;
  std::vector<PointId> assignment_;
  std::size_t size_ = 0;
};

struct BuildParams {
  std::size_t k_segments = 6;
  bool newton = false;
  // Total circles the reinsertion mechanism may re-run; 0 means unlimited.
  std::uint64_t reinsertion_budget = 0;
  bool budget_limited = true;
  double eps_geo = 1e-9;
};

struct BuildCounters {
  std::uint64_t insertions_initial = 0;  // seeding + expansion insertions
  std::uint64_t insertions_total = 0;    // including reinsertion re-runs
  std::uint64_t zero_cost = 0;
  std::uint64_t reopts = 0;
  std::uint64_t circles_reinserted = 0;
  std::uint64_t reinsertion_events = 0;
  std::uint64_t reinsertion_events_dropped = 0;
};

struct InsertOutcome {
  PointId point = kNoPoint;
  bool zero_cost = false;
  double delta = 0.0;
};

// Builds a tour for a cluster tree: seeds the root proxy's center, then
// expands nodes in decreasing merge distance, replacing each proxy by its
// two children until only input circles remain covered.
class TourBuilder {
 public:
  TourBuilder(const ClusterTree& tree, const BuildParams& params,
              TraceSink* trace = nullptr);

  void run();

  // Stepwise interface.
  void seed_root();
  bool expansion_pending() const { return !heap_.empty(); }
  void expand_next();

  void expand_node(NodeId node);
  // One circle insertion: zero-cost attach when an existing point already
  // lies in the disk, otherwise a new point on the cheapest of the k nearest
  // segments. Throws std::logic_error on an empty tour.
  InsertOutcome insert_node(NodeId node, bool reinsertion = false);

  // Pops pending reinsertion events (stack order) until none remain. No-op
  // when invoked re-entrantly from an insertion the drain itself triggered.
  void drain_resets();

  Tour& tour() { return tour_; }
  const Tour& tour() const { return tour_; }
  const ClusterTree& tree() const { return tree_; }
  const BuildParams& params() const { return params_; }
  const BuildCounters& counters() const { return counters_; }

  void queue_reset(PointId id);

 private:
  friend struct TourBuilderTestAccess;

  struct ExpansionEntry {
    double distance;
    NodeId node;
    bool operator<(const ExpansionEntry& o) const {
      if (distance != o.distance) return distance < o.distance;
      return node > o.node;  // ties: earlier-created node first
    }
  };

  const ClusterTree& tree_;
  BuildParams params_;
  TraceSink* trace_ = nullptr;
  Tour tour_;
  std::priority_queue<ExpansionEntry> heap_;
  std::vector<PointId> pending_resets_;
  bool draining_ = false;
  bool seeded_ = false;
  BuildCounters counters_;
};

}  // namespace cetsp
