#include "cetsp/construction.hpp"

#include <algorithm>
#include <stdexcept>

#include "cetsp/local_opt.hpp"

namespace cetsp {

Tour::Tour(std::size_t node_count) : assignment_(node_count, kNoPoint) {}

void Tour::add_segment_entry(PointId id) {
  const TourPoint& p = arena_[id];
  segments_.insert(id, Rect::of_segment({p.position, arena_[p.next].position}));
}

void Tour::drop_segment_entry(PointId id) { segments_.remove(id); }

PointId Tour::insert_first(Point2 pos, NodeId node) {
  if (size_ != 0) throw std::logic_error("tour: insert_first on non-empty tour");
  const PointId id = arena_.size();
  arena_.push_back(TourPoint{});
  TourPoint& p = arena_[id];
  p.position = pos;
  p.covered.push_back(node);
  p.prev = p.next = id;
  p.live = true;
  assignment_[node] = id;
  points_.insert(id, Rect::of_point(pos));
  add_segment_entry(id);
  size_ = 1;
  return id;
}

PointId Tour::splice_after(PointId after, Point2 pos, NodeId node) {
  const PointId id = arena_.size();
  arena_.push_back(TourPoint{});
  TourPoint& w = arena_[id];
  TourPoint& u = arena_[after];
  const PointId vid = u.next;
  TourPoint& v = arena_[vid];

  w.position = pos;
  w.covered.push_back(node);
  w.live = true;
  w.prev = after;
  w.next = vid;
  u.next = id;
  v.prev = id;
  assignment_[node] = id;

  points_.insert(id, Rect::of_point(pos));
  drop_segment_entry(after);
  add_segment_entry(after);
  add_segment_entry(id);
  ++size_;
  return id;
}

void Tour::attach(PointId id, NodeId node) {
  arena_[id].covered.push_back(node);
  assignment_[node] = id;
}

void Tour::detach(PointId id, NodeId node) {
  auto& covered = arena_[id].covered;
  const auto it = std::find(covered.begin(), covered.end(), node);
  if (it == covered.end()) {
    throw std::logic_error("tour: detach of uncovered node");
  }
  covered.erase(it);
  assignment_[node] = kNoPoint;
}

void Tour::remove_point(PointId id) {
  TourPoint& p = arena_[id];
  if (!p.live) throw std::logic_error("tour: remove of dead point");
  if (!p.covered.empty()) {
    throw std::logic_error("tour: remove of covering point");
  }
  if (size_ < 2) throw std::logic_error("tour: remove of final point");

  const PointId uid = p.prev;
  const PointId vid = p.next;
  drop_segment_entry(uid);
  drop_segment_entry(id);
  points_.remove(id);

  arena_[uid].next = vid;
  arena_[vid].prev = uid;
  p.live = false;
  p.prev = p.next = kNoPoint;
  add_segment_entry(uid);
  --size_;
}

void Tour::move_point(PointId id, Point2 pos) {
  TourPoint& p = arena_[id];
  if (!p.live) throw std::logic_error("tour: move of dead point");
  points_.remove(id);
  drop_segment_entry(id);
  const bool solo = p.prev == id;
  if (!solo) drop_segment_entry(p.prev);
  p.position = pos;
  points_.insert(id, Rect::of_point(pos));
  add_segment_entry(id);
  if (!solo) add_segment_entry(p.prev);
}

std::vector<SpatialIndex::Hit> Tour::nearest_points(Point2 q,
                                                    std::size_t k) const {
  return points_.knn_rects(q, k);
}

std::vector<Tour::SegmentHit> Tour::nearest_segments(Point2 q,
                                                     std::size_t k) const {
  const auto hits = segments_.knn_segments(q, k, [this](SpatialIndex::Id id) {
    const TourPoint& p = arena_[id];
    return Segment{p.position, arena_[p.next].position};
  });
  std::vector<SegmentHit> out;
  out.reserve(hits.size());
  for (const auto& h : hits) {
    const TourPoint& p = arena_[h.id];
    out.push_back(SegmentHit{h.id, {p.position, arena_[p.next].position},
                             h.distance});
  }
  return out;
}

double Tour::length() const {
  if (size_ < 2) return 0.0;
  double total = 0.0;
  const auto ids = order();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Point2 a = arena_[ids[i]].position;
    const Point2 b = arena_[ids[(i + 1) % ids.size()]].position;
    total += distance(a, b);
  }
  return total;
}

std::vector<PointId> Tour::order() const {
  std::vector<PointId> out;
  out.reserve(size_);
  PointId start = kNoPoint;
  for (PointId id = 0; id < arena_.size(); ++id) {
    if (arena_[id].live) {
      start = id;
      break;
    }
  }
  if (start == kNoPoint) return out;
  PointId cur = start;
  do {
    out.push_back(cur);
    cur = arena_[cur].next;
  } while (cur != start && out.size() <= size_);
  return out;
}

void Tour::check_consistent() const {
  const auto ids = order();
  if (ids.size() != size_) throw std::logic_error("tour: broken link cycle");

  std::size_t live = 0;
  for (PointId id = 0; id < arena_.size(); ++id) {
    if (arena_[id].live) ++live;
  }
  if (live != size_) throw std::logic_error("tour: live count mismatch");

  if (points_.size() != size_ || segments_.size() != size_) {
    throw std::logic_error("tour: index size mismatch");
  }
  for (const PointId id : ids) {
    const TourPoint& p = arena_[id];
    if (arena_[p.next].prev != id || arena_[p.prev].next != id) {
      throw std::logic_error("tour: asymmetric links");
    }
    const Rect pr = points_.rect_of(id);
    if (!(pr.lo == p.position && pr.hi == p.position)) {
      throw std::logic_error("tour: stale point entry");
    }
    const Rect sr = segments_.rect_of(id);
    const Rect expect = Rect::of_segment({p.position, arena_[p.next].position});
    if (!(sr.lo == expect.lo && sr.hi == expect.hi)) {
      throw std::logic_error("tour: stale segment entry");
    }
  }
  for (NodeId node = 0; node < assignment_.size(); ++node) {
    const PointId id = assignment_[node];
    if (id == kNoPoint) continue;
    const auto& covered = arena_[id].covered;
    if (!arena_[id].live ||
        std::find(covered.begin(), covered.end(), node) == covered.end()) {
      throw std::logic_error("tour: stale assignment");
    }
  }
}

TourBuilder::TourBuilder(const ClusterTree& tree, const BuildParams& params,
                         TraceSink* trace)
    : tree_(tree), params_(params), trace_(trace), tour_(tree.nodes.size()) {}

void TourBuilder::queue_reset(PointId id) {
  TourPoint& p = tour_.point(id);
  if (p.reset_pending) return;
  p.reset_pending = true;
  pending_resets_.push_back(id);
}

InsertOutcome TourBuilder::insert_node(NodeId node, bool reinsertion) {
  if (tour_.empty()) {
    throw std::logic_error("insert_circle: empty tour");
  }
  const Circle& c = tree_.nodes[node].circle;

  ++counters_.insertions_total;
  if (!reinsertion) ++counters_.insertions_initial;

  InsertOutcome out;
  const auto near = tour_.nearest_points(c.center, 1);
  if (!near.empty() && near[0].distance <= c.radius + params_.eps_geo) {
    out.point = near[0].id;
    out.zero_cost = true;
    tour_.attach(out.point, node);
    ++counters_.zero_cost;
  } else {
    const auto segs = tour_.nearest_segments(c.center, params_.k_segments);
    const Tour::SegmentHit* best_seg = nullptr;
    InsertionCandidate best;
    for (const auto& sh : segs) {
      const InsertionCandidate cand = alhazen_bisection(sh.geometry, c);
      if (best_seg == nullptr || cand.delta_len < best.delta_len) {
        best_seg = &sh;
        best = cand;
      }
    }
    if (best_seg == nullptr) {
      throw std::logic_error("insert_circle: no candidate segment");
    }
    Point2 pos = best.position;
    if (params_.newton && best.delta_len > 0.0) {
      pos = newton_refine(best_seg->geometry, c, pos);
    }
    out.point = tour_.splice_after(best_seg->start, pos, node);
    out.delta = best.delta_len;
  }

  TourPoint& tp = tour_.point(out.point);
  tp.insert_count += 1;
  for (const PointId drained : local_opt::on_insert_energy(tour_, out.point)) {
    queue_reset(drained);
  }
  if (local_opt::maybe_reoptimize(*this, out.point)) ++counters_.reopts;

  if (trace_) trace_->insert(node, out.point, out.zero_cost, out.delta);

  drain_resets();
  return out;
}

void TourBuilder::drain_resets() {
  if (draining_) return;
  draining_ = true;
  while (!pending_resets_.empty()) {
    const PointId id = pending_resets_.back();
    pending_resets_.pop_back();
    TourPoint& p = tour_.point(id);
    p.reset_pending = false;
    // Re-validate at processing time: the point may have died with its
    // event queued, or a later insertion may have recharged it.
    if (!p.live || p.energy > 0) continue;
    if (tour_.size() < 2) continue;
    const auto w = static_cast<std::uint64_t>(p.covered.size());
    if (params_.budget_limited &&
        counters_.circles_reinserted + w > params_.reinsertion_budget) {
      ++counters_.reinsertion_events_dropped;
      continue;
    }
    ++counters_.reinsertion_events;
    counters_.circles_reinserted += w;
    if (trace_) trace_->reinsert(id, p.covered.size());
    local_opt::reinsert_point(*this, id);
  }
  draining_ = false;
}

void TourBuilder::expand_node(NodeId node) {
  const ClusterNode& nd = tree_.nodes[node];
  if (nd.is_leaf()) throw std::logic_error("expand_node: leaf");
  const PointId pid = tour_.assigned(node);
  if (pid == kNoPoint) throw std::logic_error("expand_node: unassigned node");

  const auto left = static_cast<NodeId>(nd.left);
  const auto right = static_cast<NodeId>(nd.right);

  bool removed = false;
  if (tour_.size() == 1) {
    // The proxy's point is the whole tour; keep it during the children's
    // insertions so they can claim its position zero-cost, then retire it.
    insert_node(left);
    insert_node(right);
    tour_.detach(pid, node);
    if (tour_.point(pid).covered.empty()) {
      tour_.remove_point(pid);
      removed = true;
    }
  } else {
    tour_.detach(pid, node);
    if (tour_.point(pid).covered.empty()) {
      tour_.remove_point(pid);
      removed = true;
    }
    insert_node(left);
    insert_node(right);
  }

  if (trace_) trace_->expand(node, removed);

  if (!tree_.nodes[left].is_leaf()) {
    heap_.push(ExpansionEntry{tree_.nodes[left].merge_distance, left});
  }
  if (!tree_.nodes[right].is_leaf()) {
    heap_.push(ExpansionEntry{tree_.nodes[right].merge_distance, right});
  }
}

void TourBuilder::seed_root() {
  if (seeded_) throw std::logic_error("tour builder: already seeded");
  seeded_ = true;
  const NodeId root = tree_.root();
  tour_.insert_first(tree_.nodes[root].circle.center, root);
  ++counters_.insertions_total;
  ++counters_.insertions_initial;
  TourPoint& p = tour_.point(tour_.assigned(root));
  p.insert_count = 1;
  p.energy = local_opt::kInsertGain;
  if (!tree_.nodes[root].is_leaf()) {
    heap_.push(ExpansionEntry{tree_.nodes[root].merge_distance, root});
  }
}

void TourBuilder::expand_next() {
  const ExpansionEntry top = heap_.top();
  heap_.pop();
  expand_node(top.node);
}

void TourBuilder::run() {
  seed_root();
  while (expansion_pending()) expand_next();
}

}  // namespace cetsp
