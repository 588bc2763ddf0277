#include "cetsp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <stdexcept>

namespace cetsp {

PreprocessResult preprocess(std::span<const Circle> circles,
                            RandomSource& rng) {
  if (circles.empty()) {
    throw std::invalid_argument("preprocess: empty instance");
  }

  PreprocessResult out;
  out.pivot = centroid_of_centers(circles);
  out.rotation = rng.uniform(0.0, 2.0 * std::numbers::pi);

  std::vector<Circle> rotated;
  rotated.reserve(circles.size());
  for (const Circle& c : circles) {
    rotated.push_back({rotate_about(c.center, out.pivot, out.rotation),
                       c.radius});
  }

  const std::size_t n = rotated.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rotated[a].radius != rotated[b].radius) {
      return rotated[a].radius > rotated[b].radius;
    }
    return a < b;
  });

  // Insert in decreasing radius order. Any already-inserted circle whose
  // disk contains the current one is a redundant container: remove it and
  // remember the contained circle as its survivor. Boxes filter candidates,
  // the exact disk test decides.
  SpatialIndex index;
  std::vector<char> removed(n, 0);
  std::vector<std::size_t> survivor_of(n);
  for (std::size_t i = 0; i < n; ++i) survivor_of[i] = i;

  for (const std::size_t i : order) {
    const Rect box = Rect::of_circle(rotated[i]);
    for (const SpatialIndex::Id cand : index.covering_rects(box)) {
      const auto j = static_cast<std::size_t>(cand);
      const double d = distance(rotated[j].center, rotated[i].center);
      if (d + rotated[i].radius <= rotated[j].radius) {
        index.remove(cand);
        removed[j] = 1;
        survivor_of[j] = i;
      }
    }
    index.insert(i, box);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!removed[i]) {
      out.kept.push_back(rotated[i]);
      out.kept_original.push_back(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!removed[i]) continue;
    std::size_t s = survivor_of[i];
    while (removed[s]) s = survivor_of[s];
    out.removed_to_survivor.emplace_back(i, s);
  }
  return out;
}

namespace {

struct HeapEntry {
  double dist;
  std::size_t a;
  std::size_t b;
  std::uint32_t version_a;

  // Min-heap by (dist, a, b); the version never drives ordering decisions,
  // ties on the full pair are impossible within one version.
  bool operator>(const HeapEntry& o) const {
    if (dist != o.dist) return dist > o.dist;
    if (a != o.a) return a > o.a;
    if (b != o.b) return b > o.b;
    return version_a > o.version_a;
  }
};

}  // namespace

struct ClusterBuilder::State {
  std::vector<ClusterNode> nodes;
  std::size_t leaf_count = 0;
  std::size_t merges_done = 0;
  std::size_t k = 8;
  RandomSource* rng = nullptr;
  TraceSink* trace = nullptr;

  SpatialIndex index;
  std::vector<char> live;
  std::vector<std::uint32_t> version;
  std::vector<std::vector<std::pair<double, std::size_t>>> neighbors;
  std::vector<std::set<std::size_t>> listed_by;  // reverse of `neighbors`
  std::priority_queue<HeapEntry, std::vector<HeapEntry>,
                      std::greater<HeapEntry>>
      heap;

  void grow_to(std::size_t count) {
    live.resize(count, 0);
    version.resize(count, 0);
    neighbors.resize(count);
    listed_by.resize(count);
  }

  std::size_t live_count() const { return leaf_count - merges_done; }

  // Rebuilds the candidate list of `id` from the k nearest boxes, re-ranked
  // by exact effective distance, and floods the heap with fresh entries.
  void refresh(std::size_t id) {
    for (const auto& [d, other] : neighbors[id]) listed_by[other].erase(id);
    neighbors[id].clear();

    const auto hits = index.knn_rects(nodes[id].circle.center, k + 1);
    auto& list = neighbors[id];
    for (const auto& h : hits) {
      const auto other = static_cast<std::size_t>(h.id);
      if (other == id) continue;
      if (list.size() == k) break;
      list.emplace_back(effective_distance(nodes[id].circle,
                                           nodes[other].circle),
                        other);
    }
    std::sort(list.begin(), list.end());

    ++version[id];
    for (const auto& [d, other] : list) {
      listed_by[other].insert(id);
      heap.push(HeapEntry{d, id, other, version[id]});
    }
  }

  bool pop_valid(HeapEntry& out) {
    while (!heap.empty()) {
      const HeapEntry e = heap.top();
      heap.pop();
      if (!live[e.a] || e.version_a != version[e.a]) continue;
      if (!live[e.b]) {
        // The partner died and no fresher entry covered this circle yet;
        // rebuild its list so it stays mergeable.
        refresh(e.a);
        continue;
      }
      out = e;
      return true;
    }
    return false;
  }
};

ClusterBuilder::ClusterBuilder(std::span<const Circle> circles,
                               RandomSource& rng, std::size_t k,
                               TraceSink* trace)
    : state_(std::make_unique<State>()) {
  if (circles.empty()) {
    throw std::invalid_argument("build_tree: empty input");
  }
  State& s = *state_;
  s.k = std::max<std::size_t>(k, 1);
  s.rng = &rng;
  s.trace = trace;
  s.leaf_count = circles.size();
  s.nodes.reserve(2 * circles.size() - 1);
  for (std::size_t i = 0; i < circles.size(); ++i) {
    ClusterNode node;
    node.circle = circles[i];
    node.original_index = static_cast<std::int64_t>(i);
    s.nodes.push_back(node);
  }
  s.grow_to(2 * circles.size() - 1);
  for (std::size_t i = 0; i < circles.size(); ++i) {
    s.live[i] = 1;
    s.index.insert(i, Rect::of_circle(circles[i]));
  }
  for (std::size_t i = 0; i < circles.size(); ++i) s.refresh(i);
}

ClusterBuilder::~ClusterBuilder() = default;
ClusterBuilder::ClusterBuilder(ClusterBuilder&&) noexcept = default;

bool ClusterBuilder::done() const {
  return state_->merges_done + 1 >= state_->leaf_count;
}

ClusterBuilder::MergeEvent ClusterBuilder::step() {
  if (done()) throw std::logic_error("cluster builder: already done");
  State& s = *state_;

  HeapEntry e{};
  if (!s.pop_valid(e)) {
    // Cannot happen while lists are maintained eagerly; rebuild as a last
    // resort so progress is guaranteed regardless.
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      if (s.live[i]) s.refresh(i);
    }
    if (!s.pop_valid(e)) {
      throw std::logic_error("cluster builder: no candidate pair");
    }
  }

  const std::size_t node_id = s.nodes.size();
  ClusterNode node;
  node.circle = proxy_circle(s.nodes[e.a].circle, s.nodes[e.b].circle, *s.rng);
  node.merge_distance = e.dist;
  node.left = static_cast<std::int64_t>(e.a);
  node.right = static_cast<std::int64_t>(e.b);
  s.nodes.push_back(node);
  ++s.merges_done;

  // Retire the pair and collect everyone who cached either of them.
  std::set<std::size_t> affected;
  for (const std::size_t id : {e.a, e.b}) {
    s.live[id] = 0;
    s.index.remove(id);
    for (const auto& [d, other] : s.neighbors[id]) {
      s.listed_by[other].erase(id);
    }
    s.neighbors[id].clear();
    affected.insert(s.listed_by[id].begin(), s.listed_by[id].end());
    s.listed_by[id].clear();
  }
  affected.erase(e.a);
  affected.erase(e.b);

  s.live[node_id] = 1;
  s.index.insert(node_id, Rect::of_circle(node.circle));
  s.refresh(node_id);
  for (const std::size_t x : affected) {
    if (s.live[x]) s.refresh(x);
  }

  if (s.trace) s.trace->merge(e.a, e.b, node_id, e.dist, node.circle);
  return MergeEvent{e.a, e.b, node_id, e.dist, node.circle};
}

ClusterTree ClusterBuilder::take_tree() {
  if (!done()) throw std::logic_error("cluster builder: merges remaining");
  ClusterTree tree;
  tree.nodes = std::move(state_->nodes);
  tree.leaf_count = state_->leaf_count;
  return tree;
}

std::vector<std::size_t> ClusterBuilder::live_ids() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < state_->nodes.size(); ++i) {
    if (state_->live[i]) out.push_back(i);
  }
  return out;
}

ClusterTree build_tree(std::span<const Circle> circles, RandomSource& rng,
                       std::size_t k, TraceSink* trace) {
  ClusterBuilder builder(circles, rng, k, trace);
  while (!builder.done()) builder.step();
  return builder.take_tree();
}

}  // namespace cetsp
