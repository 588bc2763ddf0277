#include "cetsp/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace cetsp {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BBox = bg::model::box<BPoint>;
using Value = std::pair<BBox, SpatialIndex::Id>;

BBox to_bbox(const Rect& r) {
  return BBox{BPoint{r.lo.x, r.lo.y}, BPoint{r.hi.x, r.hi.y}};
}

}  // namespace

Rect Rect::of_segment(const Segment& s) {
  return {{std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y)},
          {std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)}};
}

double rect_distance(const Rect& r, Point2 q) {
  const double dx = std::max({r.lo.x - q.x, 0.0, q.x - r.hi.x});
  const double dy = std::max({r.lo.y - q.y, 0.0, q.y - r.hi.y});
  // sqrt of the sum of squares, not hypot: the rounding of sqrt is monotone,
  // which keeps this ordering exactly consistent with the squared metric the
  // underlying tree iterates by.
  return std::sqrt(dx * dx + dy * dy);
}

struct SpatialIndex::Impl {
  bgi::rtree<Value, bgi::rstar<16>> tree;
  std::map<Id, Rect> rects;
};

SpatialIndex::SpatialIndex() : impl_(std::make_unique<Impl>()) {}
SpatialIndex::~SpatialIndex() = default;
SpatialIndex::SpatialIndex(SpatialIndex&&) noexcept = default;
SpatialIndex& SpatialIndex::operator=(SpatialIndex&&) noexcept = default;

void SpatialIndex::insert(Id id, const Rect& rect) {
  auto [it, inserted] = impl_->rects.emplace(id, rect);
  if (!inserted) {
    throw std::invalid_argument("spatial index: duplicate id " +
                                std::to_string(id));
  }
  impl_->tree.insert(Value{to_bbox(rect), id});
}

void SpatialIndex::remove(Id id) {
  auto it = impl_->rects.find(id);
  if (it == impl_->rects.end()) {
    throw std::invalid_argument("spatial index: unknown id " +
                                std::to_string(id));
  }
  impl_->tree.remove(Value{to_bbox(it->second), id});
  impl_->rects.erase(it);
}

bool SpatialIndex::contains(Id id) const {
  return impl_->rects.count(id) != 0;
}

const Rect& SpatialIndex::rect_of(Id id) const {
  auto it = impl_->rects.find(id);
  if (it == impl_->rects.end()) {
    throw std::invalid_argument("spatial index: unknown id " +
                                std::to_string(id));
  }
  return it->second;
}

std::size_t SpatialIndex::size() const { return impl_->rects.size(); }

std::vector<SpatialIndex::Hit> SpatialIndex::knn_rects(Point2 q,
                                                       std::size_t k) const {
  std::vector<Hit> collected;
  if (k == 0 || impl_->rects.empty()) return collected;

  // Walk the tree in ascending box distance; keep pulling past k while the
  // next distance ties the current k-th so id ordering can settle ties. The
  // query cost scales with the requested count, so fetch a small cushion and
  // widen only when a tie chain is still open at the window's edge.
  const BPoint bq{q.x, q.y};
  const std::size_t total = impl_->rects.size();
  std::size_t fetch = std::min(total, k + 8);
  for (;;) {
    collected.clear();
    std::priority_queue<double> worst_k;
    bool tie_closed = false;
    for (auto it =
             impl_->tree.qbegin(bgi::nearest(bq, static_cast<unsigned>(fetch)));
         it != impl_->tree.qend(); ++it) {
      const double d = rect_distance(rect_of(it->second), q);
      if (worst_k.size() >= k && d > worst_k.top()) {
        tie_closed = true;
        break;
      }
      collected.push_back(Hit{it->second, d});
      worst_k.push(d);
      if (worst_k.size() > k) worst_k.pop();
    }
    if (tie_closed || fetch >= total) break;
    fetch = std::min(total, fetch * 4);
  }
  std::sort(collected.begin(), collected.end(), [](const Hit& a, const Hit& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  if (collected.size() > k) collected.resize(k);
  return collected;
}

std::vector<SpatialIndex::Hit> SpatialIndex::knn_segments(
    Point2 q, std::size_t k,
    const std::function<Segment(Id)>& segment_of) const {
  std::vector<Hit> hits = knn_rects(q, k);
  for (Hit& h : hits) h.distance = segment_point_distance(segment_of(h.id), q);
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  return hits;
}

std::vector<SpatialIndex::Id> SpatialIndex::covering_rects(
    const Rect& rect) const {
  std::vector<Id> out;
  for (auto it = impl_->tree.qbegin(bgi::covers(to_bbox(rect)));
       it != impl_->tree.qend(); ++it) {
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<SpatialIndex::Id, Rect>> SpatialIndex::entries() const {
  std::vector<std::pair<Id, Rect>> out;
  out.reserve(impl_->rects.size());
  for (const auto& [id, rect] : impl_->rects) out.emplace_back(id, rect);
  return out;
}

}  // namespace cetsp
