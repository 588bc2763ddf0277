#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cetsp/random.hpp"
#include "cetsp/spatial_index.hpp"
#include "doctest.h"

using namespace cetsp;

namespace {

Rect random_rect(RandomSource& rng, double box, double max_side) {
  const Point2 lo{rng.uniform(-box, box), rng.uniform(-box, box)};
  return {lo, {lo.x + rng.uniform(0, max_side), lo.y + rng.uniform(0, max_side)}};
}

// Reference for knn_rects: full sort by (rect distance, id), k-prefix.
std::vector<SpatialIndex::Hit> knn_oracle(
    const std::vector<std::pair<SpatialIndex::Id, Rect>>& entries, Point2 q,
    std::size_t k) {
  std::vector<SpatialIndex::Hit> hits;
  for (const auto& [id, rect] : entries) {
    hits.push_back({id, rect_distance(rect, q)});
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

}  // namespace

TEST_CASE("rect_distance zero inside, axis and corner gaps outside") {
  const Rect r{{0, 0}, {2, 2}};
  CHECK(rect_distance(r, {1, 1}) == 0.0);
  CHECK(rect_distance(r, {2, 2}) == 0.0);  // boundary counts as inside
  CHECK(rect_distance(r, {4, 1}) == doctest::Approx(2.0));
  CHECK(rect_distance(r, {5, 6}) == doctest::Approx(5.0));
}

TEST_CASE("insert, contains, size, remove and re-insert") {
  SpatialIndex idx;
  CHECK(idx.size() == 0);
  idx.insert(7, Rect::of_point({1, 1}));
  CHECK(idx.contains(7));
  CHECK(idx.size() == 1);
  CHECK_THROWS_AS(idx.insert(7, Rect::of_point({2, 2})), std::invalid_argument);

  idx.remove(7);
  CHECK(!idx.contains(7));
  CHECK(idx.knn_rects({1, 1}, 1).empty());
  CHECK_THROWS_AS(idx.remove(7), std::invalid_argument);

  idx.insert(7, Rect::of_point({3, 3}));
  CHECK(idx.size() == 1);
  const auto hits = idx.knn_rects({3, 3}, 5);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].id == 7);
  CHECK(hits[0].distance == 0.0);
}

TEST_CASE("knn_rects picks the leftmost boxes on a line") {
  SpatialIndex idx;
  for (SpatialIndex::Id i = 0; i < 10; ++i) {
    const double x = 3.0 * static_cast<double>(i);
    idx.insert(i, Rect{{x, 0}, {x + 1, 1}});
  }
  const auto hits = idx.knn_rects({0.5, 0.5}, 3);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].id == 0);
  CHECK(hits[1].id == 1);
  CHECK(hits[2].id == 2);
}

TEST_CASE("knn_rects matches the linear-scan oracle") {
  RandomSource rng(31);
  SpatialIndex idx;
  std::vector<std::pair<SpatialIndex::Id, Rect>> entries;
  for (SpatialIndex::Id i = 0; i < 100; ++i) {
    const Rect r = random_rect(rng, 20, 4);
    idx.insert(i, r);
    entries.push_back({i, r});
  }
  for (int it = 0; it < 200; ++it) {
    const Point2 q{rng.uniform(-25, 25), rng.uniform(-25, 25)};
    for (const std::size_t k : {1u, 5u, 17u}) {
      const auto got = idx.knn_rects(q, k);
      const auto want = knn_oracle(entries, q, k);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].id == want[i].id);
        CHECK(got[i].distance == want[i].distance);
      }
    }
  }
}

TEST_CASE("knn_rects stays consistent under interleaved removals") {
  RandomSource rng(32);
  SpatialIndex idx;
  std::vector<std::pair<SpatialIndex::Id, Rect>> entries;
  SpatialIndex::Id next_id = 0;
  for (int round = 0; round < 300; ++round) {
    if (entries.empty() || rng.canonical() < 0.6) {
      const Rect r = random_rect(rng, 20, 4);
      idx.insert(next_id, r);
      entries.push_back({next_id, r});
      ++next_id;
    } else {
      const std::size_t victim = rng.index(entries.size());
      idx.remove(entries[victim].first);
      entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    const Point2 q{rng.uniform(-25, 25), rng.uniform(-25, 25)};
    const auto got = idx.knn_rects(q, 4);
    const auto want = knn_oracle(entries, q, 4);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].id == want[i].id);
  }
}

TEST_CASE("knn_segments re-ranks box candidates by exact segment distance") {
  RandomSource rng(33);
  std::vector<Segment> segments;
  SpatialIndex idx;
  for (SpatialIndex::Id i = 0; i < 50; ++i) {
    const Segment s{{rng.uniform(-20, 20), rng.uniform(-20, 20)},
                    {rng.uniform(-20, 20), rng.uniform(-20, 20)}};
    segments.push_back(s);
    idx.insert(i, Rect::of_segment(s));
  }
  const auto segment_of = [&](SpatialIndex::Id id) {
    return segments[static_cast<std::size_t>(id)];
  };

  for (int it = 0; it < 200; ++it) {
    const Point2 q{rng.uniform(-25, 25), rng.uniform(-25, 25)};
    const std::size_t k = 4;
    const auto got = idx.knn_segments(q, k, segment_of);

    // Reference mirrors the documented two-stage semantics: k nearest boxes,
    // then exact re-rank.
    std::vector<SpatialIndex::Hit> stage1;
    for (SpatialIndex::Id i = 0; i < segments.size(); ++i) {
      stage1.push_back({i, rect_distance(Rect::of_segment(segments[i]), q)});
    }
    std::sort(stage1.begin(), stage1.end(), [](const auto& a, const auto& b) {
      return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
    });
    stage1.resize(k);
    std::vector<SpatialIndex::Hit> want;
    for (const auto& h : stage1) {
      want.push_back({h.id, segment_point_distance(segments[h.id], q)});
    }
    std::sort(want.begin(), want.end(), [](const auto& a, const auto& b) {
      return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
    });

    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].id == want[i].id);
      CHECK(got[i].distance == doctest::Approx(want[i].distance));
    }
  }
}

TEST_CASE("knn_segments breaks exact-distance ties by id") {
  SpatialIndex idx;
  const std::vector<Segment> segments{{{-2, 1}, {2, 1}}, {{-2, -1}, {2, -1}}};
  idx.insert(1, Rect::of_segment(segments[1]));
  idx.insert(0, Rect::of_segment(segments[0]));
  const auto got = idx.knn_segments(
      {0, 0}, 2, [&](SpatialIndex::Id id) { return segments[id]; });
  REQUIRE(got.size() == 2);
  CHECK(got[0].id == 0);
  CHECK(got[1].id == 1);
}

TEST_CASE("covering_rects returns exactly the closed covers") {
  SpatialIndex idx;
  idx.insert(0, Rect{{0, 0}, {10, 10}});
  idx.insert(1, Rect{{1, 1}, {4, 4}});
  idx.insert(2, Rect{{2, 2}, {3, 3}});

  const auto covers = idx.covering_rects(Rect{{2, 2}, {3, 3}});
  REQUIRE(covers.size() == 3);  // identical rect counts
  CHECK(covers[0] == 0);
  CHECK(covers[1] == 1);
  CHECK(covers[2] == 2);

  CHECK(idx.covering_rects(Rect{{0, 0}, {10, 10}}).size() == 1);
  CHECK(idx.covering_rects(Rect{{-1, 0}, {10, 10}}).empty());
}

TEST_CASE("covering_rects matches a linear-scan oracle") {
  RandomSource rng(34);
  SpatialIndex idx;
  std::vector<std::pair<SpatialIndex::Id, Rect>> entries;
  for (SpatialIndex::Id i = 0; i < 120; ++i) {
    const Rect r = random_rect(rng, 10, 8);
    idx.insert(i, r);
    entries.push_back({i, r});
  }
  for (int it = 0; it < 200; ++it) {
    const Rect q = random_rect(rng, 10, 3);
    std::vector<SpatialIndex::Id> want;
    for (const auto& [id, r] : entries) {
      if (r.contains(q)) want.push_back(id);
    }
    const auto got = idx.covering_rects(q);
    CHECK(got == want);
  }
}

TEST_CASE("query cost grows subquadratically with size") {
  // Doubling the entry count must not double per-query time: compare total
  // knn time at n and 4n; a linear scan would show a ratio near 4.
  const auto run = [](std::size_t n) {
    RandomSource rng(35);
    SpatialIndex idx;
    for (SpatialIndex::Id i = 0; i < n; ++i) {
      const double s = 100.0 * std::sqrt(static_cast<double>(n));
      idx.insert(i, Rect::of_point({rng.uniform(-s, s), rng.uniform(-s, s)}));
    }
    const auto t0 = std::chrono::steady_clock::now();
    double sink = 0.0;
    for (int q = 0; q < 4000; ++q) {
      const double s = 100.0 * std::sqrt(static_cast<double>(n));
      const auto hits =
          idx.knn_rects({rng.uniform(-s, s), rng.uniform(-s, s)}, 8);
      for (const auto& h : hits) sink += h.distance;
    }
    (void)sink;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  double ratio = 1e30;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const double t1 = run(8192);
    const double t2 = run(32768);
    ratio = std::min(ratio, t2 / t1);
    if (ratio < 2.4) break;
  }
  CHECK(ratio < 2.4);
}
