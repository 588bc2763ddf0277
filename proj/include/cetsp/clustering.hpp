#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cetsp/geometry.hpp"
#include "cetsp/random.hpp"
#include "cetsp/spatial_index.hpp"
#include "cetsp/trace.hpp"

namespace cetsp {

struct ClusterNode {
  Circle circle;
  double merge_distance = 0.0;     // meaningful for internal nodes only
  std::int64_t left = -1;          // node index, -1 for leaves
  std::int64_t right = -1;
  std::int64_t original_index = -1;  // input position, leaves only

  bool is_leaf() const { return left < 0; }
};

// Binary merge hierarchy. Leaves occupy indices [0, leaf_count); internal
// nodes follow in creation order; the root is the last node.
struct ClusterTree {
  std::vector<ClusterNode> nodes;
  std::size_t leaf_count = 0;

  std::size_t root() const { return nodes.size() - 1; }
};

struct PreprocessResult {
  std::vector<Circle> kept;                  // rotated coordinates
  std::vector<std::size_t> kept_original;    // input index per kept circle
  // Removed circle -> surviving kept circle, both as input indices.
  std::vector<std::pair<std::size_t, std::size_t>> removed_to_survivor;
  double rotation = 0.0;
  Point2 pivot;
};

// Applies a random global rotation about the centroid of the centers, then
// drops every circle whose disk fully contains another remaining disk: any
// point satisfying the contained disk satisfies the container, so containers
// are redundant. Exact duplicates collapse to one representative. Throws
// std::invalid_argument on empty input.
PreprocessResult preprocess(std::span<const Circle> circles,
                            RandomSource& rng);

// Incremental merge loop, exposed stepwise so callers can observe each pop.
class ClusterBuilder {
 public:
  struct MergeEvent {
    std::size_t left = 0;
    std::size_t right = 0;
    std::size_t node = 0;
    double distance = 0.0;
    Circle proxy;
  };

  // k bounds the cached neighbor candidates per live circle.
  ClusterBuilder(std::span<const Circle> circles, RandomSource& rng,
                 std::size_t k, TraceSink* trace = nullptr);
  ~ClusterBuilder();
  ClusterBuilder(ClusterBuilder&&) noexcept;

  bool done() const;
  MergeEvent step();  // performs one merge; throws std::logic_error when done
  ClusterTree take_tree();

  std::vector<std::size_t> live_ids() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Runs the merge loop to completion: n - 1 merges, 2n - 1 nodes.
ClusterTree build_tree(std::span<const Circle> circles, RandomSource& rng,
                       std::size_t k = 8, TraceSink* trace = nullptr);

}  // namespace cetsp
