#pragma once

#include <cstdint>
#include <vector>

#include "cetsp/construction.hpp"

namespace cetsp::local_opt {

inline constexpr int kInsertGain = 3;
inline constexpr int kNeighborDrain = 1;

// The reoptimization schedule fires when a point's insertion count reaches a
// power of two: 1, 2, 4, 8, ...
inline bool reopt_due(std::uint64_t insert_count) {
  return insert_count != 0 && (insert_count & (insert_count - 1)) == 0;
}

// Applies the energy rule for an insertion into `id`: +3 to the point, -1 to
// each distinct neighbor. Returns the neighbors whose energy is now <= 0.
std::vector<PointId> on_insert_energy(Tour& tour, PointId id);

// Removes the point and re-runs one insertion per covered circle, in covered
// order. The caller owns budget and trigger checks.
void reinsert_point(TourBuilder& builder, PointId id);

// Moves the point to the best reachable position between its neighbors while
// staying inside every covered disk, when the schedule is due. Returns true
// when a reoptimization ran. Never increases the tour length.
bool maybe_reoptimize(TourBuilder& builder, PointId id);

struct GadgetResult {
  std::uint64_t extra_ops = 0;  // operations spawned by resets
  bool terminated = false;
  bool invariants_ok = true;
};

// Stack-driven weight/energy process: each operation adds +3 energy and +1
// weight to a node, then two -1 energy updates land on adversarially chosen
// nodes; a node whose energy hits zero resets, spawning one operation per
// unit of weight. The adversary is seeded and favors low-energy targets.
// Extra operations never exceed 2n.
GadgetResult simulate_gadget(std::uint64_t n, std::uint64_t seed);

}  // namespace cetsp::local_opt
