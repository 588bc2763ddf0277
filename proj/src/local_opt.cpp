#include "cetsp/local_opt.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "cetsp/random.hpp"

namespace cetsp::local_opt {

std::vector<PointId> on_insert_energy(Tour& tour, PointId id) {
  TourPoint& p = tour.point(id);
  p.energy += kInsertGain;

  std::vector<PointId> drained_out;
  PointId neighbors[2] = {p.prev, p.next};
  const std::size_t count = neighbors[0] == neighbors[1] ? 1 : 2;
  for (std::size_t i = 0; i < count; ++i) {
    const PointId nb = neighbors[i];
    if (nb == id) continue;  // single-point tour: nothing to drain
    TourPoint& q = tour.point(nb);
    q.energy -= kNeighborDrain;
    if (q.energy <= 0) drained_out.push_back(nb);
  }
  return drained_out;
}

void reinsert_point(TourBuilder& builder, PointId id) {
  Tour& tour = builder.tour();
  TourPoint& p = tour.point(id);
  const std::vector<NodeId> circles = p.covered;
  for (const NodeId node : circles) tour.detach(id, node);
  tour.remove_point(id);
  for (const NodeId node : circles) {
    builder.insert_node(node, /*reinsertion=*/true);
  }
}

bool maybe_reoptimize(TourBuilder& builder, PointId id) {
  Tour& tour = builder.tour();
  TourPoint& p = tour.point(id);
  if (!reopt_due(p.insert_count)) return false;
  if (tour.size() < 2) return false;

  std::vector<Circle> disks;
  disks.reserve(p.covered.size());
  for (const NodeId node : p.covered) {
    disks.push_back(builder.tree().nodes[node].circle);
  }
  const Point2 a = tour.point(p.prev).position;
  const Point2 b = tour.point(p.next).position;
  const Point2 moved = reoptimize_point(a, b, p.position, disks);
  if (!(moved == p.position)) {
    tour.move_point(id, moved);
  }
  return true;
}

GadgetResult simulate_gadget(std::uint64_t n, std::uint64_t seed) {
  RandomSource rng(seed);
  GadgetResult result;
  result.terminated = true;

  std::vector<std::int64_t> energy;
  std::vector<std::uint64_t> weight;
  // Nodes with energy >= 1, ordered by (energy, id): the adversary drains
  // and overloads the weakest nodes to force resets.
  std::set<std::pair<std::int64_t, std::uint64_t>> charged;

  const auto bump = [&](std::uint64_t v, std::int64_t delta) {
    if (energy[v] >= 1) charged.erase({energy[v], v});
    energy[v] += delta;
    if (energy[v] >= 1) charged.insert({energy[v], v});
  };

  enum class Update : std::uint8_t { kInsert, kReduce };
  std::vector<Update> stack;
  const auto push_ops = [&](std::uint64_t ops) {
    for (std::uint64_t i = 0; i < ops; ++i) {
      stack.push_back(Update::kReduce);
      stack.push_back(Update::kReduce);
      stack.push_back(Update::kInsert);
    }
  };
  push_ops(n);

  // The bound guarantees at most 3 * (n + 2n) update executions; anything
  // past that would mean the process failed to terminate.
  const std::uint64_t update_cap = 9 * n + 16;
  std::uint64_t executed = 0;

  while (!stack.empty()) {
    if (++executed > update_cap) {
      result.terminated = false;
      break;
    }
    const Update u = stack.back();
    stack.pop_back();

    if (u == Update::kInsert) {
      std::uint64_t v;
      if (charged.empty() || rng.canonical() < 0.3) {
        v = energy.size();
        energy.push_back(0);
        weight.push_back(0);
      } else {
        // Pile weight onto one of the weakest charged nodes.
        auto it = charged.begin();
        std::advance(it, static_cast<long>(
                             rng.index(std::min<std::size_t>(charged.size(), 8))));
        v = it->second;
      }
      bump(v, kInsertGain);
      weight[v] += 1;
    } else {
      if (charged.empty()) continue;  // a -1 may not push any node below 0
      auto it = charged.begin();
      std::advance(it, static_cast<long>(
                           rng.index(std::min<std::size_t>(charged.size(), 4))));
      const std::uint64_t v = it->second;
      bump(v, -1);
      if (energy[v] < 0) result.invariants_ok = false;
      if (energy[v] == 0 && weight[v] > 0) {
        const std::uint64_t w = weight[v];
        weight[v] = 0;
        result.extra_ops += w;
        push_ops(w);
      }
    }
  }
  return result;
}

}  // namespace cetsp::local_opt
