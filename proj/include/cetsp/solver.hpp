#pragma once

#include <cstdint>
#include <vector>

#include "cetsp/construction.hpp"
#include "cetsp/instance_io.hpp"
#include "cetsp/trace.hpp"

namespace cetsp {

struct SolveParams {
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  std::size_t k_cluster = 8;
  std::size_t k_segments = 6;
  bool newton = false;
  // Reinsertion budget = factor * n circles; <= 0 disables the cap.
  double budget_factor = 2.0;
  unsigned threads = 0;  // 0 -> hardware concurrency
};

struct PhaseTimes {
  double preprocess_ms = 0.0;
  double cluster_ms = 0.0;
  double construct_ms = 0.0;
  double total_ms = 0.0;
};

struct SolveStats {
  PhaseTimes times;
  BuildCounters counters;
  std::size_t removed = 0;  // circles dropped as redundant containers
  std::size_t tour_points = 0;
};

struct SolveResult {
  Solution solution;
  SolveStats stats;
};

// One seeded pipeline run: preprocess -> cluster -> construct -> emit.
SolveResult solve_once(const Instance& inst, const SolveParams& params,
                       TraceSink* trace = nullptr);

struct BestOfResult {
  SolveResult best;
  std::size_t best_index = 0;      // restart whose solution won
  std::vector<double> lengths;     // per-restart tour lengths, in seed order
};

// Runs params.restarts independent solves seeded seed, seed+1, ...; restarts
// execute concurrently but selection is the deterministic (length, index)
// minimum. The trace sink, if any, observes only the first restart.
BestOfResult solve_best(const Instance& inst, const SolveParams& params,
                        TraceSink* trace = nullptr);

}  // namespace cetsp
