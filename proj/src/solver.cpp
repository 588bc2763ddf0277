#include "cetsp/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cetsp/clustering.hpp"
#include "cetsp/random.hpp"

namespace cetsp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double extent_diagonal(const std::vector<Circle>& circles) {
  if (circles.empty()) return 0.0;
  double min_x = circles[0].center.x, max_x = min_x;
  double min_y = circles[0].center.y, max_y = min_y;
  for (const Circle& c : circles) {
    min_x = std::min(min_x, c.center.x - c.radius);
    max_x = std::max(max_x, c.center.x + c.radius);
    min_y = std::min(min_y, c.center.y - c.radius);
    max_y = std::max(max_y, c.center.y + c.radius);
  }
  return std::hypot(max_x - min_x, max_y - min_y);
}

std::string params_string(const SolveParams& p) {
  std::ostringstream out;
  out << "restarts=" << p.restarts << " k_cluster=" << p.k_cluster
      << " k_segments=" << p.k_segments << " newton=" << (p.newton ? 1 : 0)
      << " budget_factor=" << format_double(p.budget_factor);
  return out.str();
}

}  // namespace

SolveResult solve_once(const Instance& inst, const SolveParams& params,
                       TraceSink* trace) {
  if (inst.circles.empty()) {
    throw std::invalid_argument("solve: instance has no circles");
  }
  const auto t_total = Clock::now();
  RandomSource rng(params.seed);
  SolveResult result;

  auto t = Clock::now();
  const PreprocessResult pre = preprocess(inst.circles, rng);
  result.stats.removed = inst.circles.size() - pre.kept.size();
  result.stats.times.preprocess_ms = ms_since(t);

  t = Clock::now();
  const ClusterTree tree = build_tree(pre.kept, rng, params.k_cluster, trace);
  result.stats.times.cluster_ms = ms_since(t);

  t = Clock::now();
  BuildParams build;
  build.k_segments = params.k_segments;
  build.newton = params.newton;
  build.budget_limited = params.budget_factor > 0.0;
  build.reinsertion_budget =
      build.budget_limited
          ? static_cast<std::uint64_t>(
                std::llround(params.budget_factor *
                             static_cast<double>(pre.kept.size())))
          : 0;
  build.eps_geo = 1e-9 * std::max(1.0, extent_diagonal(pre.kept));
  TourBuilder builder(tree, build, trace);
  builder.run();
  result.stats.times.construct_ms = ms_since(t);
  result.stats.counters = builder.counters();

  const Tour& tour = builder.tour();
  result.stats.tour_points = tour.size();

  // Survivor input index -> its position in the emitted tour, filled below
  // so removed circles can be assigned to their survivor's point.
  std::vector<std::size_t> point_of_original(
      inst.circles.size(), std::numeric_limits<std::size_t>::max());

  Solution& sol = result.solution;
  sol.instance_name = inst.name;
  sol.seed = params.seed;
  sol.params = params_string(params);

  const std::vector<PointId> order = tour.order();
  sol.points.reserve(order.size());
  for (const PointId pid : order) {
    const TourPoint& tp = tour.point(pid);
    SolutionPoint out;
    out.position = rotate_about(tp.position, pre.pivot, -pre.rotation);
    for (const NodeId node : tp.covered) {
      const std::int64_t kept_idx = tree.nodes[node].original_index;
      if (kept_idx < 0) {
        throw std::logic_error("finished tour still covers a proxy node");
      }
      const std::size_t original =
          pre.kept_original[static_cast<std::size_t>(kept_idx)];
      out.covered.push_back(original);
      point_of_original[original] = sol.points.size();
    }
    std::sort(out.covered.begin(), out.covered.end());
    sol.points.push_back(std::move(out));
  }

  for (const auto& [removed, survivor] : pre.removed_to_survivor) {
    const std::size_t pi = point_of_original[survivor];
    if (pi == std::numeric_limits<std::size_t>::max()) {
      throw std::logic_error("survivor circle missing from tour assignment");
    }
    sol.points[pi].covered.push_back(removed);
  }
  for (SolutionPoint& p : sol.points) {
    std::sort(p.covered.begin(), p.covered.end());
  }

  std::vector<Point2> positions;
  positions.reserve(sol.points.size());
  for (const SolutionPoint& p : sol.points) positions.push_back(p.position);
  sol.length = tour_length(positions);

  result.stats.times.total_ms = ms_since(t_total);
  return result;
}

BestOfResult solve_best(const Instance& inst, const SolveParams& params,
                        TraceSink* trace) {
  if (params.restarts == 0) {
    throw std::invalid_argument("solve: restarts must be >= 1");
  }
  const std::size_t runs = params.restarts;
  std::vector<SolveResult> results(runs);
  std::vector<std::exception_ptr> errors(runs);

  const auto run_one = [&](std::size_t i) {
    try {
      SolveParams sp = params;
      sp.seed = params.seed + i;
      results[i] = solve_once(inst, sp, i == 0 ? trace : nullptr);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  unsigned threads = params.threads != 0 ? params.threads
                                         : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, runs));
  if (threads == 1) {
    for (std::size_t i = 0; i < runs; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < runs;
             i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  for (std::size_t i = 0; i < runs; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }

  BestOfResult best;
  best.lengths.reserve(runs);
  std::size_t win = 0;
  for (std::size_t i = 0; i < runs; ++i) {
    best.lengths.push_back(results[i].solution.length);
    if (results[i].solution.length < results[win].solution.length) win = i;
  }
  best.best_index = win;
  best.best = std::move(results[win]);
  return best;
}

}  // namespace cetsp
