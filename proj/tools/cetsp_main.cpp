#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cetsp/instance_io.hpp"
#include "cetsp/local_opt.hpp"
#include "cetsp/solver.hpp"
#include "cetsp/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;      // usage / IO / parse failures
constexpr int kExitViolation = 2;  // feasibility or invariant violations

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0
                   : std::accumulate(v.begin(), v.end(), 0.0) /
                         static_cast<double>(v.size());
}

int cmd_solve(const std::string& instance_path, cetsp::SolveParams params,
              const std::string& out_path, const std::string& trace_path,
              double default_radius, bool record_timing) {
  const cetsp::Instance inst =
      cetsp::load_instance(instance_path, default_radius);

  std::ofstream trace_file;
  std::unique_ptr<cetsp::JsonlTraceSink> trace;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) {
      throw std::runtime_error("cannot open trace file: " + trace_path);
    }
    trace = std::make_unique<cetsp::JsonlTraceSink>(trace_file);
  }

  const auto t0 = std::chrono::steady_clock::now();
  cetsp::BestOfResult result = cetsp::solve_best(inst, params, trace.get());
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();

  if (record_timing) {
    result.best.solution.wall_ms = static_cast<std::uint64_t>(wall_ms);
  }
  if (!out_path.empty()) {
    cetsp::save_solution(out_path, result.best.solution);
  }

  std::cout << inst.name << " n=" << inst.circles.size()
            << " best=" << cetsp::format_double(result.best.solution.length)
            << " mean=" << cetsp::format_double(mean_of(result.lengths))
            << " ms_per_run="
            << cetsp::format_double(wall_ms /
                                    static_cast<double>(params.restarts))
            << '\n';
  return kExitOk;
}

int cmd_generate(const std::string& kind, std::size_t n, double limit,
                 std::uint64_t seed, const std::string& out_path) {
  cetsp::Instance inst;
  if (kind == "random") {
    inst = cetsp::gen_random(n, limit, seed);
  } else if (kind == "structured") {
    inst = cetsp::gen_structured(n, seed);
  } else {
    throw CLI::ValidationError("--kind must be 'random' or 'structured'");
  }
  if (out_path.empty()) {
    cetsp::write_instance(std::cout, inst);
  } else {
    cetsp::save_instance(out_path, inst);
  }
  return kExitOk;
}

int cmd_validate(const std::string& instance_path,
                 const std::string& solution_path, double eps,
                 double default_radius) {
  const cetsp::Instance inst =
      cetsp::load_instance(instance_path, default_radius);
  std::vector<std::string> warnings;
  const cetsp::Solution sol = cetsp::load_solution(solution_path, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

  const cetsp::ValidationReport report = cetsp::validate(inst, sol, eps);
  if (!report.length_consistent) {
    std::cerr << "warning: stored length "
              << cetsp::format_double(sol.length) << " vs recomputed "
              << cetsp::format_double(report.recomputed_length) << '\n';
  }
  if (report.feasible) {
    std::cout << "feasible: " << inst.circles.size() << " circles, length "
              << cetsp::format_double(report.recomputed_length) << '\n';
    return kExitOk;
  }
  std::cout << "INFEASIBLE: " << report.violations.size()
            << " violations, max excess "
            << cetsp::format_double(report.max_violation) << '\n';
  for (const cetsp::Violation& v : report.violations) {
    std::cout << "  circle " << v.circle
              << (v.assigned ? " outside disk, center distance " +
                                   cetsp::format_double(v.distance)
                             : std::string(" unassigned"))
              << '\n';
  }
  return kExitViolation;
}

int cmd_render(const std::string& instance_path,
               const std::string& solution_path, const std::string& out_path,
               double default_radius) {
  const cetsp::Instance inst =
      cetsp::load_instance(instance_path, default_radius);
  const cetsp::Solution sol = cetsp::load_solution(solution_path);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  cetsp::emit_svg(out, inst, sol);
  if (!out) throw std::runtime_error("write failed: " + out_path);
  return kExitOk;
}

int cmd_reconstruct(const std::string& centers_path,
                    const std::string& tour_path) {
  const auto points_of = [](const std::string& path) {
    const cetsp::Instance inst = cetsp::load_instance(path);
    std::vector<cetsp::Point2> pts;
    pts.reserve(inst.circles.size());
    for (const cetsp::Circle& c : inst.circles) pts.push_back(c.center);
    return pts;
  };
  const double r =
      cetsp::reconstruct_radius(points_of(centers_path), points_of(tour_path));
  std::cout << cetsp::format_double(r) << '\n';
  return kExitOk;
}

int cmd_bench(const std::string& kind, const std::vector<std::size_t>& sizes,
              std::size_t reps, std::uint64_t seed, double limit,
              const std::string& out_path, bool warmup,
              const cetsp::SolveParams& base_params) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    out = &file;
  }

  if (warmup) {
    const cetsp::Instance w = kind == "random"
                                  ? cetsp::gen_random(4096, limit, seed)
                                  : cetsp::gen_structured(4096, seed);
    cetsp::SolveParams wp = base_params;
    wp.seed = seed;
    (void)cetsp::solve_once(w, wp);
  }

  *out << "n,seed,phase,millis,tour_points,length\n";
  for (const std::size_t n : sizes) {
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const std::uint64_t s = seed + rep;
      const cetsp::Instance inst = kind == "random"
                                       ? cetsp::gen_random(n, limit, s)
                                       : cetsp::gen_structured(n, s);
      cetsp::SolveParams sp = base_params;
      sp.seed = s;
      const cetsp::SolveResult res = cetsp::solve_once(inst, sp);
      const auto row = [&](const char* phase, double millis) {
        *out << n << ',' << s << ',' << phase << ','
             << cetsp::format_double(millis) << ',' << res.stats.tour_points
             << ',' << cetsp::format_double(res.solution.length) << '\n';
      };
      row("preprocess", res.stats.times.preprocess_ms);
      row("cluster", res.stats.times.cluster_ms);
      row("construct", res.stats.times.construct_ms);
      row("total", res.stats.times.total_ms);
    }
  }
  if (!*out) throw std::runtime_error("benchmark write failed");
  return kExitOk;
}

int cmd_gadget(std::uint64_t n, std::size_t seeds, std::uint64_t base_seed) {
  std::uint64_t max_x = 0;
  bool ok = true;
  for (std::size_t i = 0; i < seeds; ++i) {
    const cetsp::local_opt::GadgetResult r =
        cetsp::local_opt::simulate_gadget(n, base_seed + i);
    max_x = std::max(max_x, r.extra_ops);
    if (!r.terminated || !r.invariants_ok || r.extra_ops > 2 * n) ok = false;
  }
  std::cout << "gadget n=" << n << " seeds=" << seeds << " maxX=" << max_x
            << " bound=" << 2 * n << (ok ? " OK" : " VIOLATION") << '\n';
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Close-enough TSP heuristic solver"};
  app.require_subcommand(1);

  cetsp::SolveParams params;
  std::string instance_path, solution_path, out_path, trace_path;
  std::string centers_path, tour_path;
  std::string kind = "random";
  double default_radius = 0.0;
  double eps = 0.0;
  double limit = 100.0;
  bool record_timing = false;
  std::size_t gen_n = 0;
  std::vector<std::size_t> bench_sizes;
  std::size_t reps = 1;
  bool warmup = false;
  std::uint64_t gadget_n = 0;
  std::size_t gadget_seeds = 1;
  std::uint64_t gadget_base_seed = 1;

  const auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--restarts", params.restarts)->check(CLI::PositiveNumber);
    cmd->add_option("--k-cluster", params.k_cluster)->check(CLI::PositiveNumber);
    cmd->add_option("--k-segments", params.k_segments)->check(CLI::PositiveNumber);
    cmd->add_flag("--newton", params.newton);
    cmd->add_option("--budget-factor", params.budget_factor);
    cmd->add_option("--threads", params.threads);
  };

  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--seed", params.seed)->required();
  add_solver_flags(solve);
  solve->add_option("--trace", trace_path);
  solve->add_option("--out", out_path);
  solve->add_option("--default-radius", default_radius);
  solve->add_flag("--record-timing", record_timing);

  CLI::App* generate = app.add_subcommand("generate", "generate an instance");
  generate->add_option("--kind", kind)->required();
  generate->add_option("--n", gen_n)->required()->check(CLI::PositiveNumber);
  generate->add_option("--limit", limit);
  generate->add_option("--seed", params.seed)->required();
  generate->add_option("--out", out_path);

  CLI::App* validate = app.add_subcommand("validate", "check a solution");
  validate->add_option("--instance", instance_path)->required();
  validate->add_option("--solution", solution_path)->required();
  validate->add_option("--eps", eps);
  validate->add_option("--default-radius", default_radius);

  CLI::App* render = app.add_subcommand("render", "render instance+tour SVG");
  render->add_option("--instance", instance_path)->required();
  render->add_option("--solution", solution_path)->required();
  render->add_option("--out", out_path)->required();
  render->add_option("--default-radius", default_radius);

  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "recover a uniform radius");
  reconstruct->add_option("--centers", centers_path)->required();
  reconstruct->add_option("--tour", tour_path)->required();

  CLI::App* bench = app.add_subcommand("bench", "timing sweep to CSV");
  bench->add_option("--kind", kind)->required();
  bench->add_option("--n", bench_sizes)->required()->delimiter(',');
  bench->add_option("--reps", reps)->check(CLI::PositiveNumber);
  bench->add_option("--seed", params.seed)->required();
  bench->add_option("--limit", limit);
  bench->add_option("--out", out_path);
  bench->add_flag("--warmup", warmup);
  add_solver_flags(bench);

  CLI::App* gadget = app.add_subcommand("gadget", "reinsertion-bound simulator");
  gadget->add_option("--n", gadget_n)->required();
  gadget->add_option("--seeds", gadget_seeds)->check(CLI::PositiveNumber);
  gadget->add_option("--seed", gadget_base_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(instance_path, params, out_path, trace_path,
                       default_radius, record_timing);
    }
    if (generate->parsed()) {
      return cmd_generate(kind, gen_n, limit, params.seed, out_path);
    }
    if (validate->parsed()) {
      return cmd_validate(instance_path, solution_path, eps, default_radius);
    }
    if (render->parsed()) {
      return cmd_render(instance_path, solution_path, out_path, default_radius);
    }
    if (reconstruct->parsed()) {
      return cmd_reconstruct(centers_path, tour_path);
    }
    if (bench->parsed()) {
      return cmd_bench(kind, bench_sizes, reps, params.seed, limit, out_path,
                       warmup, params);
    }
    if (gadget->parsed()) {
      return cmd_gadget(gadget_n, gadget_seeds, gadget_base_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
