#include "mteq/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mteq/initializer.hpp"
#include "mteq/tensor_io.hpp"

namespace mteq {

std::optional<double> estimate_order(const std::vector<IterationRecord>& trace) {
  const std::size_t k = trace.size();
  if (k < 3) return std::nullopt;
  const double r0 = trace[k - 3].residual_norm;
  const double r1 = trace[k - 2].residual_norm;
  const double r2 = trace[k - 1].residual_norm;
  if (!(r0 > 0.0 && r1 > 0.0 && r2 > 0.0) || r0 == r1) return std::nullopt;
  return std::log(r2 / r1) / std::log(r1 / r0);
}

const char* to_string(BenchMethod m) {
  switch (m) {
    case BenchMethod::Basic: return "basic";
    case BenchMethod::Extended: return "extended";
    case BenchMethod::ExtendedPlain: return "extended-plain";
  }
  return "unknown";
}

BenchMethod parse_bench_method(const std::string& s) {
  if (s == "basic") return BenchMethod::Basic;
  if (s == "extended") return BenchMethod::Extended;
  if (s == "extended-plain") return BenchMethod::ExtendedPlain;
  throw std::invalid_argument("unknown method '" + s + "' (basic, extended, extended-plain)");
}

StopRule default_stop(int problem_id) {
  return problem_id == 3 ? StopRule::Relative : StopRule::Absolute;
}

TrialResult run_trial(const ProblemSpec& spec, BenchMethod method, const SolverConfig& cfg) {
  ProblemSpec s = spec;
  return run_trial(
      [s](std::uint64_t seed) mutable {
        s.seed = seed;
        return generate_problem(s);
      },
      spec.seed, method, cfg);
}

TrialResult run_trial(const ProblemFactory& make, std::uint64_t seed, BenchMethod method,
                      const SolverConfig& cfg) {
  TrialResult r;
  r.seed = seed;
  try {
    const MTeqProblem p = make(seed);
    const auto t0 = std::chrono::steady_clock::now();
    const InitialPoint ip = initial_point(p, cfg);
    SolveReport rep = method == BenchMethod::Basic
                          ? solve_positive(p, ip.x0, cfg)
                          : solve_nonnegative(p, ip.y0, cfg,
                                              method == BenchMethod::Extended ? Step3Mode::Step3Prime
                                                                              : Step3Mode::Plain);
    const auto t1 = std::chrono::steady_clock::now();
    r.success = rep.converged();
    r.iterations = rep.iterations();
    r.init_iterations = ip.init_iterations;
    r.init_ms = ip.elapsed_ms;
    r.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    r.final_residual = rep.final_residual;
    r.message = rep.converged() ? "" : std::string(to_string(rep.status)) + ": " + rep.message;
  } catch (const std::exception& e) {
    r.success = false;
    r.message = e.what();
  }
  return r;
}

BenchCell run_cell(const ProblemSpec& problem, BenchMethod method, int trials,
                   const SolverConfig& cfg, int jobs) {
  return run_cell(
      problem,
      [problem](std::uint64_t seed) {
        ProblemSpec s = problem;
        s.seed = seed;
        return generate_problem(s);
      },
      method, trials, cfg, jobs);
}

BenchCell run_cell(const ProblemSpec& problem, const ProblemFactory& make, BenchMethod method,
                   int trials, const SolverConfig& cfg, int jobs) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  BenchCell cell;
  cell.problem = problem;
  cell.method = method;
  cell.trials = trials;
  cell.results.resize(static_cast<std::size_t>(trials));

  auto work = [&](int t) {
    const std::uint64_t seed = problem.seed + static_cast<std::uint64_t>(t);
    cell.results[static_cast<std::size_t>(t)] = run_trial(make, seed, method, cfg);
  };
  if (jobs <= 1) {
    for (int t = 0; t < trials; ++t) work(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < std::min(jobs, trials); ++j)
      pool.emplace_back([&] {
        for (int t; (t = next.fetch_add(1)) < trials;) work(t);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& r : cell.results) {
    if (!r.success) continue;
    ++cell.successes;
    cell.mean_iter += r.iterations;
    cell.mean_time_ms += r.time_ms;
    cell.mean_init_ms += r.init_ms;
  }
  if (cell.successes > 0) {
    cell.mean_iter /= cell.successes;
    cell.mean_time_ms /= cell.successes;
    cell.mean_init_ms /= cell.successes;
  }
  return cell;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_bench_markdown(std::ostream& out, const std::vector<BenchCell>& cells) {
  out << "| Problem | (m, n) | Method | Iter | Time (s) | Time-Int (s) | Success |\n"
      << "|---|---|---|---|---|---|---|\n";
  for (const auto& c : cells) {
    out << "| " << c.problem.id << " | (" << c.problem.m << ", " << c.problem.n << ") | "
        << to_string(c.method) << " | " << fixed(c.mean_iter, 1) << " | "
        << fixed(c.mean_time_ms / 1000.0, 4) << " | " << fixed(c.mean_init_ms / 1000.0, 4) << " | "
        << c.successes << "/" << c.trials << " |\n";
  }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchCell>& cells) {
  out << "problem,m,n,method,trial,seed,success,iterations,init_iterations,time_ms,init_ms,"
         "final_residual\n";
  for (const auto& c : cells) {
    for (std::size_t t = 0; t < c.results.size(); ++t) {
      const auto& r = c.results[t];
      out << c.problem.id << ',' << c.problem.m << ',' << c.problem.n << ',' << to_string(c.method)
          << ',' << t << ',' << r.seed << ',' << (r.success ? 1 : 0) << ',' << r.iterations << ','
          << r.init_iterations << ',' << format_double(r.time_ms) << ','
          << format_double(r.init_ms) << ',' << format_double(r.final_residual) << '\n';
    }
  }
}

}  // namespace mteq
