#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mteq/problems.hpp"
#include "mteq/solver.hpp"

namespace mteq {

/// q = log(r_K / r_{K-1}) / log(r_{K-1} / r_{K-2}) from the last three
/// residuals; nullopt with fewer than three rows or a zero residual.
std::optional<double> estimate_order(const std::vector<IterationRecord>& trace);

enum class BenchMethod { Basic, Extended, ExtendedPlain };

const char* to_string(BenchMethod m);
BenchMethod parse_bench_method(const std::string& s);

/// Relative stop for problem 3, absolute otherwise.
StopRule default_stop(int problem_id);

struct TrialResult {
  std::uint64_t seed = 0;
  bool success = false;
  int iterations = 0;
  int init_iterations = 0;
  double time_ms = 0.0;       // initializer plus solve
  double init_ms = 0.0;
  double final_residual = 0.0;
  std::string message;
};

struct BenchCell {
  ProblemSpec problem;
  BenchMethod method = BenchMethod::Basic;
  int trials = 0;
  int successes = 0;
  double mean_iter = 0.0;     // over successful trials
  double mean_time_ms = 0.0;
  double mean_init_ms = 0.0;
  std::vector<TrialResult> results;
};

/// Runs one trial: generate, initialize, solve. Never throws; failures are
/// reported through `success` and `message`.
TrialResult run_trial(const ProblemSpec& spec, BenchMethod method, const SolverConfig& cfg);

/// Same with an arbitrary problem source called with the trial seed.
using ProblemFactory = std::function<MTeqProblem(std::uint64_t seed)>;
TrialResult run_trial(const ProblemFactory& make, std::uint64_t seed, BenchMethod method,
                      const SolverConfig& cfg);

/// Trial t uses seed problem.seed + t. `jobs` > 1 runs trials on threads;
/// results are stored by trial index.
BenchCell run_cell(const ProblemSpec& problem, BenchMethod method, int trials,
                   const SolverConfig& cfg, int jobs = 1);
BenchCell run_cell(const ProblemSpec& label, const ProblemFactory& make, BenchMethod method,
                   int trials, const SolverConfig& cfg, int jobs = 1);

void write_bench_markdown(std::ostream& out, const std::vector<BenchCell>& cells);
void write_bench_csv(std::ostream& out, const std::vector<BenchCell>& cells);

}  // namespace mteq
