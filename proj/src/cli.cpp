#include "mteq/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mteq/bench.hpp"
#include "mteq/error.hpp"
#include "mteq/initializer.hpp"
#include "mteq/problems.hpp"
#include "mteq/solver.hpp"
#include "mteq/tensor_io.hpp"

namespace mteq {

namespace {

namespace fs = std::filesystem;

void add_tuning(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--eps", cfg.eps, "feasibility parameter")->capture_default_str();
  cmd->add_option("--eps2", cfg.eps2, "I0 feasibility parameter")->capture_default_str();
  cmd->add_option("--sigma", cfg.sigma, "descent parameter")->capture_default_str();
  cmd->add_option("--rho", cfg.rho, "backtracking factor")->capture_default_str();
  cmd->add_option("--eta", cfg.eta, "stopping tolerance")->capture_default_str();
  cmd->add_option("--c", cfg.c, "step-3' constant")->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iter, "iteration cap")->capture_default_str();
  cmd->add_option("--max-backtracks", cfg.max_backtracks, "backtracking cap")
      ->capture_default_str();
}

int exit_for(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return kExitConverged;
    case SolveStatus::IterationCap: return kExitIterationCap;
    default: return kExitInfeasible;
  }
}

void print_vec(std::ostream& out, std::span<const double> v, std::size_t limit = 10) {
  out << "[";
  for (std::size_t i = 0; i < std::min(v.size(), limit); ++i)
    out << (i ? ", " : "") << format_double(v[i]);
  if (v.size() > limit) out << ", ... (" << v.size() << " entries)";
  out << "]";
}

struct SolveArgs {
  std::string tensor, rhs, x0, out_x, trace, mode = "step3prime";
  bool relative = false, no_scale = false;
  SolverConfig cfg;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  Tensor t = read_tensor_file(a.tensor);
  Vec b = read_vec_file(a.rhs);
  std::optional<Vec> x0;
  if (!a.x0.empty()) x0 = read_vec_file(a.x0);
  if (b.size() != t.dim()) {
    err << "error: rhs has " << b.size() << " entries, tensor dimension is " << t.dim() << "\n";
    return kExitIoError;
  }
  SolverConfig cfg = a.cfg;
  if (a.relative) cfg.stop = StopRule::Relative;
  cfg.validate();
  Step3Mode mode;
  if (a.mode == "plain") mode = Step3Mode::Plain;
  else if (a.mode == "step3prime") mode = Step3Mode::Step3Prime;
  else {
    err << "error: --mode must be plain or step3prime\n";
    return kExitIoError;
  }

  std::optional<MTeqProblem> p;
  try {
    p = a.no_scale ? MTeqProblem(t, b) : scale_problem(t, b);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfeasible;
  }
  const bool extended = !p->partition().zero.empty();
  if (extended) {
    const auto rep = check_assumption_B(*p);
    if (!rep.pass) {
      err << "error: structural assumption for b >= 0 fails\n" << rep.describe() << "\n";
      return kExitInfeasible;
    }
  }

  Vec y0;
  int init_iterations = 0;
  double init_ms = 0.0;
  if (x0) {
    if (x0->size() != p->dim()) {
      err << "error: x0 has " << x0->size() << " entries, expected " << p->dim() << "\n";
      return kExitIoError;
    }
    if (!std::all_of(x0->begin(), x0->end(), [](double v) { return v > 0.0; })) {
      err << "error: x0 must be positive\n";
      return kExitInfeasible;
    }
    y0 = hadamard_power(*x0, p->order() - 1);
  } else {
    try {
      const InitialPoint ip = initial_point(*p, cfg);
      x0 = ip.x0;
      y0 = ip.y0;
      init_iterations = ip.init_iterations;
      init_ms = ip.elapsed_ms;
    } catch (const InitializationError& e) {
      err << "error: initialization failed: " << e.what() << "\n";
      return kExitInfeasible;
    }
  }

  const SolveReport report =
      extended ? solve_nonnegative(*p, y0, cfg, mode) : solve_positive(*p, *x0, cfg);

  out << "solver: " << (extended ? "extended" : "basic");
  if (extended) out << " (" << to_string(mode) << ")";
  out << "\nstatus: " << to_string(report.status) << "\n";
  if (!report.message.empty()) out << "message: " << report.message << "\n";
  out << "omega: " << format_double(p->omega()) << "\n"
      << "init_iterations: " << init_iterations << "\n"
      << "init_ms: " << format_double(init_ms) << "\n"
      << "iterations: " << report.iterations() << "\n"
      << "residual: " << format_double(report.final_residual) << "\n";
  if (auto q = estimate_order(report.trace)) out << "order_estimate: " << *q << "\n";
  if (!report.x_final.empty()) {
    out << "x: ";
    print_vec(out, report.x_final);
    out << "\n";
    if (!a.out_x.empty()) write_vec_file(a.out_x, report.x_final);
  }
  if (!a.trace.empty()) {
    std::ofstream tf(a.trace);
    if (!tf) throw std::runtime_error(a.trace + ": cannot open for writing");
    write_trace_csv(tf, report);
  }
  return exit_for(report.status);
}

struct GenArgs {
  ProblemSpec spec;
  std::vector<std::size_t> keep1;
  std::string out_dir, storage;
};

int cmd_gen(GenArgs a, std::ostream& out, std::ostream& err) {
  if (!a.keep1.empty()) {
    IndexSet keep;
    for (auto k : a.keep1) {
      if (k < 1 || k > a.spec.n) {
        err << "error: --keep index " << k << " outside 1.." << a.spec.n << "\n";
        return kExitIoError;
      }
      keep.push_back(k - 1);
    }
    a.spec.keep = keep;
  }
  if (a.spec.id == 3 && a.spec.n < 3) {
    err << "error: problem 3 needs --n >= 3\n";
    return kExitIoError;
  }
  MTeqProblem p = [&] {
    try {
      return generate_problem(a.spec);
    } catch (const DenseCapExceeded&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw CLI::ValidationError(e.what());
    }
  }();
  Tensor t = p.tensor();
  if (a.storage == "dense") t = t.to_dense();
  else if (a.storage == "coo") t = t.to_coo();
  else if (!a.storage.empty()) {
    err << "error: --storage must be dense or coo\n";
    return kExitIoError;
  }
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  write_tensor_file(dir / "A.mt", t);
  write_vec_file(dir / "b.vec", p.rhs());
  std::ofstream mf(dir / "manifest.json");
  if (!mf) throw std::runtime_error((dir / "manifest.json").string() + ": cannot open for writing");
  mf << manifest_json(a.spec, p);
  out << "wrote " << (dir / "A.mt").string() << ", " << (dir / "b.vec").string() << ", "
      << (dir / "manifest.json").string() << "\n";
  return kExitConverged;
}

int cmd_verify(const std::string& tensor_path, const std::string& rhs_path, std::ostream& out) {
  const Tensor a = read_tensor_file(tensor_path);
  std::optional<Vec> b;
  if (!rhs_path.empty()) b = read_vec_file(rhs_path);

  const bool z = is_z_tensor(a);
  out << "z_tensor: " << (z ? "yes" : "no") << "\n";
  out << "diag_dominant: " << (is_diag_dominant(a) ? "yes" : "no") << "\n";
  out << "semi_symmetric: " << (is_semi_symmetric(a, 1e-12) ? "yes" : "no") << "\n";

  bool certified = false;
  if (z) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s = std::max(s, a.diagonal(i));
    const SpectralBracket br = nqz_spectral_radius(shifted_identity_minus(s, a));
    out << "s: " << format_double(s) << "\n"
        << "rho_bracket: [" << format_double(br.lower) << ", " << format_double(br.upper) << "]"
        << (br.perturbed ? " (perturbed)" : "") << "\n";
    const bool nqz_ok = br.upper < s;

    bool init_ok = false;
    try {
      const MTeqProblem unit(a, Vec(a.dim(), 1.0));
      const InitialPoint ip = initial_point(unit, SolverConfig{});
      init_ok = true;
      out << "certificate: apply(A, u) > 0 with u after " << ip.init_iterations
          << " Jacobi sweeps, u = ";
      print_vec(out, ip.u);
      out << "\n";
    } catch (const std::exception& e) {
      out << "certificate: not found (" << e.what() << ")\n";
    }
    certified = init_ok || nqz_ok;

    if (b) {
      if (b->size() != a.dim()) throw DimensionError("rhs length does not match tensor dimension");
      try {
        const MTeqProblem p(a, *b);
        out << "assumption_b_nonneg: " << check_assumption_B(p).describe() << "\n";
      } catch (const std::invalid_argument& e) {
        out << "assumption_b_nonneg: cannot check (" << e.what() << ")\n";
      }
    }
  }
  out << "strong_m_tensor: " << (certified ? "pass" : "fail") << "\n";
  return certified ? kExitConverged : kExitInfeasible;
}

struct BenchArgs {
  std::vector<int> problems{1};
  std::vector<int> ms{3};
  std::vector<std::size_t> ns{50};
  int trials = 20;
  std::uint64_t seed = 0;
  double zero_frac = 0.0;
  std::string method = "basic", format = "md", out_path;
  int jobs = 1;
  SolverConfig cfg;
  bool cfg_relative = false;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const BenchMethod method = parse_bench_method(a.method);
  if (a.format != "md" && a.format != "csv") {
    err << "error: --format must be md or csv\n";
    return kExitIoError;
  }
  std::vector<BenchCell> cells;
  for (int id : a.problems) {
    for (int m : a.ms) {
      if (id == 3 && m != 4) continue;  // problem 3 is fixed at order 4
      for (auto n : a.ns) {
        ProblemSpec spec;
        spec.id = id;
        spec.m = m;
        spec.n = n;
        spec.seed = a.seed;
        spec.zero_frac = a.zero_frac;
        SolverConfig cfg = a.cfg;
        cfg.stop = a.cfg_relative ? StopRule::Relative : default_stop(id);
        cells.push_back(run_cell(spec, method, a.trials, cfg, a.jobs));
      }
    }
  }
  std::ostringstream table;
  if (a.format == "md") write_bench_markdown(table, cells);
  else write_bench_csv(table, cells);
  if (a.out_path.empty()) {
    out << table.str();
  } else {
    std::ofstream f(a.out_path);
    if (!f) throw std::runtime_error(a.out_path + ": cannot open for writing");
    f << table.str();
    out << "wrote " << a.out_path << "\n";
  }
  for (const auto& c : cells)
    for (const auto& r : c.results)
      if (!r.success)
        err << "problem " << c.problem.id << " (" << c.problem.m << "," << c.problem.n
            << ") seed " << r.seed << ": " << r.message << "\n";
  return kExitConverged;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver for M-tensor equations A x^{m-1} = b", "mteq"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "solve A x^{m-1} = b from files");
  solve->add_option("--tensor", sa.tensor, "tensor .mt file")->required();
  solve->add_option("--rhs", sa.rhs, "right-hand side .vec file")->required();
  solve->add_option("--x0", sa.x0, "starting point .vec (default: initializer)");
  solve->add_option("--mode", sa.mode, "step rule for b >= 0: plain|step3prime")
      ->capture_default_str();
  solve->add_option("--out-x", sa.out_x, "write the solution .vec here");
  solve->add_option("--trace", sa.trace, "write the iteration trace CSV here");
  solve->add_flag("--relative", sa.relative, "stop on ||f|| / ||b|| <= eta");
  solve->add_flag("--no-scale", sa.no_scale, "skip scaling by max(|A|, |b|)");
  add_tuning(solve, sa.cfg);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "generate a benchmark problem");
  gen->add_option("--problem", ga.spec.id, "problem id 1..5")
      ->required()
      ->check(CLI::Range(1, 5));
  gen->add_option("--m", ga.spec.m, "order")->capture_default_str();
  gen->add_option("--n", ga.spec.n, "dimension")->capture_default_str();
  gen->add_option("--seed", ga.spec.seed, "seed")->capture_default_str();
  gen->add_option("--c0", ga.spec.c0, "problem 3 left boundary value")->capture_default_str();
  gen->add_option("--c1", ga.spec.c1, "problem 3 right boundary value")->capture_default_str();
  gen->add_option("--zero-frac", ga.spec.zero_frac, "fraction of b to zero")
      ->capture_default_str();
  gen->add_option("--keep", ga.keep1, "1-based indices of b never zeroed");
  gen->add_option("--storage", ga.storage, "dense|coo (default: generator's choice)");
  gen->add_option("--out", ga.out_dir, "output directory")->required();

  std::string vt, vr;
  auto* verify = app.add_subcommand("verify", "check M-tensor properties of a tensor file");
  verify->add_option("--tensor", vt, "tensor .mt file")->required();
  verify->add_option("--rhs", vr, "optional rhs .vec for the b >= 0 structural check");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "run seeded benchmark cells");
  bench->add_option("--problem", ba.problems, "problem ids")->check(CLI::Range(1, 5));
  bench->add_option("--m", ba.ms, "orders");
  bench->add_option("--n", ba.ns, "dimensions");
  bench->add_option("--trials", ba.trials, "trials per cell")->capture_default_str();
  bench->add_option("--seed", ba.seed, "first seed")->capture_default_str();
  bench->add_option("--zero-frac", ba.zero_frac, "fraction of b to zero")->capture_default_str();
  bench->add_option("--method", ba.method, "basic|extended|extended-plain")
      ->capture_default_str();
  bench->add_option("--format", ba.format, "md|csv")->capture_default_str();
  bench->add_option("--out", ba.out_path, "output file (default stdout)");
  bench->add_option("--jobs", ba.jobs, "parallel trials")->capture_default_str();
  bench->add_flag("--relative", ba.cfg_relative, "relative stop for every problem");
  add_tuning(bench, ba.cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }

  try {
    if (solve->parsed()) return cmd_solve(sa, out, err);
    if (gen->parsed()) return cmd_gen(ga, out, err);
    if (verify->parsed()) return cmd_verify(vt, vr, out);
    if (bench->parsed()) return cmd_bench(ba, out, err);
  } catch (const DenseCapExceeded& e) {
    err << "error: " << e.what() << " (raise MTEQ_DENSE_CAP or use coo storage)\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitIoError;
}

}  // namespace mteq
