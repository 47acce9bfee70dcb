#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ggs/analysis.hpp"
#include "ggs/bench.hpp"
#include "ggs/error.hpp"
#include "ggs/matrix_market.hpp"
#include "ggs/problems.hpp"
#include "ggs/rng.hpp"
#include "ggs/solver.hpp"

namespace ggs::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kSolutionStream = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

// Flags shared by solve, verify-bounds and gen for describing a problem.
struct ProblemFlags {
  std::string matrix_path;
  std::vector<std::uint64_t> random;  // m n seed
  std::string rhs_path;
  std::string solution_path;
  bool consistent = false;
  bool inconsistent = false;
  std::uint64_t seed = 0;

  void attach(CLI::App& app, bool allow_matrix_file) {
    if (allow_matrix_file) app.add_option("matrix", matrix_path, "MatrixMarket file holding A");
    app.add_option("--random", random, "Gaussian A of size M x N from SEED")->expected(3)->type_name("M N SEED");
    if (allow_matrix_file) {
      app.add_option("--rhs", rhs_path, "right-hand side b, one value per line");
      app.add_option("--solution", solution_path, "known solution x_star, one value per line");
    }
    app.add_flag("--consistent", consistent, "b = A x_star with random x_star");
    app.add_flag("--inconsistent", inconsistent, "b = A x_star + r0, r0 in null(A^T)");
    app.add_option("--seed", seed, "seed for x_star (matrix files) and randomized methods");
  }

  std::uint64_t problem_seed() const { return random.empty() ? seed : random[2]; }

  LsqProblem build() const {
    const bool from_file = !matrix_path.empty();
    const bool from_random = !random.empty();
    if (from_file == from_random) throw UsageError("give exactly one of a matrix file or --random M N SEED");
    const int rhs_modes = int(!rhs_path.empty()) + int(consistent) + int(inconsistent);
    if (rhs_modes != 1) throw UsageError("give exactly one of --rhs, --consistent or --inconsistent");

    MatrixVariant matrix;
    std::string label;
    if (from_random) {
      if (random[0] < 1 || random[1] < 1) throw UsageError("--random needs positive dimensions");
      matrix = gen_gaussian(static_cast<Index>(random[0]), static_cast<Index>(random[1]), random[2]);
      label = "random";
    } else {
      if (!fs::exists(matrix_path)) throw MissingInput("matrix file '" + matrix_path + "' does not exist");
      matrix = load_matrix_market(matrix_path);
      label = fs::path(matrix_path).stem().string();
    }

    const std::uint64_t solution_seed = derive_seed(problem_seed(), kSolutionStream);
    LsqProblem problem;
    if (consistent) {
      problem = make_consistent(std::move(matrix), solution_seed, label);
    } else if (inconsistent) {
      problem = make_inconsistent(std::move(matrix), solution_seed, label);
    } else {
      if (!fs::exists(rhs_path)) throw MissingInput("rhs file '" + rhs_path + "' does not exist");
      problem.density = density(matrix);
      problem.matrix = std::move(matrix);
      problem.rhs = load_vector(rhs_path);
      problem.label = label;
      problem.consistent = false;
      if (problem.rhs.size() != problem.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "rhs has " + std::to_string(problem.rhs.size()) +
                                                      " entries, matrix has " + std::to_string(problem.rows()) + " rows");
      }
    }
    if (!solution_path.empty()) {
      if (!fs::exists(solution_path)) throw MissingInput("solution file '" + solution_path + "' does not exist");
      problem.known_solution = load_vector(solution_path);
      if (problem.known_solution->size() != problem.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "solution length does not match the matrix");
      }
    }
    return problem;
  }
};

struct SolveFlags {
  std::string method = "ggs";
  double tol = 1e-6;
  std::int64_t max_iters = 200000;
  double tie_tol = 1e-12;

  void attach(CLI::App& app, bool with_method) {
    if (with_method) app.add_option("--method", method, "ggs | ggs-randomized | grcd | rgs")->capture_default_str();
    app.add_option("--tol", tol, "RES tolerance (relative gradient without x_star)")->capture_default_str();
    app.add_option("--max-iters", max_iters, "iteration cap")->capture_default_str();
    app.add_option("--tie-tol", tie_tol, "relative tolerance defining the greedy candidate set")->capture_default_str();
  }

  SolverConfig config(std::uint64_t seed) const {
    SolverConfig c;
    c.method = parse_method(method);
    c.res_tolerance = tol;
    c.max_iterations = max_iters;
    c.tie_tolerance_rel = tie_tol;
    c.seed = seed;
    return c;
  }
};

void print_problem(std::ostream& out, const LsqProblem& p) {
  out << "problem: " << p.label << ' ' << p.rows() << 'x' << p.cols() << ' '
      << (p.known_solution ? (p.consistent ? "consistent" : "inconsistent") : "rhs") << '\n';
}

int cmd_solve(const ProblemFlags& pf, const SolveFlags& sf, const std::string& trace_path, std::ostream& out,
              std::ostream& err) {
  const LsqProblem problem = pf.build();
  SolverConfig config = sf.config(pf.problem_seed());
  config.record_trace = !trace_path.empty();
  const auto report = solve(problem, config);

  print_problem(out, problem);
  out << "method: " << to_string(config.method) << '\n';
  out << "iterations: " << report.iterations << '\n';
  out << "stop_reason: " << to_string(report.stop_reason) << '\n';
  out << (problem.known_solution ? "final_res: " : "final_relative_gradient: ") << sci(report.final_res) << '\n';
  out << "gradient_norm_sq: " << sci(report.final_gradient_norm_sq) << '\n';
  err << "elapsed_seconds: " << report.elapsed_seconds << '\n';
  if (config.record_trace) emit_convergence_curve(report.trace, trace_path);
  return report.stop_reason == StopReason::ITERATION_CAP ? kExitIterationCap : kExitOk;
}

int cmd_verify_bounds(const ProblemFlags& pf, const SolveFlags& sf, const std::string& out_path,
                      std::ostream& out) {
  LsqProblem problem = pf.build();
  if (parse_method(sf.method) != Method::GGS) throw UsageError("verify-bounds checks the GGS method only");
  const double cond = assert_full_column_rank(problem.matrix);
  if (!problem.known_solution) problem.known_solution = reference_solution(problem);
  const double lambda = lambda_min_pos(problem.matrix);

  SolverConfig config = sf.config(pf.problem_seed());
  config.record_trace = true;
  const auto solved = solve(problem, config);

  BoundReport report = verify_trace(solved.trace, lambda, problem.cols());
  if (problem.cols() >= 2) report.grcd_expected_factor = grcd_expected_factor(problem.matrix, lambda);

  std::ostringstream text;
  print_problem(text, problem);
  text << "iterations: " << solved.iterations << '\n';
  text << "stop_reason: " << to_string(solved.stop_reason) << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", cond);
  text << "condition_estimate: " << buf << '\n';
  text << to_text(report);
  text << "result: " << (report.violations.empty() ? "PASS" : "FAIL") << '\n';

  out << text.str();
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw Error(ErrorCode::Io, "cannot write '" + out_path + "'");
    file << text.str();
  }
  return report.violations.empty() ? kExitOk : kExitError;
}

int cmd_gen(const ProblemFlags& pf, const std::string& matrix_out, const std::string& rhs_out,
            const std::string& solution_out, std::ostream& out) {
  if (pf.random.empty()) throw UsageError("gen needs --random M N SEED");
  if (pf.consistent && pf.inconsistent) throw UsageError("--consistent and --inconsistent are exclusive");
  const DenseMatrixd A =
      gen_gaussian(static_cast<Index>(pf.random[0]), static_cast<Index>(pf.random[1]), pf.random[2]);
  save_matrix_market(matrix_out, A.sparseView(0.0, 0.0));
  out << "matrix: " << matrix_out << ' ' << A.rows() << 'x' << A.cols() << '\n';
  if (!rhs_out.empty() || !solution_out.empty()) {
    const std::uint64_t solution_seed = derive_seed(pf.random[2], kSolutionStream);
    const LsqProblem problem =
        pf.inconsistent ? make_inconsistent(A, solution_seed, "random") : make_consistent(A, solution_seed, "random");
    if (!rhs_out.empty()) {
      save_vector(rhs_out, problem.rhs);
      out << "rhs: " << rhs_out << '\n';
    }
    if (!solution_out.empty()) {
      save_vector(solution_out, *problem.known_solution);
      out << "solution: " << solution_out << '\n';
    }
  }
  return kExitOk;
}

int cmd_info(const std::string& path, std::ostream& out) {
  if (!fs::exists(path)) throw MissingInput("matrix file '" + path + "' does not exist");
  const SparseMatrixd A = load_matrix_market(path);
  const MatrixVariant matrix = A;
  char buf[64];
  out << "rows: " << A.rows() << '\n' << "cols: " << A.cols() << '\n' << "nnz: " << A.nonZeros() << '\n';
  std::snprintf(buf, sizeof buf, "%.4f", 100.0 * density(matrix));
  out << "density_percent: " << buf << '\n';
  try {
    const double cond = assert_full_column_rank(matrix);
    std::snprintf(buf, sizeof buf, "%.4f", cond);
    out << "condition_estimate: " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.10g", lambda_min_pos(matrix));
    out << "lambda_min: " << buf << '\n';
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient) throw;
    out << "condition_estimate: rank_deficient\n";
  }
  return kExitOk;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return s;
}

struct BenchFlags {
  std::string manifest;
  int repeats = 50;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "csv";
  int jobs = 1;
  std::vector<std::string> methods{"ggs", "grcd"};
  double tol = 1e-6;
  std::int64_t max_iters = 200000;
};

int cmd_bench(const BenchFlags& bf, std::ostream& out, std::ostream& err) {
  if (!fs::exists(bf.manifest)) throw MissingInput("manifest '" + bf.manifest + "' does not exist");
  const TableFormat format = parse_table_format(bf.format);
  std::vector<Method> methods;
  for (const auto& m : bf.methods) methods.push_back(parse_method(m));
  const auto entries = load_manifest(bf.manifest);
  if (!bf.out_dir.empty()) fs::create_directories(bf.out_dir);

  bool any_failed = false;
  std::vector<ExperimentResult> results;
  for (const auto& entry : entries) {
    ExperimentSpec spec;
    spec.problem = entry;
    spec.methods = methods;
    spec.repeats = bf.repeats;
    spec.base_seed = bf.seed.value_or(entry.seed);
    spec.res_tolerance = bf.tol;
    spec.max_iterations = bf.max_iters;
    spec.jobs = bf.jobs;
    try {
      ExperimentResult result = run_experiment(spec);
      for (const auto& w : result.warnings) err << "warning: " << entry.label << ": " << w << '\n';
      for (const auto& s : result.methods) any_failed = any_failed || s.failed > 0;

      if (!bf.out_dir.empty()) {
        const LsqProblem problem = build_trial_problem(entry, spec.base_seed);
        for (const Method m : methods) {
          SolverConfig config;
          config.method = m;
          config.res_tolerance = spec.res_tolerance;
          config.max_iterations = spec.max_iterations;
          config.seed = spec.base_seed;
          config.record_trace = true;
          const auto report = solve(problem, config);
          const std::string name = sanitize(entry.label) + "_" + sanitize(std::string(to_string(m))) + "_curve.csv";
          emit_convergence_curve(report.trace, fs::path(bf.out_dir) / name);
        }
      }
      results.push_back(std::move(result));
    } catch (const std::exception& e) {
      any_failed = true;
      err << "error: experiment '" << entry.label << "' failed: " << e.what() << '\n';
    }
  }

  const std::string table = emit_table(results, format);
  out << table;
  if (!bf.out_dir.empty()) {
    const fs::path table_path = fs::path(bf.out_dir) / (format == TableFormat::Csv ? "results.csv" : "results.md");
    std::ofstream file(table_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::Io, "cannot write '" + table_path.string() + "'");
    file << table;
  }
  return any_failed ? kExitError : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Greedy Gauss-Seidel and coordinate-descent least-squares solvers", "ggs"};
  app.require_subcommand(1);

  ProblemFlags solve_problem;
  SolveFlags solve_flags;
  std::string trace_path;
  auto* solve_cmd = app.add_subcommand("solve", "solve one least-squares problem");
  solve_problem.attach(*solve_cmd, true);
  solve_flags.attach(*solve_cmd, true);
  solve_cmd->add_option("--trace", trace_path, "write the convergence curve CSV here");

  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "run repeated-trial experiments from a manifest");
  bench_cmd->add_option("manifest", bench_flags.manifest, "experiment manifest")->required();
  bench_cmd->add_option("--repeats", bench_flags.repeats, "trials per experiment")->capture_default_str();
  bench_cmd->add_option("--seed", bench_flags.seed, "base seed (overrides the manifest seeds)");
  bench_cmd->add_option("--out", bench_flags.out_dir, "directory for tables and curves");
  bench_cmd->add_option("--format", bench_flags.format, "csv | markdown")->capture_default_str();
  bench_cmd->add_option("--jobs", bench_flags.jobs, "parallel trials")->capture_default_str();
  bench_cmd->add_option("--methods", bench_flags.methods, "methods to compare")->delimiter(',');
  bench_cmd->add_option("--tol", bench_flags.tol, "RES tolerance")->capture_default_str();
  bench_cmd->add_option("--max-iters", bench_flags.max_iters, "iteration cap")->capture_default_str();

  ProblemFlags verify_problem;
  SolveFlags verify_flags;
  std::string report_path;
  auto* verify_cmd = app.add_subcommand("verify-bounds", "check GGS iterates against the convergence bounds");
  verify_problem.attach(*verify_cmd, true);
  verify_flags.attach(*verify_cmd, true);
  verify_cmd->add_option("--out", report_path, "write the bound report here");

  ProblemFlags gen_problem;
  std::string gen_matrix;
  std::string gen_rhs;
  std::string gen_solution;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random problem as files");
  gen_problem.attach(*gen_cmd, false);
  gen_cmd->add_option("--matrix", gen_matrix, "output MatrixMarket file")->required();
  gen_cmd->add_option("--rhs", gen_rhs, "output right-hand side");
  gen_cmd->add_option("--solution", gen_solution, "output x_star");

  std::string info_path;
  auto* info_cmd = app.add_subcommand("info", "print matrix statistics");
  info_cmd->add_option("matrix", info_path, "MatrixMarket file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_problem, solve_flags, trace_path, out, err);
    if (*bench_cmd) return cmd_bench(bench_flags, out, err);
    if (*verify_cmd) return cmd_verify_bounds(verify_problem, verify_flags, report_path, out);
    if (*gen_cmd) return cmd_gen(gen_problem, gen_matrix, gen_rhs, gen_solution, out);
    if (*info_cmd) return cmd_info(info_path, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MissingInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoInput;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace ggs::cli
