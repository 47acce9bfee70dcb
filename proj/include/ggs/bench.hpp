#pragma once

// Repeated-trial experiments comparing coordinate-descent methods: mean
// iteration counts and solve times, speed-ups against GGS, and table /
// convergence-curve emission.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ggs/problems.hpp"
#include "ggs/solver.hpp"

namespace ggs {

/// One manifest row:
///   <label> <source> <consistent|inconsistent> <seed>
/// where <source> is either "random:MxN" or a MatrixMarket path (relative
/// paths resolve against the manifest's directory).
struct ManifestEntry {
  std::string label;
  std::optional<std::pair<Index, Index>> random_dims;
  std::filesystem::path path;
  bool consistent = true;
  std::uint64_t seed = 0;
};

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {});
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

struct ExperimentSpec {
  ManifestEntry problem;
  std::vector<Method> methods{Method::GGS, Method::GRCD};
  int repeats = 50;
  std::uint64_t base_seed = 0;
  double res_tolerance = 1e-6;
  std::int64_t max_iterations = 200000;
  double tie_tolerance_rel = 1e-12;
  int jobs = 1;

  void validate() const;
};

struct TrialRecord {
  int trial = 0;
  Method method = Method::GGS;
  std::int64_t iterations = 0;
  double cpu_seconds = 0;
  StopReason stop_reason = StopReason::ITERATION_CAP;
  double final_res = 0;
  bool failed = false;
  std::string error;
};

struct MethodSummary {
  Method method = Method::GGS;
  double mean_iterations = 0;
  double mean_cpu_seconds = 0;
  double stddev_iterations = 0;
  double stddev_cpu_seconds = 0;
  int completed = 0;
  int failed = 0;
  int capped = 0;
  // Relative to GGS: this method's mean over GGS's mean (1 for GGS itself).
  std::optional<double> it_speedup;
  std::optional<double> cpu_speedup;
};

struct ExperimentResult {
  std::string label;
  Index rows = 0;
  Index cols = 0;
  double density = 1.0;
  bool consistent = true;
  int repeats = 0;
  std::vector<MethodSummary> methods;
  std::vector<TrialRecord> trials;  // sorted by (trial, method order)
  // GRCD over GGS when both ran.
  std::optional<double> it_speedup;
  std::optional<double> cpu_speedup;
  std::vector<std::string> warnings;

  const MethodSummary* summary(Method method) const;
};

/// Builds the problem a trial solves. Random rows regenerate the matrix per
/// trial from base_seed + trial; file rows load the matrix once and keep
/// x_star fixed, so deterministic methods see the same problem every trial.
LsqProblem build_trial_problem(const ManifestEntry& entry, std::uint64_t trial_seed,
                               const std::optional<SparseMatrixd>& loaded = std::nullopt);

ExperimentResult run_experiment(const ExperimentSpec& spec);

enum class TableFormat { Csv, Markdown };

TableFormat parse_table_format(std::string_view name);

/// Columns: problem, m x n, density, IT per method, IT speed-up per non-GGS
/// method, CPU per method, CPU speed-up per non-GGS method, failed, capped.
/// Numbers use four decimals. An empty list yields the GGS/GRCD header only.
std::string emit_table(const std::vector<ExperimentResult>& results, TableFormat format);

/// CSV of iteration, gradient_norm_sq[, res] per trace record.
void write_convergence_curve(std::ostream& out, const std::vector<StepRecord<double>>& trace);
void emit_convergence_curve(const std::vector<StepRecord<double>>& trace, const std::filesystem::path& path);

}  // namespace ggs
