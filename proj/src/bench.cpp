#include "ggs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ggs/error.hpp"
#include "ggs/matrix_market.hpp"
#include "ggs/rng.hpp"

namespace ggs {

namespace {

// x_star (and z for inconsistent rows) are drawn from a stream separate from
// the matrix entries.
constexpr std::uint64_t kSolutionStream = 1;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<std::pair<Index, Index>> parse_random_source(const std::string& source, std::size_t line_no) {
  const std::string prefix = "random:";
  if (source.rfind(prefix, 0) != 0) return std::nullopt;
  const std::string dims = source.substr(prefix.size());
  const auto x = dims.find_first_of("xX");
  if (x == std::string::npos) throw ParseError(line_no, "random source must look like random:MxN");
  long long m = 0;
  long long n = 0;
  const auto r1 = std::from_chars(dims.data(), dims.data() + x, m);
  const auto r2 = std::from_chars(dims.data() + x + 1, dims.data() + dims.size(), n);
  if (r1.ec != std::errc() || r1.ptr != dims.data() + x || r2.ec != std::errc() ||
      r2.ptr != dims.data() + dims.size() || n < 1 || m < n) {
    throw ParseError(line_no, "invalid random dimensions '" + dims + "' (need m >= n >= 1)");
  }
  return std::make_pair(static_cast<Index>(m), static_cast<Index>(n));
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

double mean(const std::vector<double>& v) {
  double acc = 0;
  for (const double x : v) acc += x;
  return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v, double mu) {
  if (v.size() < 2) return 0.0;
  double acc = 0;
  for (const double x : v) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() != 4) throw ParseError(line_no, "expected: <label> <source> <consistent|inconsistent> <seed>");

    ManifestEntry entry;
    entry.label = tokens[0];
    entry.random_dims = parse_random_source(tokens[1], line_no);
    if (!entry.random_dims) {
      entry.path = tokens[1];
      if (entry.path.is_relative() && !base_dir.empty()) entry.path = base_dir / entry.path;
    }
    const std::string consistency = lower(tokens[2]);
    if (consistency == "consistent") entry.consistent = true;
    else if (consistency == "inconsistent") entry.consistent = false;
    else throw ParseError(line_no, "consistency must be 'consistent' or 'inconsistent'");

    const auto& seed = tokens[3];
    const auto [ptr, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), entry.seed);
    if (ec != std::errc() || ptr != seed.data() + seed.size()) throw ParseError(line_no, "invalid seed '" + seed + "'");
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest '" + path.string() + "'");
  return parse_manifest(in, path.parent_path());
}

void ExperimentSpec::validate() const {
  if (repeats < 1) throw Error(ErrorCode::InvalidArgument, "repeats must be >= 1");
  if (methods.empty()) throw Error(ErrorCode::InvalidArgument, "at least one method is required");
  if (jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
}

const MethodSummary* ExperimentResult::summary(Method method) const {
  for (const auto& s : methods)
    if (s.method == method) return &s;
  return nullptr;
}

LsqProblem build_trial_problem(const ManifestEntry& entry, std::uint64_t trial_seed,
                               const std::optional<SparseMatrixd>& loaded) {
  MatrixVariant matrix;
  if (entry.random_dims) {
    matrix = gen_gaussian(entry.random_dims->first, entry.random_dims->second, trial_seed);
  } else if (loaded) {
    matrix = *loaded;
  } else {
    matrix = load_matrix_market(entry.path);
  }
  const std::uint64_t solution_seed = derive_seed(trial_seed, kSolutionStream);
  return entry.consistent ? make_consistent(std::move(matrix), solution_seed, entry.label)
                          : make_inconsistent(std::move(matrix), solution_seed, entry.label);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const ManifestEntry& entry = spec.problem;

  std::optional<SparseMatrixd> loaded;
  if (!entry.random_dims) loaded = load_matrix_market(entry.path);

  const auto repeats = static_cast<std::size_t>(spec.repeats);
  std::vector<std::vector<TrialRecord>> per_trial(repeats);
  std::vector<std::string> trial_errors(repeats);

  auto run_trial = [&](std::size_t t) {
    const std::uint64_t trial_seed = spec.base_seed + t;
    LsqProblem problem;
    try {
      problem = build_trial_problem(entry, entry.random_dims ? trial_seed : spec.base_seed, loaded);
    } catch (const std::exception& e) {
      trial_errors[t] = e.what();
      for (const Method m : spec.methods) {
        TrialRecord rec;
        rec.trial = static_cast<int>(t);
        rec.method = m;
        rec.failed = true;
        rec.error = e.what();
        per_trial[t].push_back(rec);
      }
      return;
    }
    for (const Method m : spec.methods) {
      TrialRecord rec;
      rec.trial = static_cast<int>(t);
      rec.method = m;
      SolverConfig config;
      config.method = m;
      config.max_iterations = spec.max_iterations;
      config.res_tolerance = spec.res_tolerance;
      config.tie_tolerance_rel = spec.tie_tolerance_rel;
      config.seed = trial_seed;
      try {
        const auto report = solve(problem, config);
        rec.iterations = report.iterations;
        rec.cpu_seconds = report.elapsed_seconds;
        rec.stop_reason = report.stop_reason;
        rec.final_res = report.final_res;
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      per_trial[t].push_back(rec);
    }
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), repeats);
  if (workers <= 1) {
    for (std::size_t t = 0; t < repeats; ++t) run_trial(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < repeats; t = next++) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  result.label = entry.label;
  result.consistent = entry.consistent;
  result.repeats = spec.repeats;
  if (entry.random_dims) {
    result.rows = entry.random_dims->first;
    result.cols = entry.random_dims->second;
    result.density = 1.0;
  } else {
    result.rows = loaded->rows();
    result.cols = loaded->cols();
    result.density = density(MatrixVariant(*loaded));
  }
  for (auto& records : per_trial)
    for (auto& rec : records) result.trials.push_back(std::move(rec));

  for (const Method m : spec.methods) {
    MethodSummary summary;
    summary.method = m;
    std::vector<double> its;
    std::vector<double> cpus;
    for (const auto& rec : result.trials) {
      if (rec.method != m) continue;
      if (rec.failed) {
        ++summary.failed;
        result.warnings.push_back("trial " + std::to_string(rec.trial) + " " + std::string(to_string(m)) +
                                  " failed: " + rec.error);
        continue;
      }
      ++summary.completed;
      if (rec.stop_reason == StopReason::ITERATION_CAP) {
        ++summary.capped;
        result.warnings.push_back("trial " + std::to_string(rec.trial) + " " + std::string(to_string(m)) +
                                  " hit the iteration cap");
      }
      its.push_back(static_cast<double>(rec.iterations));
      cpus.push_back(rec.cpu_seconds);
    }
    summary.mean_iterations = mean(its);
    summary.mean_cpu_seconds = mean(cpus);
    summary.stddev_iterations = stddev(its, summary.mean_iterations);
    summary.stddev_cpu_seconds = stddev(cpus, summary.mean_cpu_seconds);
    result.methods.push_back(summary);
  }

  const MethodSummary* ggs = result.summary(Method::GGS);
  if (ggs && ggs->completed > 0) {
    for (auto& s : result.methods) {
      if (s.completed == 0) continue;
      if (ggs->mean_iterations > 0) s.it_speedup = s.mean_iterations / ggs->mean_iterations;
      if (ggs->mean_cpu_seconds > 0) s.cpu_speedup = s.mean_cpu_seconds / ggs->mean_cpu_seconds;
    }
    if (const MethodSummary* grcd = result.summary(Method::GRCD)) {
      result.it_speedup = grcd->it_speedup;
      result.cpu_speedup = grcd->cpu_speedup;
    }
  }
  return result;
}

TableFormat parse_table_format(std::string_view name) {
  const std::string key = lower(std::string(name));
  if (key == "csv") return TableFormat::Csv;
  if (key == "markdown" || key == "md") return TableFormat::Markdown;
  throw Error(ErrorCode::InvalidArgument, "unknown table format '" + std::string(name) + "'");
}

std::string emit_table(const std::vector<ExperimentResult>& results, TableFormat format) {
  std::vector<Method> methods{Method::GGS, Method::GRCD};
  if (!results.empty()) {
    methods.clear();
    for (const auto& s : results.front().methods) methods.push_back(s.method);
  }
  std::vector<Method> compared;
  for (const Method m : methods)
    if (m != Method::GGS) compared.push_back(m);
  const bool has_ggs = std::find(methods.begin(), methods.end(), Method::GGS) != methods.end();

  std::vector<std::string> header{"problem", "m x n", "density"};
  for (const Method m : methods) header.push_back("IT " + std::string(to_string(m)));
  if (has_ggs)
    for (const Method m : compared) header.push_back("IT speed-up " + std::string(to_string(m)));
  for (const Method m : methods) header.push_back("CPU " + std::string(to_string(m)));
  if (has_ggs)
    for (const Method m : compared) header.push_back("CPU speed-up " + std::string(to_string(m)));
  header.push_back("failed");
  header.push_back("capped");

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    std::vector<std::string> row{r.label, std::to_string(r.rows) + "x" + std::to_string(r.cols), fixed4(r.density)};
    auto cell = [&](Method m, auto getter) -> std::string {
      const MethodSummary* s = r.summary(m);
      if (!s) return "";
      const std::optional<double> v = getter(*s);
      return v ? fixed4(*v) : "";
    };
    auto mean_it = [](const MethodSummary& s) -> std::optional<double> {
      if (s.completed == 0) return std::nullopt;
      return s.mean_iterations;
    };
    auto mean_cpu = [](const MethodSummary& s) -> std::optional<double> {
      if (s.completed == 0) return std::nullopt;
      return s.mean_cpu_seconds;
    };
    for (const Method m : methods) row.push_back(cell(m, mean_it));
    if (has_ggs)
      for (const Method m : compared) row.push_back(cell(m, [](const MethodSummary& s) { return s.it_speedup; }));
    for (const Method m : methods) row.push_back(cell(m, mean_cpu));
    if (has_ggs)
      for (const Method m : compared) row.push_back(cell(m, [](const MethodSummary& s) { return s.cpu_speedup; }));
    int failed = 0;
    int capped = 0;
    for (const auto& s : r.methods) {
      failed += s.failed;
      capped += s.capped;
    }
    row.push_back(std::to_string(failed));
    row.push_back(std::to_string(capped));
    rows.push_back(std::move(row));
  }

  std::ostringstream out;
  if (format == TableFormat::Csv) {
    auto emit = [&](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
      out << "\r\n";
    };
    emit(header);
    for (const auto& row : rows) emit(row);
  } else {
    auto emit = [&](const std::vector<std::string>& fields) {
      out << '|';
      for (const auto& f : fields) out << ' ' << f << " |";
      out << '\n';
    };
    emit(header);
    out << '|';
    for (std::size_t i = 0; i < header.size(); ++i) out << (i < 3 ? " --- |" : " ---: |");
    out << '\n';
    for (const auto& row : rows) emit(row);
  }
  return out.str();
}

void write_convergence_curve(std::ostream& out, const std::vector<StepRecord<double>>& trace) {
  const bool with_res = !trace.empty() && trace.front().res.has_value();
  out << (with_res ? "iteration,gradient_norm_sq,res\n" : "iteration,gradient_norm_sq\n");
  char buf[128];
  for (const auto& rec : trace) {
    if (with_res) {
      std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(rec.iteration),
                    rec.residual_gradient_norm_sq, rec.res.value_or(0.0));
    } else {
      std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(rec.iteration),
                    rec.residual_gradient_norm_sq);
    }
    out << buf;
  }
}

void emit_convergence_curve(const std::vector<StepRecord<double>>& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  write_convergence_curve(out, trace);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace ggs
