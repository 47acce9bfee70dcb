#include "ggs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ggs {

namespace {

// Rounding in lambda_min can push an exact-zero factor a hair below zero.
constexpr double kNegativeClamp = 1e-12;

double checked_factor(double value, const char* what) {
  if (value < 0 && value > -kNegativeClamp) value = 0;
  // 1 itself is the rounded limit of a vanishing lambda_min.
  if (!(value >= 0 && value <= 1)) {
    throw Error(ErrorCode::FactorOutOfRange,
                std::string(what) + " = " + std::to_string(value) + " lies outside [0, 1]");
  }
  return value;
}

void require_positive(double v, const char* what) {
  if (!(v > 0)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

double ggs_first_step_factor(double lambda_min, Index n, Index r0_size, double r0_norm_sum) {
  require_positive(lambda_min, "lambda_min");
  require_positive(static_cast<double>(n), "n");
  require_positive(static_cast<double>(r0_size), "|R_0|");
  require_positive(r0_norm_sum, "R_0 norm sum");
  const double factor = 1.0 - lambda_min / (static_cast<double>(r0_size) * r0_norm_sum * static_cast<double>(n));
  return checked_factor(factor, "first-step factor");
}

double ggs_per_step_factor(double lambda_min, Index n, Index rk_size, double rk_norm_sum) {
  if (n == 1) throw Error(ErrorCode::NotApplicable, "per-step factor needs n >= 2");
  require_positive(lambda_min, "lambda_min");
  require_positive(static_cast<double>(n), "n");
  require_positive(static_cast<double>(rk_size), "|R_k|");
  require_positive(rk_norm_sum, "R_k norm sum");
  const double factor =
      1.0 - lambda_min / (static_cast<double>(rk_size) * rk_norm_sum * static_cast<double>(n - 1));
  return checked_factor(factor, "per-step factor");
}

double ggs_cumulative_bound(double first_factor, double per_step_worst, std::int64_t k,
                            double initial_energy_error_sq) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "cumulative bound needs k >= 1");
  return std::pow(per_step_worst, static_cast<double>(k - 1)) * first_factor * initial_energy_error_sq;
}

double grcd_expected_factor(double frob_sq, double min_col_norm_sq, Index n, double lambda_min) {
  if (n < 2) throw Error(ErrorCode::NotApplicable, "GRCD expected factor needs n >= 2");
  require_positive(lambda_min, "lambda_min");
  require_positive(frob_sq - min_col_norm_sq, "||A||_F^2 - min column norm");
  const double factor = 1.0 - 0.5 * (1.0 / (frob_sq - min_col_norm_sq) + 1.0 / frob_sq) * lambda_min;
  return checked_factor(factor, "GRCD expected factor");
}

FactorChain factor_chain(double lambda_min, Index n, Index alpha, double beta, double min_col_norm_sq,
                         double frob_sq) {
  FactorChain chain;
  chain.best = ggs_per_step_factor(lambda_min, n, 1, min_col_norm_sq);
  chain.measured = ggs_per_step_factor(lambda_min, n, alpha, beta);
  chain.worst = ggs_per_step_factor(lambda_min, n, n, frob_sq);
  return chain;
}

BoundReport verify_trace(const std::vector<StepRecord<double>>& trace, double lambda_min, Index n) {
  BoundReport report;
  report.lambda_min = lambda_min;
  report.n = n;
  if (trace.empty()) return report;

  for (const auto& rec : trace) {
    if (!rec.energy_error_sq) {
      throw Error(ErrorCode::MissingEnergyError,
                  "trace record " + std::to_string(rec.iteration) + " has no energy error");
    }
  }

  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const auto& rec = trace[i];
    if (!rec.chosen_index) continue;
    report.alpha = std::max(report.alpha, rec.candidate_set_size);
    report.beta = std::max(report.beta, rec.candidate_norm_sum);

    double factor = 0;
    if (rec.iteration == 0) {
      factor = ggs_first_step_factor(lambda_min, n, rec.candidate_set_size, rec.candidate_norm_sum);
      report.first_step_factor = factor;
    } else if (n >= 2) {
      factor = ggs_per_step_factor(lambda_min, n, rec.candidate_set_size, rec.candidate_norm_sum);
    }
    const double before = *rec.energy_error_sq;
    const double after = *trace[i + 1].energy_error_sq;
    double ratio = 0;
    if (before > 0) {
      ratio = after / before;
    } else if (after > 0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    report.per_step_factors.push_back(factor);
    report.measured_ratios.push_back(ratio);
    if (ratio > factor + kBoundSlack) {
      report.violations.push_back({rec.iteration, ViolationKind::PerStep, ratio, factor});
    }
  }

  if (report.per_step_factors.empty()) return report;
  if (trace.front().iteration != 0) report.first_step_factor = report.per_step_factors.front();

  report.per_step_worst =
      n >= 2 ? ggs_per_step_factor(lambda_min, n, report.alpha, report.beta) : 0.0;

  const double initial = *trace.front().energy_error_sq;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const auto k = static_cast<std::int64_t>(i);
    const double bound_ratio = ggs_cumulative_bound(report.first_step_factor, report.per_step_worst, k, 1.0);
    report.cumulative_factor = bound_ratio;
    if (initial <= 0) continue;
    const double ratio = *trace[i].energy_error_sq / initial;
    if (ratio > bound_ratio + kBoundSlack) {
      report.violations.push_back({trace[i].iteration, ViolationKind::Cumulative, ratio, bound_ratio});
    }
  }
  return report;
}

GrcdAggregate check_grcd_aggregate(const std::vector<std::vector<StepRecord<double>>>& traces,
                                   double expected_factor) {
  if (traces.size() < kMinGrcdRuns) {
    throw Error(ErrorCode::InvalidArgument, "aggregate GRCD check needs at least " + std::to_string(kMinGrcdRuns) +
                                                " runs, got " + std::to_string(traces.size()));
  }
  GrcdAggregate out;
  out.runs = traces.size();
  out.expected_factor = expected_factor;
  double sum = 0;
  double sum_sq = 0;
  for (const auto& trace : traces) {
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
      if (!trace[i].energy_error_sq || !trace[i + 1].energy_error_sq) {
        throw Error(ErrorCode::MissingEnergyError,
                    "trace record " + std::to_string(trace[i].iteration) + " has no energy error");
      }
      const double before = *trace[i].energy_error_sq;
      if (!(before > 0)) continue;
      const double ratio = *trace[i + 1].energy_error_sq / before;
      sum += ratio;
      sum_sq += ratio * ratio;
      ++out.steps;
    }
  }
  if (out.steps == 0) {
    out.within_bound = true;
    return out;
  }
  const auto count = static_cast<double>(out.steps);
  out.mean_ratio = sum / count;
  const double var = out.steps > 1 ? std::max(0.0, (sum_sq - count * out.mean_ratio * out.mean_ratio) / (count - 1)) : 0.0;
  out.standard_error = std::sqrt(var / count);
  out.within_bound = out.mean_ratio <= expected_factor + 3 * out.standard_error;
  return out;
}

std::string to_text(const BoundReport& report) {
  std::ostringstream out;
  out << "lambda_min: " << fmt(report.lambda_min) << '\n';
  out << "n: " << report.n << '\n';
  out << "alpha: " << report.alpha << '\n';
  out << "beta: " << fmt(report.beta) << '\n';
  out << "first_step_factor: " << fmt(report.first_step_factor) << '\n';
  out << "per_step_worst: " << fmt(report.per_step_worst) << '\n';
  out << "cumulative_factor: " << fmt(report.cumulative_factor) << '\n';
  if (report.grcd_expected_factor) {
    out << "grcd_expected_factor: " << fmt(*report.grcd_expected_factor) << '\n';
  }
  out << "steps: " << report.per_step_factors.size() << '\n';
  out << "violations: " << report.violations.size() << '\n';
  for (std::size_t k = 0; k < report.per_step_factors.size(); ++k) {
    out << "step " << k << ": factor " << fmt(report.per_step_factors[k]) << ", measured "
        << fmt(report.measured_ratios[k]) << '\n';
  }
  for (const auto& v : report.violations) {
    out << "violation " << (v.kind == ViolationKind::PerStep ? "per_step" : "cumulative") << " at "
        << v.iteration << ": measured " << fmt(v.measured_ratio) << " > bound " << fmt(v.bound) << '\n';
  }
  return out.str();
}

}  // namespace ggs
