#pragma once

#include "mal/asymptotics.hpp"
#include "mal/limit_laws.hpp"
#include "mal/singular.hpp"
#include "mal/source.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mal {

inline constexpr std::uint64_t kDefaultSeed = 0x5EEDCAFE;

enum class Scaling { Auto, SqrtN, N };

std::string_view to_string(Scaling s);
Scaling parse_scaling(std::string_view name);

// Kolmogorov-Smirnov distance sup |F_emp - F| over both one-sided gaps.
// Exact: cells of the sorted sample are pruned with the monotonicity bound,
// so large samples need far fewer cdf calls than points.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);

// Reference implementation evaluating the cdf at every point.
double ks_distance_brute(std::span<const double> sample, const std::function<double(double)>& cdf);

struct SimulationConfig {
  int k = 2;
  std::size_t n = 1000;
  std::size_t reps = 1000;
  Scaling scaling = Scaling::Auto;
  std::uint64_t seed = kDefaultSeed;
  Orientation orientation = Orientation::MuMinusM;  // for the n-scaled statistic
  double ks_threshold = 0.02;
  double tol_singular = kSingularVarianceTolerance;
  bool keep_sample = true;
  unsigned workers = 0;  // 0: MAL_THREADS or hardware concurrency
};

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::pair<double, double>> quantiles;  // (level, value)
};

SampleSummary summarize(std::span<const double> values);

struct SimulationReport {
  nlohmann::json spec;
  int k = 0;
  std::size_t n = 0;
  std::size_t reps = 0;
  Scaling scaling = Scaling::SqrtN;  // resolved, never Auto
  std::uint64_t seed = 0;
  bool singular = false;
  double mu_k = 0.0;
  LimitLaw target;
  bool target_matches_scaling = true;
  std::vector<double> statistic;  // empty unless keep_sample
  SampleSummary summary;
  double ks = 0.0;
  double ks_threshold = 0.0;
  bool pass = false;
};

SimulationReport mc_scaled_statistic(const Source& source, const SimulationConfig& config);
SimulationReport mc_scaled_statistic(const DistSpec& spec, const SimulationConfig& config);

struct RateEstimate {
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  bool within_3se = false;
};

struct RateRow {
  std::size_t n = 0;
  RateEstimate bias;      // sqrt(n) (mean M_k - mu_k), target 0
  RateEstimate mean_cov;  // n Cov(Xbar, M_k), target mu_{k+1} - k sigma^2 mu_{k-1}
  RateEstimate cov_rk;    // n Cov(M_r, M_k), target v_rk
  // For k = 2 the finite-n expectation is exact: sqrt(n) bias = -sigma^2 / sqrt(n).
  std::optional<RateEstimate> bias_exact;
};

struct RateReport {
  nlohmann::json spec;
  int r = 0;
  int k = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  RateTargets targets;
  std::vector<RateRow> rows;
};

RateReport rate_report(const Source& source, int r, int k, const std::vector<std::size_t>& n_grid,
                       std::size_t reps, std::uint64_t seed, unsigned workers = 0);

}  // namespace mal
