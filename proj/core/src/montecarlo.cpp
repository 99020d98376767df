#include "mal/montecarlo.hpp"

#include "mal/error.hpp"
#include "mal/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mal {

namespace {

constexpr std::uint64_t kReplicationStream = 0x4D43;
constexpr std::uint64_t kRateStream = 0x52415445;

struct Cell {
  std::size_t a;
  std::size_t b;
};

double one_sided_gap(std::size_t i, double f, double n) {
  return std::max((static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n);
}

RateEstimate mean_estimate(std::span<const double> v, double scale, double target) {
  const double reps = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= reps;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (reps - 1.0));
  RateEstimate e;
  e.estimate = scale * mean;
  e.se = scale * sd / std::sqrt(reps);
  e.target = target;
  e.within_3se = std::abs(e.estimate - target) <= 3.0 * e.se;
  return e;
}

RateEstimate cov_estimate(std::span<const double> a, std::span<const double> b, double scale, double target) {
  const double reps = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= reps;
  mb /= reps;
  std::vector<double> products(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) products[i] = (a[i] - ma) * (b[i] - mb);
  RateEstimate e = mean_estimate(products, scale * reps / (reps - 1.0), target);
  e.within_3se = std::abs(e.estimate - target) <= 3.0 * e.se;
  return e;
}

}  // namespace

std::string_view to_string(Scaling s) {
  switch (s) {
    case Scaling::Auto: return "auto";
    case Scaling::SqrtN: return "sqrt-n";
    case Scaling::N: return "n";
  }
  return "unknown";
}

Scaling parse_scaling(std::string_view name) {
  if (name == "auto") return Scaling::Auto;
  if (name == "sqrt-n") return Scaling::SqrtN;
  if (name == "n") return Scaling::N;
  throw ValidationError("unknown scaling '" + std::string(name) + "' (expected auto, sqrt-n or n)");
}

double ks_distance_brute(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ValidationError("KS distance of an empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, one_sided_gap(i, cdf(x[i]), n));
  return d;
}

double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ValidationError("KS distance of an empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const std::size_t count = x.size();
  const double n = static_cast<double>(count);
  std::vector<double> f(count, std::numeric_limits<double>::quiet_NaN());
  auto eval = [&](std::size_t i) {
    if (std::isnan(f[i])) f[i] = cdf(x[i]);
    return f[i];
  };

  double best = std::max(one_sided_gap(0, eval(0), n), one_sided_gap(count - 1, eval(count - 1), n));
  std::vector<Cell> stack;
  if (count > 2) stack.push_back({0, count - 1});
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    if (c.b - c.a < 2) continue;
    // Interior indices i in (a, b): F(x_a) <= F(x_i) <= F(x_b).
    const double bound = std::max(static_cast<double>(c.b) / n - f[c.a],
                                  f[c.b] - (static_cast<double>(c.a) + 1.0) / n);
    if (bound <= best) continue;
    if (c.b - c.a <= 16) {
      for (std::size_t i = c.a + 1; i < c.b; ++i) best = std::max(best, one_sided_gap(i, eval(i), n));
      continue;
    }
    const std::size_t mid = c.a + (c.b - c.a) / 2;
    best = std::max(best, one_sided_gap(mid, eval(mid), n));
    stack.push_back({c.a, mid});
    stack.push_back({mid, c.b});
  }
  return best;
}

SampleSummary summarize(std::span<const double> values) {
  SampleSummary s;
  if (values.empty()) return s;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double count = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= count;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  s.mean = mean;
  s.sd = v.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  s.min = v.front();
  s.max = v.back();
  for (double level : {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}) {
    const double h = (count - 1.0) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    s.quantiles.emplace_back(level, v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]));
  }
  return s;
}

SimulationReport mc_scaled_statistic(const Source& source, const SimulationConfig& config) {
  const int k = config.k;
  if (k < 2 || k > 16) throw ValidationError("simulation order must lie in [2, 16]");
  if (config.reps < 100) throw ValidationError("simulation needs reps >= 100");
  if (config.n < 1) throw ValidationError("simulation needs n >= 1");

  const MomentSet ms = central_moments(source, 2 * k);
  SimulationReport report;
  report.spec = to_json(source.spec);
  report.k = k;
  report.n = config.n;
  report.reps = config.reps;
  report.seed = config.seed;
  report.mu_k = ms[k];
  report.ks_threshold = config.ks_threshold;
  if (const auto discrete = source.discrete()) {
    report.singular = is_singular(*discrete, k, kSingularAtomTolerance, config.tol_singular).singular;
  }
  const LimitLaw law = classify_limit(ms, k, config.tol_singular);
  report.scaling = config.scaling == Scaling::Auto ? (report.singular ? Scaling::N : Scaling::SqrtN)
                                                   : config.scaling;
  if (report.scaling == Scaling::SqrtN) {
    if (law.is_normal()) {
      report.target = law;
    } else {
      // sqrt(n)-scaled statistic of a singular source collapses to 0.
      report.target.form = NormalLaw{0.0};
      report.target.statistic = Statistic::SqrtN;
      report.target.orientation = Orientation::MMinusMu;
    }
  } else {
    report.target = law.is_normal() ? law : law.oriented(config.orientation);
    report.target_matches_scaling = !law.is_normal();
  }

  const Sampler sampler(source);
  const double n = static_cast<double>(config.n);
  const double mu_k = report.mu_k;
  const bool n_scaled = report.scaling == Scaling::N;
  const double sign = config.orientation == Orientation::MuMinusM ? -1.0 : 1.0;
  std::vector<double> stat(config.reps);
  parallel_for(
      config.reps,
      [&](std::size_t rep) {
        Engine engine(derive_seed(config.seed, kReplicationStream, rep));
        std::vector<double> buffer(config.n);
        sampler.fill(engine, buffer);
        const double m = sample_central_moment(buffer, k);
        stat[rep] = n_scaled ? sign * n * (m - mu_k) : std::sqrt(n) * (m - mu_k);
      },
      config.workers);

  report.summary = summarize(stat);
  const LimitLaw target = report.target;
  report.ks = ks_distance(stat, [&target](double x) { return law_cdf(target, x); });
  report.pass = report.target_matches_scaling && report.ks <= config.ks_threshold;
  if (config.keep_sample) report.statistic = std::move(stat);
  return report;
}

SimulationReport mc_scaled_statistic(const DistSpec& spec, const SimulationConfig& config) {
  return mc_scaled_statistic(resolve(spec), config);
}

RateReport rate_report(const Source& source, int r, int k, const std::vector<std::size_t>& n_grid,
                       std::size_t reps, std::uint64_t seed, unsigned workers) {
  if (n_grid.empty()) throw ValidationError("rate report needs a non-empty n grid");
  if (reps < 100) throw ValidationError("rate report needs reps >= 100");
  const int order = std::max(r + k, k + 1);
  if (order > kMaxMomentOrder) throw ValidationError("rate report order too large");
  const MomentSet ms = central_moments(source, order);
  RateReport report;
  report.spec = to_json(source.spec);
  report.r = r;
  report.k = k;
  report.reps = reps;
  report.seed = seed;
  report.targets = rate_targets(ms, r, k);
  const double mu_k = ms[k];

  const Sampler sampler(source);
  for (std::size_t n_value : n_grid) {
    if (n_value < 2) throw ValidationError("rate report needs n >= 2");
    std::vector<double> xbar(reps), mr(reps), mk(reps);
    parallel_for(
        reps,
        [&](std::size_t rep) {
          Engine engine(derive_seed(seed, (kRateStream << 20) ^ n_value, rep));
          std::vector<double> buffer(n_value);
          sampler.fill(engine, buffer);
          double sum = 0.0;
          for (double x : buffer) sum += x;
          const double mean = sum / static_cast<double>(n_value);
          xbar[rep] = mean;
          mr[rep] = sample_central_moment(buffer, r);
          mk[rep] = sample_central_moment(buffer, k);
        },
        workers);

    const double n = static_cast<double>(n_value);
    RateRow row;
    row.n = n_value;
    std::vector<double> dev(reps);
    for (std::size_t i = 0; i < reps; ++i) dev[i] = mk[i] - mu_k;
    row.bias = mean_estimate(dev, std::sqrt(n), report.targets.bias);
    row.mean_cov = cov_estimate(xbar, mk, n, report.targets.mean_cov);
    row.cov_rk = cov_estimate(mr, mk, n, report.targets.cov_rk);
    if (k == 2) {
      RateEstimate exact = row.bias;
      exact.target = -ms.variance() / std::sqrt(n);
      exact.within_3se = std::abs(exact.estimate - exact.target) <= 3.0 * exact.se;
      row.bias_exact = exact;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mal
