#include "cli.hpp"

#include "mal/asymptotics.hpp"
#include "mal/error.hpp"
#include "mal/limit_laws.hpp"
#include "mal/montecarlo.hpp"
#include "mal/report_json.hpp"
#include "mal/singular.hpp"
#include "mal/source.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <random>
#include <sstream>

namespace mal::cli {

namespace {

using nlohmann::json;

constexpr int kMaxCliOrder = 16;

void check_order(int k) {
  if (k < 2 || k > kMaxCliOrder) {
    throw ValidationError("--order must lie in [2, " + std::to_string(kMaxCliOrder) + "], got " +
                          std::to_string(k));
  }
}

void validate(const RunConfig& c) {
  const std::string& s = c.subcommand;
  if (s == "catalog" || s == "solve") {
    if (c.order < 2 || c.order > kMaxSingularOrder) {
      throw ValidationError("--order must lie in [2, " + std::to_string(kMaxSingularOrder) + "]");
    }
  } else {
    check_order(c.order);
  }
  if (s == "catalog" && c.order == 3 && c.theta_grid < 2) throw ValidationError("--theta-grid needs >= 2 points");
  if (s != "catalog" && s != "solve" && c.dist.empty()) throw ValidationError("--dist is required");
  if (!(c.tol_singular > 0.0)) throw ValidationError("--tol-singular must be positive");
  if (s == "simulate") {
    if (c.n < 2) throw ValidationError("--n must be >= 2");
    if (c.reps < 100) throw ValidationError("--reps must be >= 100");
    if (!(c.ks_threshold > 0.0 && c.ks_threshold < 1.0)) throw ValidationError("--ks-threshold must lie in (0, 1)");
    if (c.mode != "statistic" && c.mode != "rate" && c.mode != "both") {
      throw ValidationError("--mode must be statistic, rate or both");
    }
    if (c.mode != "statistic") {
      if (c.rate_r < 2) throw ValidationError("--rate-r must be >= 2");
      if (c.n_grid.empty()) throw ValidationError("--n-grid must not be empty");
      for (auto v : c.n_grid) {
        if (v < 2) throw ValidationError("--n-grid values must be >= 2");
      }
    }
    parse_scaling(c.scaling);
  }
  if (c.orientation) parse_orientation(*c.orientation);
}

Source load_source(const RunConfig& c) {
  const std::string text = load_dist_text(c.dist);
  return resolve(parse_dist_spec(std::string_view(text)));
}

std::uint64_t parse_seed(const std::string& text) {
  if (text == "random") return (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("--seed must be an integer (decimal or 0x hex) or 'random', got '" + text + "'");
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << text;
}

}  // namespace

std::string load_dist_text(const std::string& dist) {
  const auto first = dist.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && dist[first] == '{') return dist;
  std::ifstream f(dist);
  if (!f) throw ValidationError("--dist is neither inline JSON nor a readable file: '" + dist + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

json cmd_analyze(const RunConfig& c) {
  const int k = c.order;
  const Source source = load_source(c);
  const MomentSet ms = central_moments(source, 2 * k);
  json j;
  j["spec"] = to_json(source.spec);
  j["order"] = k;
  j["moments"] = to_json(ms);
  j["sigma_matrix"] = matrix_to_json(sigma_matrix(ms, k));
  j["v_matrix"] = to_json(v_matrix(ms, k));
  j["independence"] = to_json(independence_residuals(ms, k));
  j["normality"] = to_json(normality_diagnostic(ms, k));
  if (const auto d = source.discrete()) {
    const auto report = is_singular(*d, k, kSingularAtomTolerance, c.tol_singular);
    j["singular"] = report.singular;
    j["singularity"] = to_json(report);
  } else {
    j["singular"] = false;
  }
  j["limit"] = to_json(classify_limit(ms, k, c.tol_singular));
  return j;
}

json cmd_catalog(const RunConfig& c) {
  const auto grid = c.order == 3 ? f3_theta_grid(c.theta_grid) : std::vector<double>{};
  json members = json::array();
  for (const auto& m : catalog(c.order, grid)) members.push_back(to_json(m));
  return {{"order", c.order}, {"members", members}};
}

json cmd_solve(const RunConfig& c) {
  const auto root = solve_pk(c.order);
  if (!root) {
    return {{"k", c.order}, {"p_k", 0.5}, {"residual", 0.0}, {"note", "only p = 1/2 (the Rademacher case)"}};
  }
  return to_json(*root);
}

json cmd_limit(const RunConfig& c) {
  const Source source = load_source(c);
  const MomentSet ms = central_moments(source, 2 * c.order);
  LimitLaw law = classify_limit(ms, c.order, c.tol_singular);
  if (c.orientation && !law.is_normal()) law = law.oriented(parse_orientation(*c.orientation));
  json j = to_json(law);
  if (!law.is_normal()) j["coefficients"] = to_json(singular_coefficients(ms, c.order));
  return j;
}

json cmd_simulate(const RunConfig& c) {
  const Source source = load_source(c);
  json j;
  if (c.mode == "statistic" || c.mode == "both") {
    SimulationConfig sc;
    sc.k = c.order;
    sc.n = c.n;
    sc.reps = c.reps;
    sc.scaling = parse_scaling(c.scaling);
    sc.seed = c.seed;
    if (c.orientation) sc.orientation = parse_orientation(*c.orientation);
    sc.ks_threshold = c.ks_threshold;
    sc.tol_singular = c.tol_singular;
    sc.keep_sample = !c.csv.empty() || c.keep_sample;
    const auto report = mc_scaled_statistic(source, sc);
    j["simulation"] = to_json(report);
    if (c.keep_sample) j["simulation"]["statistic"] = report.statistic;
    if (!c.csv.empty()) {
      std::ostringstream csv;
      write_sample_csv(csv, report.statistic);
      write_file(c.csv, csv.str());
    }
  }
  if (c.mode == "rate" || c.mode == "both") {
    const auto report = rate_report(source, c.rate_r, c.order, c.n_grid, c.reps, c.seed);
    j["rate"] = to_json(report);
    if (!c.rate_csv.empty()) {
      std::ostringstream csv;
      write_rate_csv(csv, report);
      write_file(c.rate_csv, csv.str());
    }
  }
  return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string seed_text = "0x5EEDCAFE";
  CLI::App app{
      "mal: asymptotic laws of sample central moments.\n"
      "Exit codes: 0 ok, 1 usage, 2 validation, 3 numeric failure.\n"
      "Default seed 0x5EEDCAFE; MAL_THREADS caps the worker count (results do not depend on it)."};
  app.require_subcommand(1);

  auto dist_opt = [&](CLI::App* s) {
    s->add_option("--dist", c.dist, "distribution spec: inline JSON or path to a JSON file")->required();
  };
  auto order_opt = [&](CLI::App* s) { s->add_option("--order", c.order, "moment order k")->required(); };
  auto tol_opt = [&](CLI::App* s) {
    s->add_option("--tol-singular", c.tol_singular, "v_k^2 <= tol * sigma^(2k) counts as singular")
        ->capture_default_str();
  };
  auto out_opt = [&](CLI::App* s) { s->add_option("--out", c.out, "also write the JSON report here"); };

  auto* analyze = app.add_subcommand("analyze", "moments, Sigma_k, V_k, residuals, singularity flag");
  dist_opt(analyze);
  order_opt(analyze);
  tol_opt(analyze);
  out_opt(analyze);

  auto* cat = app.add_subcommand("catalog", "constructible standardized singular members of order k");
  order_opt(cat);
  cat->add_option("--theta-grid", c.theta_grid, "number of theta points for order 3")->capture_default_str();
  out_opt(cat);

  auto* solve = app.add_subcommand("solve", "root p_k of the two-valued singularity equation");
  order_opt(solve);
  out_opt(solve);

  auto* limit = app.add_subcommand("limit", "limit law of the scaled sample central moment");
  dist_opt(limit);
  order_opt(limit);
  tol_opt(limit);
  limit->add_option("--orientation", c.orientation, "mu-minus-M or M-minus-mu for chi-square laws");
  out_opt(limit);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo validation of the limit law and rates");
  dist_opt(sim);
  order_opt(sim);
  tol_opt(sim);
  out_opt(sim);
  sim->add_option("--n", c.n, "sample size per replication")->capture_default_str();
  sim->add_option("--reps", c.reps, "replications")->capture_default_str();
  sim->add_option("--seed", seed_text, "master seed (decimal, 0x hex, or 'random')")->capture_default_str();
  sim->add_option("--scaling", c.scaling, "auto | sqrt-n | n")->capture_default_str();
  sim->add_option("--orientation", c.orientation, "mu-minus-M (default) or M-minus-mu for n scaling");
  sim->add_option("--ks-threshold", c.ks_threshold, "pass threshold for the KS distance")->capture_default_str();
  sim->add_option("--csv", c.csv, "write the empirical statistic, one value per row");
  sim->add_option("--mode", c.mode, "statistic | rate | both")->capture_default_str();
  sim->add_option("--rate-r", c.rate_r, "r in n Cov(M_r, M_k)")->capture_default_str();
  sim->add_option("--n-grid", c.n_grid, "comma separated sample sizes for the rate table")->delimiter(',');
  sim->add_option("--rate-csv", c.rate_csv, "write the rate table as CSV");
  sim->add_flag("--keep-sample", c.keep_sample, "embed the empirical statistic in the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (auto* s : app.get_subcommands()) c.subcommand = s->get_name();
    c.seed = parse_seed(seed_text);
    validate(c);
    json report;
    if (c.subcommand == "analyze") {
      report = cmd_analyze(c);
    } else if (c.subcommand == "catalog") {
      report = cmd_catalog(c);
    } else if (c.subcommand == "solve") {
      report = cmd_solve(c);
    } else if (c.subcommand == "limit") {
      report = cmd_limit(c);
    } else {
      report = cmd_simulate(c);
    }
    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!c.out.empty()) write_file(c.out, text);
    return kOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace mal::cli
