#include "mal/report_json.hpp"

#include <cstdio>
#include <iomanip>
#include <limits>

namespace mal {

using nlohmann::json;

json to_json(const MomentSet& ms) {
  json central = json::array();
  for (int j = 0; j <= ms.order(); ++j) central.push_back(ms[j]);
  return {{"mean", ms.mean()}, {"variance", ms.variance()}, {"order", ms.order()}, {"central", central}};
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const AsymptoticCov& cov) {
  json diag = json::array();
  for (const auto& d : cov.diagonal) diag.push_back(to_double(d));
  return {{"k", cov.k}, {"matrix", matrix_to_json(cov.v)}, {"diagonal", diag}, {"psd", cov.psd()}};
}

json to_json(const IndependenceReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"k", e.k},
                       {"residual", e.residual},
                       {"threshold", e.threshold},
                       {"verdict", e.uncorrelated ? "uncorrelated" : "correlated"}});
  }
  return {{"entries", entries}, {"normal_consistent", report.normal_consistent}};
}

json to_json(const NormalityVerdict& verdict) {
  return {{"up_to", verdict.up_to}, {"consistent", verdict.consistent}, {"statement", verdict.statement}};
}

json to_json(const SingularRoot& root) {
  return {{"k", root.k},         {"parity", root.even ? "even" : "odd"}, {"p_k", root.p},
          {"t2", root.t2},       {"residual", root.residual},           {"p_residual", root.p_residual}};
}

json to_json(const SingularityReport& report) {
  return {{"k", report.k},
          {"singular", report.singular},
          {"pointwise", report.pointwise},
          {"variance_zero", report.variance_zero},
          {"max_atom_residual", report.max_atom_residual},
          {"vk2", report.vk2},
          {"vk2_threshold", report.vk2_threshold}};
}

json to_json(const SingularMember& member) {
  const auto check = is_singular(member.dist, member.order);
  return {{"family", to_string(member.family)},
          {"order", member.order},
          {"standardized", member.standardized},
          {"parameter", member.parameter},
          {"spec", to_json(member.dist)},
          {"residuals", to_json(check)}};
}

json to_json(const SingularCoefficients& c) {
  // Adding 0.0 turns a signed zero into +0.
  return {{"alpha_k", c.alpha_k + 0.0}, {"theta_k", c.theta_k + 0.0}, {"gamma_k", c.gamma_k + 0.0}};
}

json to_json(const SampleSummary& s) {
  json q = json::object();
  for (const auto& [level, value] : s.quantiles) {
    char key[16];
    std::snprintf(key, sizeof key, "%.2f", level);
    q[key] = value;
  }
  return {{"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}, {"quantiles", q}};
}

std::string hex_seed(std::uint64_t seed) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(seed));
  return buf;
}

json to_json(const SimulationReport& report) {
  json j = {{"spec", report.spec},
            {"order", report.k},
            {"n", report.n},
            {"reps", report.reps},
            {"scaling", to_string(report.scaling)},
            {"seed", hex_seed(report.seed)},
            {"singular", report.singular},
            {"mu_k", report.mu_k},
            {"target", to_json(report.target)},
            {"target_matches_scaling", report.target_matches_scaling},
            {"summary", to_json(report.summary)},
            {"ks", report.ks},
            {"ks_threshold", report.ks_threshold},
            {"pass", report.pass}};
  return j;
}

namespace {

json to_json(const RateEstimate& e) {
  return {{"estimate", e.estimate}, {"se", e.se}, {"target", e.target}, {"within_3se", e.within_3se}};
}

}  // namespace

json to_json(const RateReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r = {{"n", row.n},
              {"sqrt_n_bias", to_json(row.bias)},
              {"n_cov_mean", to_json(row.mean_cov)},
              {"n_cov_rk", to_json(row.cov_rk)}};
    if (row.bias_exact) r["sqrt_n_bias_exact"] = to_json(*row.bias_exact);
    rows.push_back(r);
  }
  return {{"spec", report.spec},
          {"r", report.r},
          {"k", report.k},
          {"reps", report.reps},
          {"seed", hex_seed(report.seed)},
          {"targets",
           {{"bias", report.targets.bias}, {"mean_cov", report.targets.mean_cov}, {"cov_rk", report.targets.cov_rk}}},
          {"rows", rows}};
}

void write_sample_csv(std::ostream& out, std::span<const double> values) {
  out << "value\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (double v : values) out << v << '\n';
}

void write_rate_csv(std::ostream& out, const RateReport& report) {
  out << "n,quantity,estimate,target,se\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : report.rows) {
    auto line = [&](const char* name, const RateEstimate& e) {
      out << row.n << ',' << name << ',' << e.estimate << ',' << e.target << ',' << e.se << '\n';
    };
    line("sqrt_n_bias", row.bias);
    line("n_cov_mean", row.mean_cov);
    line("n_cov_rk", row.cov_rk);
    if (row.bias_exact) line("sqrt_n_bias_exact", *row.bias_exact);
  }
}

}  // namespace mal
