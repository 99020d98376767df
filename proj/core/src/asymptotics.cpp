#include "mal/asymptotics.hpp"

#include "mal/error.hpp"

#include <cmath>
#include <sstream>

namespace mal {

Extended v_entry(const MomentSet& ms, int i, int j) {
  if (i < 1 || j < 1) throw ValidationError("v_entry indices are 1-based");
  if (i > j) std::swap(i, j);
  ms.require(i + j, "v_matrix entry");
  const Extended& s2 = ms.at(2);
  if (i == 1 && j == 1) return s2;
  if (i == 1) return ms.at(j + 1) - Extended(j) * s2 * ms.at(j - 1);
  return ms.at(i + j) - ms.at(i) * ms.at(j) - Extended(i) * ms.at(i - 1) * ms.at(j + 1) -
         Extended(j) * ms.at(i + 1) * ms.at(j - 1) +
         Extended(i) * Extended(j) * s2 * ms.at(i - 1) * ms.at(j - 1);
}

Extended vk_squared(const MomentSet& ms, int k) { return v_entry(ms, k, k); }

AsymptoticCov v_matrix(const MomentSet& ms, int k) {
  if (k < 1) throw ValidationError("v_matrix needs k >= 1");
  ms.require(2 * k, "v_matrix");
  AsymptoticCov out;
  out.k = k;
  out.v.resize(k, k);
  out.diagonal.resize(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) {
    for (int j = i; j <= k; ++j) {
      const Extended e = v_entry(ms, i, j);
      out.v(i - 1, j - 1) = out.v(j - 1, i - 1) = to_double(e);
      if (i == j) out.diagonal[static_cast<std::size_t>(i - 1)] = e;
    }
  }
  return out;
}

IndependenceReport independence_residuals(const MomentSet& ms, int max_k, double tol) {
  if (max_k < 2) throw ValidationError("independence residuals need K >= 2");
  ms.require(max_k + 1, "independence residuals");
  IndependenceReport report;
  report.normal_consistent = true;
  const double sigma = std::sqrt(ms.variance());
  for (int k = 2; k <= max_k; ++k) {
    IndependenceEntry e;
    e.k = k;
    e.residual = to_double(ms.at(k + 1) - Extended(k) * ms.at(2) * ms.at(k - 1));
    e.threshold = tol * std::pow(sigma, k + 1);
    e.uncorrelated = std::abs(e.residual) <= e.threshold;
    report.normal_consistent = report.normal_consistent && e.uncorrelated;
    report.entries.push_back(e);
  }
  return report;
}

NormalityVerdict normality_diagnostic(const MomentSet& ms, int max_k, double tol) {
  NormalityVerdict verdict;
  verdict.up_to = max_k;
  verdict.residuals = independence_residuals(ms, max_k, tol);
  verdict.consistent = verdict.residuals.normal_consistent;
  std::ostringstream s;
  if (verdict.consistent) {
    s << "consistent with normality up to order " << max_k
      << " (necessary evidence only; finitely many orders never establish normality)";
  } else {
    s << "inconsistent with normality: mean and M_k asymptotically correlated at k =";
    for (const auto& e : verdict.residuals.entries) {
      if (!e.uncorrelated) s << ' ' << e.k;
    }
  }
  verdict.statement = s.str();
  return verdict;
}

RateTargets rate_targets(const MomentSet& ms, int r, int k) {
  if (r < 2 || k < 2) throw ValidationError("rate targets need r, k >= 2");
  ms.require(std::max(r + k, k + 1), "rate targets");
  RateTargets t;
  t.r = r;
  t.k = k;
  t.bias = 0.0;
  t.cov_rk = to_double(v_entry(ms, r, k));
  t.mean_cov = to_double(v_entry(ms, 1, k));
  return t;
}

}  // namespace mal
