#pragma once

#include "mal/moments.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mal {

// Limiting covariance V_k of sqrt(n) (Xbar - mu, M_2 - mu_2, ..., M_k - mu_k).
struct AsymptoticCov {
  int k = 0;
  Eigen::MatrixXd v;               // rounded entries v_ij (0-based storage)
  std::vector<Extended> diagonal;  // v_i^2 = v_ii in extended precision

  // 1-based access matching the usual (i, j) labelling.
  double entry(int i, int j) const { return v(i - 1, j - 1); }
  const Extended& variance(int i) const { return diagonal[static_cast<std::size_t>(i - 1)]; }
  bool psd(double rel_floor = 1e-10) const { return is_psd(v, rel_floor); }
};

// Single entry v_ij (1-based), needs moments up to order i + j.
Extended v_entry(const MomentSet& ms, int i, int j);

// v_k^2 = mu_2k - mu_k^2 - 2k mu_{k-1} mu_{k+1} + k^2 sigma^2 mu_{k-1}^2.
Extended vk_squared(const MomentSet& ms, int k);

AsymptoticCov v_matrix(const MomentSet& ms, int k);

// Residual tolerance for r_k is tol * sigma^(k+1).
inline constexpr double kResidualTolerance = 1e-9;

struct IndependenceEntry {
  int k = 0;
  double residual = 0.0;  // r_k = mu_{k+1} - k sigma^2 mu_{k-1}
  double threshold = 0.0;
  bool uncorrelated = false;
};

struct IndependenceReport {
  std::vector<IndependenceEntry> entries;  // k = 2..K
  bool normal_consistent = false;          // every entry uncorrelated
};

IndependenceReport independence_residuals(const MomentSet& ms, int max_k,
                                          double tol = kResidualTolerance);

struct NormalityVerdict {
  int up_to = 0;
  bool consistent = false;
  IndependenceReport residuals;
  std::string statement;
};

// Only ever states "consistent with normality up to order K": agreement at
// finitely many orders is necessary evidence, never proof.
NormalityVerdict normality_diagnostic(const MomentSet& ms, int max_k,
                                      double tol = kResidualTolerance);

struct RateTargets {
  int r = 0;
  int k = 0;
  double bias = 0.0;      // limit of sqrt(n) (E M_k - mu_k)
  double cov_rk = 0.0;    // limit of n Cov(M_r, M_k) = v_rk
  double mean_cov = 0.0;  // limit of n Cov(Xbar, M_k) = mu_{k+1} - k sigma^2 mu_{k-1}
};

RateTargets rate_targets(const MomentSet& ms, int r, int k);

}  // namespace mal
