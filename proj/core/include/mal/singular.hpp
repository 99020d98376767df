#pragma once

#include "mal/distribution.hpp"
#include "mal/moments.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace mal {

inline constexpr int kMaxSingularOrder = 32;

// Shared with classify_limit: v_k^2 <= tol * sigma^(2k) counts as zero.
inline constexpr double kSingularVarianceTolerance = 1e-10;
inline constexpr double kSingularAtomTolerance = 1e-9;

struct SingularRoot {
  int k = 0;
  bool even = false;
  double p = 0.0;   // p_k = t2 / (1 + t2)
  double t2 = 0.0;  // root of the t-polynomial beyond k - 2
  double residual = 0.0;      // |poly(t2)| / max(1, t2^k)
  double p_residual = 0.0;    // |lhs - rhs| / max(|lhs|, |rhs|) of the p-form
  Extended p_ext = 0;
  Extended t_ext = 0;
};

// even k: t^k - k t^(k-1) + k t - 1; odd k: t^k - k t^(k-1) - k t + 1.
Extended root_polynomial(int k, const Extended& t);

// p^(k-1) [k - (k+1)p] vs (1-p)^(k-1) [(k+1)p - 1] (even), with the sign of
// the bracket flipped on the left for odd k. Returns the relative mismatch.
Extended root_equation_residual(int k, const Extended& p);

// k = 2 has only p = 1/2 and yields nullopt. Throws for k < 2 or k > 32.
std::optional<SingularRoot> solve_pk(int k);

enum class FamilyTag { TwoValuedUpper, TwoValuedLower, Symmetric, Rademacher, YThreeValued, WTwoValued, F3 };

std::string_view to_string(FamilyTag tag);

struct SingularMember {
  DiscreteDistribution dist;
  int order = 0;
  bool standardized = true;
  FamilyTag family = FamilyTag::TwoValuedUpper;
  double parameter = 0.0;  // p_k for two-valued, theta for f3, 0 otherwise
};

SingularMember build_two_valued(int k, bool upper = true);
SingularMember build_symmetric(int k);
SingularMember build_classic_examples(FamilyTag family, int k);

// Standardized member of F_3^0 with third moment theta, |theta| <= sqrt 2.
SingularMember build_f3(double theta);

struct SingularityReport {
  int k = 0;
  bool singular = false;
  bool pointwise = false;
  bool variance_zero = false;
  double max_atom_residual = 0.0;  // relative to max(|lhs|, |rhs|, sigma^k)
  double vk2 = 0.0;
  double vk2_threshold = 0.0;
};

SingularityReport is_singular(const DiscreteDistribution& dist, int k,
                              double atom_tol = kSingularAtomTolerance,
                              double variance_tol = kSingularVarianceTolerance);

// Constructible standardized members of order k. For k = 3 the f3 family is
// sampled on theta_grid.
std::vector<SingularMember> catalog(int k, const std::vector<double>& theta_grid = {});

// theta_grid for f3: count equally spaced points over [-sqrt 2, sqrt 2].
std::vector<double> f3_theta_grid(int count);

}  // namespace mal
