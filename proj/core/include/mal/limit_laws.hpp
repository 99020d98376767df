#pragma once

#include "mal/moments.hpp"

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mal {

enum class Statistic { SqrtN, N };
enum class Orientation { MuMinusM, MMinusMu };

std::string_view to_string(Statistic s);
std::string_view to_string(Orientation o);
Orientation parse_orientation(std::string_view name);

struct NormalLaw {
  double v2 = 0.0;
};

// lambda * chi2_1; lambda may be negative.
struct ScaledChiSqLaw {
  double lambda = 0.0;
};

// lambda * chi2_1 - lambda_tilde * chi2_1', independent, both coefficients > 0.
struct ChiSqDiffLaw {
  double lambda = 0.0;
  double lambda_tilde = 0.0;
};

struct LimitLaw {
  std::variant<NormalLaw, ScaledChiSqLaw, ChiSqDiffLaw> form;
  Statistic statistic = Statistic::SqrtN;
  Orientation orientation = Orientation::MMinusMu;

  bool is_normal() const { return std::holds_alternative<NormalLaw>(form); }
  // Law of the negated statistic.
  LimitLaw flipped() const;
  LimitLaw oriented(Orientation o) const { return o == orientation ? *this : flipped(); }
};

nlohmann::json to_json(const LimitLaw& law);

struct SingularCoefficients {
  double alpha_k = 0.0;  // mu_k - (k-1)/2 sigma^2 mu_{k-2}
  double theta_k = 0.0;  // mu_{2k-2} - mu_{k-1}^2 - (k-1) mu_{k-2} [mu_k - (k-1)/4 sigma^2 mu_{k-2}]
  double gamma_k = 0.0;  // sqrt(sigma^2 (mu_{2k-2} - mu_{k-1}^2) - mu_k^2)
  double gamma_k_squared = 0.0;
};

// theta_k or gamma_k^2 below -tol * sigma^(2k) raise NumericError; smaller
// negative rounding is clamped to zero.
SingularCoefficients singular_coefficients(const MomentSet& ms, int k, double tol = 1e-10);

// Normal{v_k^2} for sqrt(n)(M - mu) when v_k^2 > tol sigma^(2k); otherwise a
// chi-square law for n(mu - M).
LimitLaw classify_limit(const MomentSet& ms, int k, double tol = 1e-10);

// Relative threshold below which the smaller chi-square coefficient is dropped.
inline constexpr double kCollapseRatio = 1e-12;

// Builds lambda chi2 - lambda_tilde chi2' and collapses near-degenerate pairs.
LimitLaw make_chisq_law(double lambda, double lambda_tilde, Statistic s, Orientation o);

double law_cdf(const LimitLaw& law, double x);
double chisq_diff_cdf(const LimitLaw& law, double x);
double chisq_diff_quantile(const LimitLaw& law, double q);

// alpha Z1^2 + beta Z1 Z2 =d lambda_plus Z1^2 - lambda_minus Z2^2.
std::pair<double, double> quad_form_decompose(double alpha, double beta);

// Law of the product of the two components of a bivariate normal with
// standard deviations sigma1, sigma2 and correlation rho.
LimitLaw bivar_product_decompose(double sigma1, double sigma2, double rho);

// Hessian of g_{k,k} at the population moment vector, k x k with entries
// (1,1) = k(k-1) mu_{k-2} and (1,k-1) = (k-1,1) = -k. For k = 2 these
// overlap on the corner.
struct HessianSpec {
  int k = 0;
  double corner = 0.0;
  double cross = 0.0;

  Eigen::MatrixXd matrix() const;
  Eigen::VectorXd gradient_template(double mu_km1) const;
};

HessianSpec hessian(const MomentSet& ms, int k);

// Draws of 1/2 W' H W with (W_1, W_{k-1}) bivariate normal. Generation is
// blocked by index so the output is independent of the worker count.
std::vector<double> second_order_sample(const HessianSpec& h, const MomentSet& ms, std::size_t count,
                                        std::uint64_t seed,
                                        Orientation orientation = Orientation::MMinusMu,
                                        unsigned workers = 0);

}  // namespace mal
