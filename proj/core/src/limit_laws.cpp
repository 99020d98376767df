#include "mal/limit_laws.hpp"

#include "mal/asymptotics.hpp"
#include "mal/error.hpp"
#include "mal/parallel.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace mal {

namespace {

constexpr std::uint64_t kSecondOrderStream = 0x2A0D;
constexpr std::size_t kSampleBlock = 8192;

Orientation opposite(Orientation o) {
  return o == Orientation::MuMinusM ? Orientation::MMinusMu : Orientation::MuMinusM;
}

double normal_cdf(double v2, double x) {
  if (v2 <= 0.0) return x < 0.0 ? 0.0 : 1.0;
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * v2));
}

double scaled_chisq_cdf(double lambda, double x) {
  if (lambda == 0.0) return x < 0.0 ? 0.0 : 1.0;
  if (lambda > 0.0) return x <= 0.0 ? 0.0 : boost::math::gamma_p(0.5, x / (2.0 * lambda));
  return x >= 0.0 ? 1.0 : boost::math::gamma_q(0.5, x / (2.0 * lambda));
}

// P(a A - b B <= x) for x <= 0, a, b > 0, A, B iid chi2_1. With B = z^2 and
// w^2 = x + b z^2 the inner chi-square probability is erf(w / sqrt(2a)) and
// the integrand is smooth on [0, inf).
double chisq_diff_lower(double a, double b, double x) {
  const double inv_sqrt_2pi = boost::math::double_constants::one_div_root_two_pi;
  const double scale = std::sqrt(2.0 * a);
  auto integrand = [&](double w) {
    const double z2 = (w * w - x) / b;
    const double z = std::sqrt(z2);
    if (z == 0.0) return 2.0 * inv_sqrt_2pi * std::erf(w / scale) / std::sqrt(b);
    return 2.0 * inv_sqrt_2pi * std::exp(-0.5 * z2) * std::erf(w / scale) * w / (b * z);
  };
  // z >= w / sqrt(b), and phi is negligible past z = 8.5.
  const double w_max = 8.5 * std::sqrt(b);
  double error = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, w_max, 15, 1e-12, &error);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

std::string_view to_string(Statistic s) { return s == Statistic::SqrtN ? "sqrt-n" : "n"; }

std::string_view to_string(Orientation o) {
  return o == Orientation::MuMinusM ? "mu-minus-M" : "M-minus-mu";
}

Orientation parse_orientation(std::string_view name) {
  if (name == "mu-minus-M") return Orientation::MuMinusM;
  if (name == "M-minus-mu") return Orientation::MMinusMu;
  throw ValidationError("unknown orientation '" + std::string(name) + "'");
}

LimitLaw LimitLaw::flipped() const {
  LimitLaw out = *this;
  out.orientation = opposite(orientation);
  if (const auto* s = std::get_if<ScaledChiSqLaw>(&form)) {
    out.form = ScaledChiSqLaw{-s->lambda};
  } else if (const auto* d = std::get_if<ChiSqDiffLaw>(&form)) {
    out.form = ChiSqDiffLaw{d->lambda_tilde, d->lambda};
  }
  return out;
}

nlohmann::json to_json(const LimitLaw& law) {
  nlohmann::json j;
  if (const auto* n = std::get_if<NormalLaw>(&law.form)) {
    j["law"] = "normal";
    j["v2"] = n->v2;
  } else if (const auto* s = std::get_if<ScaledChiSqLaw>(&law.form)) {
    j["law"] = "scaled-chisq";
    j["lambda"] = s->lambda;
  } else {
    const auto& d = std::get<ChiSqDiffLaw>(law.form);
    j["law"] = "chisq-diff";
    j["lambda"] = d.lambda;
    j["lambda_tilde"] = d.lambda_tilde;
  }
  j["statistic"] = to_string(law.statistic);
  j["orientation"] = to_string(law.orientation);
  return j;
}

SingularCoefficients singular_coefficients(const MomentSet& ms, int k, double tol) {
  if (k < 2) throw ValidationError("singular coefficients need k >= 2");
  ms.require(2 * k - 2, "singular coefficients");
  const Extended s2 = ms.at(2);
  const Extended km1 = k - 1;
  const Extended alpha = ms.at(k) - km1 / 2 * s2 * ms.at(k - 2);
  const Extended spread = ms.at(2 * k - 2) - ms.at(k - 1) * ms.at(k - 1);
  const Extended theta = spread - km1 * ms.at(k - 2) * (ms.at(k) - km1 / 4 * s2 * ms.at(k - 2));
  const Extended g2 = s2 * spread - ms.at(k) * ms.at(k);
  const double scale = std::pow(to_double(s2), k);

  SingularCoefficients c;
  c.alpha_k = to_double(alpha);
  c.theta_k = to_double(theta);
  c.gamma_k_squared = to_double(g2);
  // theta_k carries units sigma^(2k-2); gamma_k^2 carries sigma^(2k).
  if (c.theta_k < -tol * scale / to_double(s2)) {
    throw NumericError("theta_k = " + std::to_string(c.theta_k) +
                       " is negative: the source is not singular of order " + std::to_string(k));
  }
  if (c.gamma_k_squared < -tol * scale) {
    throw NumericError("implied covariance of (W_1, W_{k-1}) is not positive semidefinite");
  }
  c.theta_k = std::max(c.theta_k, 0.0);
  c.gamma_k_squared = std::max(c.gamma_k_squared, 0.0);
  c.gamma_k = std::sqrt(c.gamma_k_squared);
  return c;
}

LimitLaw make_chisq_law(double lambda, double lambda_tilde, Statistic s, Orientation o) {
  LimitLaw law;
  law.statistic = s;
  law.orientation = o;
  if (lambda_tilde <= kCollapseRatio * std::abs(lambda)) {
    law.form = ScaledChiSqLaw{lambda};
  } else if (lambda <= kCollapseRatio * std::abs(lambda_tilde)) {
    law.form = ScaledChiSqLaw{-lambda_tilde};
  } else {
    law.form = ChiSqDiffLaw{lambda, lambda_tilde};
  }
  return law;
}

LimitLaw classify_limit(const MomentSet& ms, int k, double tol) {
  if (k < 2) throw ValidationError("classify_limit needs k >= 2");
  ms.require(2 * k, "classify_limit");
  const double scale = std::pow(ms.variance(), k);
  const double vk2 = to_double(vk_squared(ms, k));
  if (vk2 > tol * scale) {
    LimitLaw law;
    law.form = NormalLaw{vk2};
    law.statistic = Statistic::SqrtN;
    law.orientation = Orientation::MMinusMu;
    return law;
  }
  const auto c = singular_coefficients(ms, k, tol);
  const double kk = k;
  if (c.gamma_k_squared <= tol * scale) {
    LimitLaw law;
    law.form = ScaledChiSqLaw{kk * c.alpha_k};
    law.statistic = Statistic::N;
    law.orientation = Orientation::MuMinusM;
    return law;
  }
  const double root = std::sqrt(ms.variance() * c.theta_k);
  return make_chisq_law(0.5 * kk * (root + c.alpha_k), 0.5 * kk * (root - c.alpha_k), Statistic::N,
                        Orientation::MuMinusM);
}

double law_cdf(const LimitLaw& law, double x) {
  if (std::isnan(x)) throw ValidationError("cdf evaluated at NaN");
  if (const auto* n = std::get_if<NormalLaw>(&law.form)) return normal_cdf(n->v2, x);
  if (const auto* s = std::get_if<ScaledChiSqLaw>(&law.form)) return scaled_chisq_cdf(s->lambda, x);
  const auto& d = std::get<ChiSqDiffLaw>(law.form);
  if (std::isinf(x)) return x < 0 ? 0.0 : 1.0;
  if (x <= 0.0) return chisq_diff_lower(d.lambda, d.lambda_tilde, x);
  return 1.0 - chisq_diff_lower(d.lambda_tilde, d.lambda, -x);
}

double chisq_diff_cdf(const LimitLaw& law, double x) {
  if (law.is_normal()) throw ValidationError("chisq_diff_cdf needs a chi-square law");
  return law_cdf(law, x);
}

double chisq_diff_quantile(const LimitLaw& law, double q) {
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("quantile level must lie in (0, 1)");
  double scale = 1.0;
  if (const auto* n = std::get_if<NormalLaw>(&law.form)) {
    scale = std::sqrt(n->v2);
  } else if (const auto* s = std::get_if<ScaledChiSqLaw>(&law.form)) {
    scale = std::abs(s->lambda);
  } else {
    const auto& d = std::get<ChiSqDiffLaw>(law.form);
    scale = std::max(d.lambda, d.lambda_tilde);
  }
  if (!(scale > 0.0)) return 0.0;
  double lo = -scale, hi = scale;
  for (int i = 0; i < 200 && law_cdf(law, lo) > q; ++i) lo *= 2.0;
  for (int i = 0; i < 200 && law_cdf(law, hi) < q; ++i) hi *= 2.0;
  const double tol = 1e-10 * std::max(1.0, scale);
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (law_cdf(law, mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> quad_form_decompose(double alpha, double beta) {
  const double rho = std::hypot(alpha, beta);
  return {0.5 * (rho + alpha), 0.5 * (rho - alpha)};
}

LimitLaw bivar_product_decompose(double sigma1, double sigma2, double rho) {
  if (!(sigma1 >= 0.0 && sigma2 >= 0.0)) throw ValidationError("standard deviations must be non-negative");
  if (!(std::abs(rho) <= 1.0)) throw ValidationError("correlation must lie in [-1, 1]");
  const double s = sigma1 * sigma2;
  if (s == 0.0) {
    LimitLaw law;
    law.form = ScaledChiSqLaw{0.0};
    law.statistic = Statistic::N;
    return law;
  }
  return make_chisq_law(0.5 * s * (1.0 + rho), 0.5 * s * (1.0 - rho), Statistic::N,
                        Orientation::MMinusMu);
}

Eigen::MatrixXd HessianSpec::matrix() const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
  h(0, 0) += corner;
  h(0, k - 2) += cross;
  h(k - 2, 0) += cross;
  return h;
}

Eigen::VectorXd HessianSpec::gradient_template(double mu_km1) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(k);
  g(0) = -k * mu_km1;
  g(k - 1) += 1.0;
  return g;
}

HessianSpec hessian(const MomentSet& ms, int k) {
  if (k < 2) throw ValidationError("hessian needs k >= 2");
  ms.require(k, "hessian");
  HessianSpec h;
  h.k = k;
  h.corner = static_cast<double>(k) * (k - 1) * ms[k - 2];
  h.cross = -static_cast<double>(k);
  return h;
}

std::vector<double> second_order_sample(const HessianSpec& h, const MomentSet& ms, std::size_t count,
                                        std::uint64_t seed, Orientation orientation, unsigned workers) {
  const int k = h.k;
  if (k < 2) throw ValidationError("second_order_sample needs k >= 2");
  const auto c = singular_coefficients(ms, k);
  const double sigma = std::sqrt(ms.variance());
  const double load1 = ms[k] / sigma;
  const double load2 = c.gamma_k / sigma;
  const double sign = orientation == Orientation::MMinusMu ? 1.0 : -1.0;
  std::vector<double> out(count);
  const std::size_t blocks = (count + kSampleBlock - 1) / kSampleBlock;
  parallel_for(
      blocks,
      [&](std::size_t b) {
        std::mt19937_64 engine(derive_seed(seed, kSecondOrderStream, b));
        std::normal_distribution<double> gauss;
        const std::size_t end = std::min(count, (b + 1) * kSampleBlock);
        for (std::size_t i = b * kSampleBlock; i < end; ++i) {
          const double z1 = gauss(engine);
          const double z2 = gauss(engine);
          const double w1 = sigma * z1;
          const double wk1 = load1 * z1 + load2 * z2;
          out[i] = sign * (0.5 * h.corner * w1 * w1 + h.cross * w1 * wk1);
        }
      },
      workers);
  return out;
}

}  // namespace mal
