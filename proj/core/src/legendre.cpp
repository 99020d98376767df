#include "mal/legendre.hpp"

#include "mal/error.hpp"
#include "mal/moments.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace mal {

std::vector<std::int64_t> legendre_coeffs(int m) {
  if (m < kMinLegendreDegree || m > kMaxLegendreDegree) {
    throw ValidationError("Legendre degree must lie in [" + std::to_string(kMinLegendreDegree) +
                          ", " + std::to_string(kMaxLegendreDegree) + "], got " +
                          std::to_string(m));
  }
  std::vector<std::int64_t> c(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) {
    const BigInt magnitude = binomial(m, j) * binomial(m + j, j);
    const auto v = magnitude.convert_to<std::int64_t>();
    c[static_cast<std::size_t>(j)] = ((m + j) % 2 == 0) ? v : -v;
  }
  return c;
}

double LegendreDensity::operator()(double x) const {
  const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * boost::math::double_constants::pi);
  if (x < 0.0 || x > 1.0) return phi;
  return phi + epsilon * polynomial(x);
}

LegendreDensity legendre_density(int m) {
  LegendreDensity d;
  d.m = m;
  d.coeffs = legendre_coeffs(m);
  // Endpoints attain |P| = 1; scan the interior in case a bump exceeds it.
  double sup = std::max(std::abs(d.polynomial(0.0)), std::abs(d.polynomial(1.0)));
  constexpr int kScan = 20000;
  for (int i = 1; i < kScan; ++i) {
    sup = std::max(sup, std::abs(d.polynomial(static_cast<double>(i) / kScan)));
  }
  d.sup_norm = sup;
  const double two_pi_e = 2.0 * boost::math::double_constants::pi * boost::math::double_constants::e;
  d.epsilon = 1.0 / (2.0 * sup * std::sqrt(two_pi_e));
  return d;
}

Rational legendre_power_integral(std::span<const std::int64_t> coeffs, int j) {
  Rational acc = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    acc += Rational(coeffs[i]) / Rational(static_cast<std::int64_t>(i) + j + 1);
  }
  return acc;
}

namespace {

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const Extended pi = boost::math::constants::pi<Extended>();
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n starting from the Tricomi approximation.
    Extended t = cos(pi * (Extended(i) + Extended(0.75)) / (Extended(n) + Extended(0.5)));
    Extended dp;
    for (int iter = 0; iter < 100; ++iter) {
      Extended p0 = 1, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const Extended p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1);
      const Extended step = p1 / dp;
      t -= step;
      if (abs(step) < Extended(1e-33)) break;
    }
    Extended p0 = 1, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const Extended p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (t * p1 - p0) / (t * t - 1);
    const Extended w = 2 / ((1 - t * t) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = (t + 1) / 2;
    rule.weights[static_cast<std::size_t>(i)] = w / 2;
  }
  return rule;
}

}  // namespace

const QuadratureRule& unit_gauss_legendre64() {
  static const QuadratureRule rule = build_gauss_legendre(64);
  return rule;
}

std::vector<Extended> legendre_raw_moments(const LegendreDensity& density, int max_order) {
  const auto& rule = unit_gauss_legendre64();
  std::vector<Extended> poly_at_node(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    poly_at_node[i] = eval_polynomial<Extended>(density.coeffs, rule.nodes[i]);
  }
  std::vector<Extended> out(static_cast<std::size_t>(max_order) + 1);
  const Extended eps = density.epsilon;
  for (int j = 0; j <= max_order; ++j) {
    CompensatedSum<Extended> q;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      q += rule.weights[i] * ipow(rule.nodes[i], j) * poly_at_node[i];
    }
    out[static_cast<std::size_t>(j)] = standard_normal_moment(j) + eps * q.value();
  }
  return out;
}

}  // namespace mal
