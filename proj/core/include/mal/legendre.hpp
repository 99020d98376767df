#pragma once

#include "mal/numeric.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mal {

inline constexpr int kMinLegendreDegree = 2;
inline constexpr int kMaxLegendreDegree = 16;

// Integer coefficients (constant term first) of the shifted Legendre
// polynomial on [0, 1] normalized so that P(1) = 1 and P(0) = (-1)^m:
//   P(x) = sum_j (-1)^(m+j) C(m, j) C(m+j, j) x^j.
std::vector<std::int64_t> legendre_coeffs(int m);

template <typename T>
T eval_polynomial(std::span<const std::int64_t> coeffs, const T& x) {
  T acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + T(*it);
  return acc;
}

// Standard normal density perturbed on [0, 1] by a shifted Legendre polynomial:
//   f(x) = phi(x) + epsilon * P(x) * 1{0 <= x <= 1}.
// The perturbation is orthogonal to x^j for j < m, so the first m - 1 moments
// coincide with those of N(0, 1) while the law itself is not normal.
struct LegendreDensity {
  int m = 0;
  std::vector<std::int64_t> coeffs;
  double sup_norm = 1.0;  // max |P| on [0, 1]
  double epsilon = 0.0;   // [2 * sup_norm * sqrt(2 pi e)]^-1

  double polynomial(double x) const { return eval_polynomial<double>(coeffs, x); }
  double operator()(double x) const;
};

LegendreDensity legendre_density(int m);

// Exact value of int_0^1 x^j P(x) dx.
Rational legendre_power_integral(std::span<const std::int64_t> coeffs, int j);

// 64-point Gauss-Legendre rule mapped to [0, 1]; exact for polynomials of
// degree <= 127.
struct QuadratureRule {
  std::vector<Extended> nodes;
  std::vector<Extended> weights;
};
const QuadratureRule& unit_gauss_legendre64();

// int x^j f(x) dx for j = 0..max_order: closed-form normal moments plus the
// quadrature of the polynomial perturbation.
std::vector<Extended> legendre_raw_moments(const LegendreDensity& density, int max_order);

}  // namespace mal
