#pragma once

#include "mal/distribution.hpp"
#include "mal/moments.hpp"

#include <vector>

namespace mal::testing {

// Exact rational atoms of a double-valued distribution.
inline std::vector<RationalAtom> rational_atoms(const DiscreteDistribution& d) {
  std::vector<RationalAtom> out;
  for (const auto& a : d.atoms()) out.push_back({exact_rational(a.x), exact_rational(a.p)});
  return out;
}

// E[(X - mu)^j] by direct rational summation, j = 0..upto.
inline std::vector<Rational> exact_central(const DiscreteDistribution& d, int upto) {
  const auto atoms = rational_atoms(d);
  return central_moments_exact(atoms, upto);
}

// Var(U^k - c U) and Cov(U, U^j - c U) for U = X - mu by atom summation.
inline Rational exact_var_of_transform(const DiscreteDistribution& d, int k) {
  const auto atoms = rational_atoms(d);
  const auto mu = central_moments_exact(atoms, k);
  Rational mass = 0, mean = 0;
  for (const auto& a : atoms) {
    mass += a.p;
    mean += a.p * a.x;
  }
  mean /= mass;
  const Rational c = Rational(k) * mu[static_cast<std::size_t>(k - 1)];
  Rational m1 = 0, m2 = 0;
  for (const auto& a : atoms) {
    const Rational u = a.x - mean;
    const Rational g = ipow(u, k) - c * u;
    m1 += a.p * g;
    m2 += a.p * g * g;
  }
  m1 /= mass;
  m2 /= mass;
  return m2 - m1 * m1;
}

inline Rational exact_cov_with_mean(const DiscreteDistribution& d, int j) {
  const auto atoms = rational_atoms(d);
  const auto mu = central_moments_exact(atoms, j);
  Rational mass = 0, mean = 0;
  for (const auto& a : atoms) {
    mass += a.p;
    mean += a.p * a.x;
  }
  mean /= mass;
  const Rational c = Rational(j) * mu[static_cast<std::size_t>(j - 1)];
  Rational s = 0;
  for (const auto& a : atoms) {
    const Rational u = a.x - mean;
    s += a.p * u * (ipow(u, j) - c * u);
  }
  return s / mass;  // E U = 0, so this is the covariance
}

}  // namespace mal::testing
