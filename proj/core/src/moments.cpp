#include "mal/moments.hpp"

#include "mal/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace mal {

namespace {

void check_order(int upto) {
  if (upto < 0) throw ValidationError("moment order must be non-negative");
  if (upto > kMaxMomentOrder) {
    throw ValidationError("moment order " + std::to_string(upto) + " exceeds the cap of " +
                          std::to_string(kMaxMomentOrder));
  }
}

// Pads to at least order 1 so that mu_0 and mu_1 always exist.
std::vector<Extended> with_fixed_low_orders(std::vector<Extended> central) {
  if (central.size() < 2) central.resize(2);
  central[0] = 1;
  central[1] = 0;
  return central;
}

}  // namespace

MomentSet::MomentSet(Extended mean, std::vector<Extended> central)
    : mean_(std::move(mean)), central_(with_fixed_low_orders(std::move(central))) {}

const Extended& MomentSet::at(int j) const {
  require(j, "moment lookup");
  if (j < 0) throw ValidationError("negative moment index");
  return central_[static_cast<std::size_t>(j)];
}

void MomentSet::require(int j, std::string_view context) const {
  if (j > order()) {
    throw ValidationError("insufficient moments for " + std::string(context) + ": need order " +
                          std::to_string(j) + ", have " + std::to_string(order()));
  }
}

Extended standard_normal_moment(int j) {
  if (j < 0) throw ValidationError("negative moment index");
  if (j % 2 == 1) return 0;
  Extended r = 1;
  for (int i = j - 1; i > 1; i -= 2) r *= i;
  return r;
}

MomentSet central_moments(const DiscreteDistribution& dist, int upto) {
  check_order(upto);
  CompensatedSum<Extended> mass, first;
  for (const auto& a : dist.atoms()) {
    mass += Extended(a.p);
    first += Extended(a.p) * Extended(a.x);
  }
  const Extended total = mass.value();
  const Extended mean = first.value() / total;

  std::vector<Extended> central(static_cast<std::size_t>(upto) + 1);
  std::vector<Extended> dev;
  for (const auto& a : dist.atoms()) dev.push_back(Extended(a.x) - mean);
  for (int j = 0; j <= upto; ++j) {
    CompensatedSum<Extended> s;
    std::size_t i = 0;
    for (const auto& a : dist.atoms()) s += Extended(a.p) * ipow(dev[i++], j);
    central[static_cast<std::size_t>(j)] = s.value() / total;
  }
  return MomentSet(mean, std::move(central));
}

MomentSet central_moments(const BernoulliSpec& dist, int upto) {
  check_order(upto);
  if (!(dist.p > 0.0 && dist.p < 1.0)) throw ValidationError("bernoulli p must lie in (0, 1)");
  const Extended p = dist.p;
  const Extended q = Extended(1) - p;
  std::vector<Extended> central(static_cast<std::size_t>(upto) + 1);
  central[0] = 1;
  for (int k = 1; k <= upto; ++k) {
    const Extended sign = (k % 2 == 0) ? 1 : -1;
    central[static_cast<std::size_t>(k)] = p * q * (ipow(q, k - 1) + sign * ipow(p, k - 1));
  }
  return MomentSet(p, std::move(central));
}

MomentSet central_moments(const NormalSpec& dist, int upto) {
  check_order(upto);
  if (!(dist.sigma > 0.0)) throw ValidationError("normal sigma must be positive");
  std::vector<Extended> central(static_cast<std::size_t>(upto) + 1);
  const Extended sigma = dist.sigma;
  for (int j = 0; j <= upto; ++j) {
    central[static_cast<std::size_t>(j)] = ipow(sigma, j) * standard_normal_moment(j);
  }
  return MomentSet(Extended(dist.mu), std::move(central));
}

MomentSet central_moments(const LegendreDensity& density, int upto) {
  check_order(upto);
  const auto& rule = unit_gauss_legendre64();
  std::vector<Extended> poly(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    poly[i] = eval_polynomial<Extended>(density.coeffs, rule.nodes[i]);
  }
  const Extended eps = density.epsilon;
  auto perturbation = [&](auto&& integrand) {
    CompensatedSum<Extended> s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      s += rule.weights[i] * integrand(rule.nodes[i]) * poly[i];
    }
    return eps * s.value();
  };
  const Extended mean = perturbation([](const Extended& x) { return x; });

  std::vector<Extended> central(static_cast<std::size_t>(upto) + 1);
  for (int j = 0; j <= upto; ++j) {
    // Normal part: E (Z - mean)^j by binomial expansion.
    CompensatedSum<Extended> normal_part;
    for (int i = 0; i <= j; ++i) {
      normal_part += Extended(binomial(j, i)) * standard_normal_moment(i) * ipow(Extended(-mean), j - i);
    }
    central[static_cast<std::size_t>(j)] =
        normal_part.value() + perturbation([&](const Extended& x) { return ipow(Extended(x - mean), j); });
  }
  return MomentSet(mean, std::move(central));
}

std::vector<Rational> central_moments_exact(std::span<const RationalAtom> atoms, int upto) {
  check_order(upto);
  Rational mass = 0, first = 0;
  for (const auto& a : atoms) {
    if (a.p <= 0) throw ValidationError("rational atom probabilities must be positive");
    mass += a.p;
    first += a.p * a.x;
  }
  if (atoms.size() < 2) throw ValidationError("need at least two atoms");
  const Rational mean = first / mass;
  std::vector<Rational> out(static_cast<std::size_t>(upto) + 1);
  for (int j = 0; j <= upto; ++j) {
    Rational s = 0;
    for (const auto& a : atoms) s += a.p * ipow(Rational(a.x - mean), j);
    out[static_cast<std::size_t>(j)] = s / mass;
  }
  return out;
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw ValidationError("cannot represent a non-finite value exactly");
  if (x == 0.0) return 0;
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational r(scaled);
  const int shift = exponent - 53;
  const BigInt two_pow = BigInt(1) << std::abs(shift);
  return shift >= 0 ? r * Rational(two_pow) : r / Rational(two_pow);
}

SampleMomentVector sample_moment_vector(std::span<const double> data, int k, double reference) {
  if (data.empty()) throw ValidationError("sample moments need a non-empty sample");
  if (k < 1) throw ValidationError("sample moment vector needs k >= 1");
  check_order(k);
  SampleMomentVector out;
  out.n = data.size();
  out.reference = reference;
  out.m.assign(static_cast<std::size_t>(k), Extended(0));
  std::vector<CompensatedSum<Extended>> sums(static_cast<std::size_t>(k));
  const Extended ref = reference;
  for (double x : data) {
    const Extended d = Extended(x) - ref;
    Extended pw = d;
    for (int j = 0; j < k; ++j) {
      sums[static_cast<std::size_t>(j)] += pw;
      pw *= d;
    }
  }
  const Extended n = static_cast<double>(data.size());
  for (int j = 0; j < k; ++j) out.m[static_cast<std::size_t>(j)] = sums[static_cast<std::size_t>(j)].value() / n;
  return out;
}

double newton_transform(const SampleMomentVector& m, int j) {
  if (j < 1 || j > m.k()) {
    throw ValidationError("newton_transform index " + std::to_string(j) + " outside [1, " +
                          std::to_string(m.k()) + "]");
  }
  const Extended& m1 = m.m[0];
  if (j == 1) return to_double(m1);
  const Extended lead_sign = ((j - 1) % 2 == 0) ? 1 : -1;
  CompensatedSum<Extended> s;
  s += lead_sign * Extended(j - 1) * ipow(m1, j);
  for (int i = 2; i <= j - 1; ++i) {
    const Extended sign = ((j - i) % 2 == 0) ? 1 : -1;
    s += sign * Extended(binomial(j, i)) * m.m[static_cast<std::size_t>(i - 1)] * ipow(m1, j - i);
  }
  s += m.m[static_cast<std::size_t>(j - 1)];
  return to_double(s.value());
}

double sample_central_moment(std::span<const double> data, int k) {
  if (data.empty()) throw ValidationError("sample central moment of an empty sample");
  if (k < 1) throw ValidationError("sample central moment needs k >= 1");
  if (k == 1) return 0.0;
  CompensatedSum<double> sum;
  for (double x : data) sum += x;
  const double n = static_cast<double>(data.size());
  const double mean = sum.value() / n;
  CompensatedSum<double> acc;
  for (double x : data) acc += ipow(x - mean, k);
  return acc.value() / n;
}

Eigen::MatrixXd sigma_matrix(const MomentSet& ms, int k) {
  if (k < 1) throw ValidationError("sigma_matrix needs k >= 1");
  ms.require(2 * k, "sigma_matrix");
  Eigen::MatrixXd s(k, k);
  for (int i = 1; i <= k; ++i) {
    for (int j = i; j <= k; ++j) {
      const double v = to_double(ms.at(i + j) - ms.at(i) * ms.at(j));
      s(i - 1, j - 1) = v;
      s(j - 1, i - 1) = v;
    }
  }
  return s;
}

bool is_psd(const Eigen::MatrixXd& a, double rel_floor) {
  if (a.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double spectral_norm = ev.cwiseAbs().maxCoeff();
  return ev.minCoeff() >= -rel_floor * spectral_norm;
}

}  // namespace mal
