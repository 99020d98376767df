#pragma once

#include "mal/distribution.hpp"
#include "mal/legendre.hpp"
#include "mal/numeric.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mal {

// Binomial coefficients and powers beyond this order overflow silently.
inline constexpr int kMaxMomentOrder = 64;

// Mean and central moments mu_0..mu_J of a distribution. mu_0 = 1 and
// mu_1 = 0 exactly. Values are held in extended precision; operator[] gives
// the rounded double.
class MomentSet {
 public:
  MomentSet(Extended mean, std::vector<Extended> central);

  int order() const { return static_cast<int>(central_.size()) - 1; }
  double mean() const { return to_double(mean_); }
  const Extended& mean_ext() const { return mean_; }

  // mu_j; throws ValidationError when j exceeds the available order.
  const Extended& at(int j) const;
  double operator[](int j) const { return to_double(at(j)); }
  double variance() const { return to_double(central_[2]); }
  std::span<const Extended> central() const { return central_; }

  // Throws ValidationError("insufficient moments ...") unless order() >= j.
  void require(int j, std::string_view context) const;

 private:
  Extended mean_;
  std::vector<Extended> central_;
};

// E Z^j for Z ~ N(0, 1): (j - 1)!! for even j, 0 for odd j.
Extended standard_normal_moment(int j);

MomentSet central_moments(const DiscreteDistribution& dist, int upto);
MomentSet central_moments(const BernoulliSpec& dist, int upto);
MomentSet central_moments(const NormalSpec& dist, int upto);
MomentSet central_moments(const LegendreDensity& density, int upto);

// Exact rational mode for laws whose atoms and probabilities are ratios.
// Probabilities are normalized by their total. Returns mu_0..mu_J.
struct RationalAtom {
  Rational x;
  Rational p;
};
std::vector<Rational> central_moments_exact(std::span<const RationalAtom> atoms, int upto);

// Every finite double is a dyadic rational; this returns it exactly.
Rational exact_rational(double x);

// m_j = (1/n) sum (X_i - reference)^j for j = 1..k, accumulated in extended
// precision.
struct SampleMomentVector {
  std::vector<Extended> m;  // m[0] is m_1
  std::size_t n = 0;
  double reference = 0.0;

  int k() const { return static_cast<int>(m.size()); }
};

SampleMomentVector sample_moment_vector(std::span<const double> data, int k, double reference);

// Newton's identity expressing the j-th central moment about the sample mean
// through moments about the reference:
//   g_j(m) = (-1)^(j-1) (j-1) m_1^j + sum_{i=2}^{j-1} (-1)^(j-i) C(j,i) m_i m_1^(j-i) + m_j.
double newton_transform(const SampleMomentVector& m, int j);

// M_{k,n} by two passes (mean first, then compensated centered powers).
// k = 1 returns 0.
double sample_central_moment(std::span<const double> data, int k);

// Sigma_k with entries mu_{i+j} - mu_i mu_j, i, j = 1..k.
Eigen::MatrixXd sigma_matrix(const MomentSet& ms, int k);

// Symmetric matrix PSD check with eigenvalue floor -rel_floor * ||A||.
bool is_psd(const Eigen::MatrixXd& a, double rel_floor = 1e-10);

}  // namespace mal
