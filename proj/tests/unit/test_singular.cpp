#include "mal/error.hpp"
#include "mal/singular.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace mal;
using Catch::Approx;

namespace {

const double kP34 = 0.5 + std::sqrt(3.0) / 6.0;
const double kP5 = 0.5 + std::sqrt(5.0 * std::sqrt(5.0)) / 10.0;
const double kP6 = 0.5 + std::sqrt(15.0 * (4.0 * std::sqrt(10.0) - 5.0)) / 30.0;

double third_moment(const DiscreteDistribution& d) { return central_moments(d, 3)[3]; }

}  // namespace

TEST_CASE("closed-form roots", "[singular]") {
  CHECK(std::abs(solve_pk(3)->p - kP34) <= 1e-14);
  CHECK(std::abs(solve_pk(4)->p - kP34) <= 1e-14);
  CHECK(std::abs(solve_pk(5)->p - kP5) <= 1e-14);
  CHECK(std::abs(solve_pk(6)->p - kP6) <= 1e-14);
  CHECK(solve_pk(5)->p == Approx(0.834370152488211).margin(1e-15));
  CHECK_FALSE(solve_pk(2).has_value());
  CHECK_THROWS_AS(solve_pk(1), ValidationError);
  CHECK_THROWS_AS(solve_pk(33), ValidationError);
}

TEST_CASE("root residuals and brackets", "[singular][property]") {
  double previous_even = 0.5;
  for (int k = 3; k <= kMaxSingularOrder; ++k) {
    const auto r = *solve_pk(k);
    CHECK(r.residual <= 1e-12);
    if (k <= 16) CHECK(r.p_residual <= 1e-12);
    CHECK(r.p == Approx(r.t2 / (1.0 + r.t2)).epsilon(1e-15));
    const Extended kk(k);
    if (k % 2 == 0) {
      CHECK(r.p_ext > (kk - 2) / (kk - 1));
      // The gap to k/(k+1) is of order (1/k)^(k-1), below 113-bit resolution for large k.
      CHECK(r.p_ext <= kk / (kk + 1) + Extended(1e-30));
      CHECK(r.p > previous_even);
      previous_even = r.p;
    } else {
      CHECK(r.p_ext > kk / (kk + 1));
      CHECK(r.p_ext < 1);
    }
  }
}

TEST_CASE("root satisfies the p-form equation independently", "[singular]") {
  // Rational oracle: h(p) = lhs - rhs evaluated exactly at the double root p and
  // at its neighbours p -+ ulp must change sign, so the root lies within one ulp.
  const auto h = [](int k, double pd) {
    const Rational p = exact_rational(pd);
    const Rational q = 1 - p;
    const Rational lhs = ipow(p, k - 1) * ((k % 2 == 0) ? Rational(k - (k + 1) * p) : Rational((k + 1) * p - k));
    return Rational(lhs - ipow(q, k - 1) * ((k + 1) * p - 1));
  };
  for (int k = 3; k <= 16; ++k) {
    const double p = solve_pk(k)->p;
    const Rational below = h(k, std::nextafter(p, 0.0));
    const Rational above = h(k, std::nextafter(p, 1.0));
    CHECK(below * above <= 0);
  }
}

TEST_CASE("two-valued members", "[singular]") {
  const auto m = build_two_valued(3, true);
  REQUIRE(m.dist.size() == 2);
  CHECK(m.dist.atoms()[0].x == Approx(-1.93185165).margin(1e-8));
  CHECK(m.dist.atoms()[0].p == Approx(0.21132487).margin(1e-8));
  CHECK(m.dist.atoms()[1].x == Approx(0.51763809).margin(1e-8));
  CHECK(m.dist.atoms()[1].p == Approx(0.78867513).margin(1e-8));
  CHECK(m.dist.atoms()[0].x == Approx(-std::sqrt(2.0 + std::sqrt(3.0))).epsilon(1e-15));
  CHECK(m.dist.atoms()[1].x == Approx(std::sqrt(2.0 - std::sqrt(3.0))).epsilon(1e-15));

  // Beyond k = 14 the double-rounded atoms miss the 1e-9 atom tolerance.
  for (int k = 3; k <= 14; ++k) {
    for (bool upper : {true, false}) {
      const auto s = build_two_valued(k, upper);
      const auto ms = central_moments(s.dist, 2);
      CHECK(std::abs(ms.mean()) <= 1e-12);
      CHECK(std::abs(ms.variance() - 1.0) <= 1e-12);
      CHECK(is_singular(s.dist, k).singular);
    }
  }
  CHECK(build_two_valued(4, false).dist == build_two_valued(4, true).dist.negated());
  CHECK_THROWS_AS(build_two_valued(2), ValidationError);
}

TEST_CASE("symmetric members", "[singular]") {
  const auto s3 = build_symmetric(3);
  REQUIRE(s3.dist.size() == 3);
  CHECK(s3.dist.atoms()[0].x == -std::sqrt(3.0));
  CHECK(s3.dist.atoms()[0].p == 1.0 / 6.0);
  CHECK(s3.dist.atoms()[1].p == Approx(2.0 / 3.0));
  const auto s5 = build_symmetric(5);
  CHECK(s5.dist.atoms()[2].x == std::sqrt(5.0));
  CHECK(s5.dist.atoms()[2].p == 0.1);
  CHECK(s5.dist.atoms()[1].p == Approx(0.8));
  for (int k = 3; k <= 15; k += 2) {
    const auto ms = central_moments(build_symmetric(k).dist, k);
    CHECK(std::abs(ms[k]) <= 1e-12);
    CHECK(ms[k - 1] == Approx(std::pow(k, (k - 3) / 2.0)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(build_symmetric(4), ValidationError);
}

TEST_CASE("classic examples", "[singular]") {
  const auto r = build_classic_examples(FamilyTag::Rademacher, 4);
  CHECK(r.dist == DiscreteDistribution({{-1.0, 0.5}, {1.0, 0.5}}));
  CHECK(is_singular(r.dist, 4).singular);
  CHECK(build_classic_examples(FamilyTag::YThreeValued, 3).dist == build_symmetric(3).dist);
  CHECK(build_classic_examples(FamilyTag::WTwoValued, 3).dist == build_two_valued(3, true).dist);
  CHECK_THROWS_AS(build_classic_examples(FamilyTag::Rademacher, 3), ValidationError);
  CHECK_THROWS_AS(build_classic_examples(FamilyTag::YThreeValued, 4), ValidationError);
  CHECK_THROWS_AS(build_classic_examples(FamilyTag::WTwoValued, 6), ValidationError);
}

TEST_CASE("f3 family", "[singular]") {
  CHECK(build_f3(0.0).dist == build_symmetric(3).dist);
  const double r2 = std::sqrt(2.0);
  const auto lower = build_f3(-r2);
  CHECK(lower.dist.atoms()[0].x == Approx(-std::sqrt(2.0 + std::sqrt(3.0))));
  CHECK(lower.dist.atoms()[1].p == Approx(kP34));
  CHECK(build_f3(r2).dist == lower.dist.negated());

  const auto m = build_f3(-1.0);
  REQUIRE(m.dist.size() == 3);
  CHECK(m.dist.atoms()[0].x == Approx(-1.879385).margin(1e-6));
  CHECK(m.dist.atoms()[0].p == Approx(0.201690).margin(1e-6));
  CHECK(m.dist.atoms()[1].x == Approx(0.347296).margin(1e-6));
  CHECK(m.dist.atoms()[1].p == Approx(0.712386).margin(1e-6));
  CHECK(m.dist.atoms()[2].x == Approx(1.532089).margin(1e-6));
  CHECK(m.dist.atoms()[2].p == Approx(0.085924).margin(1e-6));
  // Exact-summation oracle for E X, E X^2, E X^3 and the singularity identity.
  const auto exact = testing::rational_atoms(m.dist);
  Rational e1 = 0, e2 = 0, e3 = 0;
  for (const auto& a : exact) {
    e1 += a.p * a.x;
    e2 += a.p * a.x * a.x;
    e3 += a.p * a.x * a.x * a.x;
  }
  CHECK(std::abs(to_double(e1)) <= 1e-14);
  CHECK(std::abs(to_double(e2) - 1.0) <= 1e-14);
  CHECK(std::abs(to_double(e3) + 1.0) <= 1e-14);
  CHECK(is_singular(m.dist, 3).singular);

  CHECK_THROWS_AS(build_f3(1.5), ValidationError);
  CHECK_NOTHROW(build_f3(r2 + 5e-13));
}

TEST_CASE("f3 roundtrip and negation symmetry", "[singular][property]") {
  for (double theta : f3_theta_grid(50)) {
    const auto m = build_f3(theta);
    CHECK(std::abs(third_moment(m.dist) - theta) <= 1e-10);
    CHECK(m.dist.size() <= 3);
    const auto mirrored = build_f3(-theta);
    const auto neg = mirrored.dist.negated();
    REQUIRE(neg.size() == m.dist.size());
    for (std::size_t i = 0; i < neg.size(); ++i) {
      CHECK(neg.atoms()[i].x == Approx(m.dist.atoms()[i].x).margin(1e-14));
      CHECK(neg.atoms()[i].p == Approx(m.dist.atoms()[i].p).margin(1e-14));
    }
  }
}

TEST_CASE("is_singular examples", "[singular]") {
  CHECK(is_singular(DiscreteDistribution({{-1.0, 0.5}, {1.0, 0.5}}), 2).singular);
  const auto p6 = solve_pk(6)->p;
  CHECK(is_singular(DiscreteDistribution({{0.0, 1.0 - p6}, {1.0, p6}}), 6).singular);
  // Five-point Gauss-Hermite rule: a discrete stand-in for N(0, 1).
  const double a = std::sqrt(5.0 - std::sqrt(10.0)), b = std::sqrt(5.0 + std::sqrt(10.0));
  const double wa = (7.0 + 2.0 * std::sqrt(10.0)) / 60.0, wb = (7.0 - 2.0 * std::sqrt(10.0)) / 60.0;
  const DiscreteDistribution gh({{-b, wb}, {-a, wa}, {0.0, 1.0 - 2.0 * (wa + wb)}, {a, wa}, {b, wb}});
  const auto r = is_singular(gh, 2);
  CHECK_FALSE(r.singular);
  CHECK(r.vk2 == Approx(2.0).margin(1e-12));
  CHECK_FALSE(is_singular(DiscreteDistribution({{0.0, 0.7}, {1.0, 0.3}}), 3).singular);
}

TEST_CASE("catalog contents and support-size law", "[singular][property]") {
  for (int k = 2; k <= 12; ++k) {
    const auto members = catalog(k, k == 3 ? f3_theta_grid(50) : std::vector<double>{});
    CHECK_FALSE(members.empty());
    for (const auto& m : members) {
      CHECK(m.order == k);
      CHECK(m.dist.size() <= (k % 2 == 0 ? 2u : 3u));
      const auto r = is_singular(m.dist, k);
      CHECK(r.singular);
      CHECK(r.max_atom_residual <= 1e-9);
    }
  }
  CHECK(catalog(2).size() == 1);
  CHECK(catalog(4).size() == 3);
  CHECK(catalog(5).size() == 3);
  CHECK(catalog(3, f3_theta_grid(50)).size() == 53);
}
