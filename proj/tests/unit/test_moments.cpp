#include "mal/distribution.hpp"
#include "mal/error.hpp"
#include "mal/moments.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

using namespace mal;
using Catch::Approx;

namespace {

DiscreteDistribution rademacher() { return DiscreteDistribution({{-1.0, 0.5}, {1.0, 0.5}}); }

DiscreteDistribution random_discrete(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(2, 6);
  std::uniform_real_distribution<double> x(-3.0, 3.0), w(0.05, 1.0);
  const int m = size(rng);
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    atoms.push_back({x(rng) + 7.0 * i, w(rng)});
    total += atoms.back().p;
  }
  double acc = 0.0;
  for (int i = 0; i + 1 < m; ++i) {
    atoms[static_cast<std::size_t>(i)].p /= total;
    acc += atoms[static_cast<std::size_t>(i)].p;
  }
  atoms.back().p = 1.0 - acc;
  return DiscreteDistribution(atoms);
}

}  // namespace

TEST_CASE("distribution validation", "[moments]") {
  CHECK_THROWS_AS(DiscreteDistribution({{0.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution({{0.0, 0.5}, {1.0, 0.4}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution({{0.0, 0.5}, {0.0, 0.5}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution({{0.0, 1.2}, {1.0, -0.2}}), ValidationError);
  CHECK_NOTHROW(DiscreteDistribution({{0.0, 0.5}, {1.0, 0.5 + 5e-13}}));
  const DiscreteDistribution d({{2.0, 0.25}, {-1.0, 0.75}});
  CHECK(d.atoms()[0].x == -1.0);
  CHECK(d.negated().atoms()[0].x == -2.0);
}

TEST_CASE("distribution spec parsing is strict", "[moments]") {
  const auto spec = parse_dist_spec(std::string_view(R"({"kind":"finite","atoms":[{"x":-1,"p":0.5},{"x":1,"p":0.5}]})"));
  CHECK(std::holds_alternative<DiscreteDistribution>(spec));
  CHECK(std::get<BernoulliSpec>(parse_dist_spec(std::string_view(R"({"kind":"bernoulli","p":0.3})"))).p == 0.3);
  CHECK(std::get<SingularSpec>(parse_dist_spec(std::string_view(
                                   R"({"kind":"singular","order":5,"variant":"y-three-valued"})")))
            .variant == SingularVariant::YThreeValued);
  CHECK_THROWS_AS(parse_dist_spec(std::string_view(R"({"kind":"bernoulli","p":0.3,"q":0.7})")), ValidationError);
  CHECK_THROWS_AS(parse_dist_spec(std::string_view(R"({"kind":"normal","mu":0})")), ValidationError);
  CHECK_THROWS_AS(parse_dist_spec(std::string_view(R"({"kind":"cauchy"})")), ValidationError);
  CHECK_THROWS_AS(parse_dist_spec(std::string_view(R"({"kind":"bernoulli","p":"x"})")), ValidationError);
  CHECK_THROWS_AS(parse_dist_spec(std::string_view("{not json")), ValidationError);
  CHECK_THROWS_AS(parse_dist_spec(std::string_view(
                      R"({"kind":"finite","atoms":[{"x":0,"p":0.5},{"x":1,"p":0.4}]})")),
                  ValidationError);
}

TEST_CASE("finite spec round-trips through JSON", "[moments]") {
  const DiscreteDistribution d({{-1.9318516525781366, 0.21132486540518713}, {0.5176380902050415, 0.7886751345948129}});
  const auto back = parse_dist_spec(to_json(d));
  CHECK(std::get<DiscreteDistribution>(back) == d);
}

TEST_CASE("central moments of simple laws", "[moments]") {
  const auto r = central_moments(rademacher(), 4);
  CHECK(r[2] == 1.0);
  CHECK(r[3] == 0.0);
  CHECK(r[4] == 1.0);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 0.0);

  const auto n = central_moments(NormalSpec{0.0, 1.0}, 6);
  CHECK(n[4] == 3.0);
  CHECK(n[6] == 15.0);
  CHECK(n[5] == 0.0);
  const auto n2 = central_moments(NormalSpec{3.0, 2.0}, 4);
  CHECK(n2.mean() == 3.0);
  CHECK(n2[4] == 48.0);

  CHECK_THROWS_AS(central_moments(rademacher(), -1), ValidationError);
  CHECK_THROWS_AS(central_moments(rademacher(), 65), ValidationError);
  CHECK_THROWS_WITH(r.at(5), Catch::Matchers::ContainsSubstring("insufficient moments"));
}

TEST_CASE("bernoulli closed form matches atom summation", "[moments][property]") {
  for (int i = 1; i <= 9; ++i) {
    const double p = i / 10.0;
    const auto closed = central_moments(BernoulliSpec{p}, 12);
    const auto atoms = central_moments(DiscreteDistribution({{0.0, 1.0 - p}, {1.0, p}}), 12);
    for (int k = 0; k <= 12; ++k) CHECK(std::abs(closed[k] - atoms[k]) <= 1e-14);
  }
}

TEST_CASE("bernoulli(p6) sixth moment", "[moments]") {
  const double p6 = 0.5 + std::sqrt(15.0 * (4.0 * std::sqrt(10.0) - 5.0)) / 30.0;
  const auto ms = central_moments(BernoulliSpec{p6}, 6);
  CHECK(ms[6] == Approx((4.0 * std::sqrt(10.0) - 5.0) / 135.0).margin(1e-14));
}

TEST_CASE("extended moments agree with exact rational moments", "[moments][property]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_discrete(rng);
    const auto ms = central_moments(d, 10);
    const auto exact = testing::exact_central(d, 10);
    for (int j = 0; j <= 10; ++j) {
      const double e = to_double(exact[static_cast<std::size_t>(j)]);
      CHECK(std::abs(ms[j] - e) <= 1e-25 + 1e-28 * std::abs(e));
    }
  }
}

TEST_CASE("exact_rational is exact", "[moments]") {
  CHECK(exact_rational(0.5) == Rational(1, 2));
  CHECK(exact_rational(-3.0) == Rational(-3));
  CHECK(exact_rational(0.1) != Rational(1, 10));
  CHECK(to_double(exact_rational(0.1)) == 0.1);
  CHECK(to_double(exact_rational(1e-300)) == 1e-300);
}

TEST_CASE("newton transform examples", "[moments]") {
  const std::vector<double> data{0.0, 1.0};
  const auto m2 = sample_moment_vector(data, 2, 0.0);
  CHECK(newton_transform(m2, 2) == Approx(0.25));
  CHECK(newton_transform(m2, 1) == Approx(0.5));
  const auto m3 = sample_moment_vector(data, 3, 0.0);
  CHECK(newton_transform(m3, 3) == Approx(0.0).margin(1e-15));
  CHECK_THROWS_AS(newton_transform(m3, 4), ValidationError);
  CHECK_THROWS_AS(newton_transform(m3, 0), ValidationError);
}

TEST_CASE("newton transform equals the two-pass sample moment", "[moments][property]") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.5, 2.0);
  std::uniform_real_distribution<double> ref(-3.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> data(50);
    for (double& x : data) x = gauss(rng);
    const auto m = sample_moment_vector(data, 6, ref(rng));
    const double sd = std::sqrt(sample_central_moment(data, 2));
    for (int k = 2; k <= 6; ++k) {
      const double direct = sample_central_moment(data, k);
      const double newton = newton_transform(m, k);
      worst = std::max(worst, std::abs(newton - direct) / std::max(std::abs(direct), std::pow(sd, k)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("sample central moment examples", "[moments]") {
  CHECK(sample_central_moment(std::vector<double>{1.0, 1.0, 1.0}, 2) == 0.0);
  CHECK(sample_central_moment(std::vector<double>{0.0, 1.0}, 2) == 0.25);
  CHECK(sample_central_moment(std::vector<double>{0.0, 0.0, 3.0}, 3) == Approx(2.0));
  CHECK(sample_central_moment(std::vector<double>{0.0, 3.0}, 1) == 0.0);
  CHECK_THROWS_AS(sample_central_moment(std::vector<double>{}, 2), ValidationError);
}

TEST_CASE("sigma matrix examples", "[moments]") {
  const auto s = sigma_matrix(central_moments(rademacher(), 4), 2);
  CHECK(s(0, 0) == 1.0);
  CHECK(s(0, 1) == 0.0);
  CHECK(s(1, 1) == 0.0);
  const auto n = sigma_matrix(central_moments(NormalSpec{}, 4), 2);
  CHECK(n(0, 0) == 1.0);
  CHECK(n(1, 1) == 2.0);
  CHECK_THROWS_AS(sigma_matrix(central_moments(NormalSpec{}, 3), 2), ValidationError);
}

TEST_CASE("sigma matrix is PSD and moments satisfy Cauchy-Schwarz", "[moments][property]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = random_discrete(rng);
    const auto ms = central_moments(d, 12);
    for (int k = 1; k <= 6; ++k) CHECK(is_psd(sigma_matrix(ms, k)));
    for (int j = 0; 2 * j <= 12; j += 1) {
      if (2 * j <= 12) CHECK(ms[2 * j] >= 0.0);
    }
    for (int i = 0; 2 * i <= 12; ++i) {
      for (int j = 0; 2 * j <= 12; ++j) {
        const Extended lhs = ms.at(i + j) * ms.at(i + j);
        const Extended rhs = ms.at(2 * i) * ms.at(2 * j);
        CHECK(lhs <= rhs * (1 + Extended(1e-25)));
      }
    }
  }
}

TEST_CASE("PSD check tolerates exact rank deficiency", "[moments]") {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  CHECK(is_psd(a));
  a << 1.0, 0.0, 0.0, -1e-3;
  CHECK_FALSE(is_psd(a));
}
