#include "mal/source.hpp"

#include "mal/error.hpp"
#include "mal/parallel.hpp"
#include "mal/singular.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>

namespace mal {

namespace {

constexpr std::uint64_t kSampleStream = 0x5A3F;

FamilyTag family_of(SingularVariant v) {
  switch (v) {
    case SingularVariant::TwoValuedUpper: return FamilyTag::TwoValuedUpper;
    case SingularVariant::TwoValuedLower: return FamilyTag::TwoValuedLower;
    case SingularVariant::Symmetric: return FamilyTag::Symmetric;
    case SingularVariant::Rademacher: return FamilyTag::Rademacher;
    case SingularVariant::YThreeValued: return FamilyTag::YThreeValued;
  }
  throw ValidationError("unknown singular variant");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Source resolve(const DistSpec& spec) {
  Source s{spec, NormalSpec{}};
  std::visit(overloaded{
                 [&](const DiscreteDistribution& d) { s.law = d; },
                 [&](const BernoulliSpec& b) {
                   if (!(b.p > 0.0 && b.p < 1.0)) throw ValidationError("bernoulli p must lie in (0, 1)");
                   s.law = b;
                 },
                 [&](const NormalSpec& n) {
                   if (!(n.sigma > 0.0)) throw ValidationError("normal sigma must be positive");
                   s.law = n;
                 },
                 [&](const LegendreSpec& l) { s.law = legendre_density(l.m); },
                 [&](const SingularSpec& g) {
                   s.law = build_classic_examples(family_of(g.variant), g.order).dist;
                 },
                 [&](const F3Spec& f) { s.law = build_f3(f.theta).dist; },
             },
             spec);
  return s;
}

std::optional<DiscreteDistribution> Source::discrete() const {
  if (const auto* d = std::get_if<DiscreteDistribution>(&law)) return *d;
  if (const auto* b = std::get_if<BernoulliSpec>(&law)) {
    return DiscreteDistribution({{0.0, 1.0 - b->p}, {1.0, b->p}}, "bernoulli");
  }
  return std::nullopt;
}

MomentSet central_moments(const Source& source, int upto) {
  return std::visit([upto](const auto& law) { return central_moments(law, upto); }, source.law);
}

Sampler::Sampler(const Source& source) : law_(source.law) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&law_)) {
    double acc = 0.0;
    for (const auto& a : d->atoms()) {
      support_.push_back(a.x);
      acc += a.p;
      cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
  }
}

double Sampler::draw_with(Engine& engine, std::normal_distribution<double>& gauss) const {
  return std::visit(
      overloaded{
          [&](const DiscreteDistribution&) {
            const double u = uniform01(engine);
            const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            return support_[static_cast<std::size_t>(std::min<std::ptrdiff_t>(
                it - cumulative_.begin(), static_cast<std::ptrdiff_t>(support_.size()) - 1))];
          },
          [&](const BernoulliSpec& b) { return uniform01(engine) < b.p ? 1.0 : 0.0; },
          [&](const NormalSpec& n) { return n.mu + n.sigma * gauss(engine); },
          [&](const LegendreDensity& f) {
            // Envelope 1.5 phi dominates phi + eps P since eps |P| <= phi(1) / 2 on [0, 1].
            for (;;) {
              const double x = gauss(engine);
              const double u = uniform01(engine);
              const double ratio = (x < 0.0 || x > 1.0)
                                       ? 1.0
                                       : 1.0 + f.epsilon * f.polynomial(x) * boost::math::double_constants::root_two_pi *
                                                   std::exp(0.5 * x * x);
              if (1.5 * u < ratio) return x;
            }
          },
      },
      law_);
}

double Sampler::draw(Engine& engine) const {
  std::normal_distribution<double> gauss;
  return draw_with(engine, gauss);
}

void Sampler::fill(Engine& engine, std::span<double> out) const {
  std::normal_distribution<double> gauss;
  for (double& x : out) x = draw_with(engine, gauss);
}

std::vector<double> sample(const Source& source, std::size_t n, std::uint64_t seed) {
  const Sampler sampler(source);
  Engine engine(derive_seed(seed, kSampleStream, 0));
  std::vector<double> out(n);
  sampler.fill(engine, out);
  return out;
}

}  // namespace mal
