#pragma once

#include "mal/distribution.hpp"
#include "mal/legendre.hpp"
#include "mal/moments.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace mal {

using Engine = std::mt19937_64;

// A distribution spec resolved into something that can report moments and
// generate draws. Bernoulli keeps its closed-form moments.
struct Source {
  DistSpec spec;
  std::variant<DiscreteDistribution, BernoulliSpec, NormalSpec, LegendreDensity> law;

  // Finite-support view (Bernoulli maps to {0: 1-p, 1: p}); empty for
  // continuous laws.
  std::optional<DiscreteDistribution> discrete() const;
};

Source resolve(const DistSpec& spec);

MomentSet central_moments(const Source& source, int upto);

// Reusable sampler; cheap to copy, immutable after construction.
class Sampler {
 public:
  explicit Sampler(const Source& source);

  double draw(Engine& engine) const;
  void fill(Engine& engine, std::span<double> out) const;

  // Accepted / proposed ratio of the Legendre rejection step (1 otherwise).
  static constexpr double kLegendreAcceptance = 2.0 / 3.0;

 private:
  double draw_with(Engine& engine, std::normal_distribution<double>& gauss) const;

  std::variant<DiscreteDistribution, BernoulliSpec, NormalSpec, LegendreDensity> law_;
  std::vector<double> support_;
  std::vector<double> cumulative_;
};

// Uniform on [0, 1) from the top 53 bits.
inline double uniform01(Engine& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

// n i.i.d. draws, deterministic in (source, n, seed).
std::vector<double> sample(const Source& source, std::size_t n, std::uint64_t seed);

}  // namespace mal
