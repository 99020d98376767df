#pragma once

#include <nlohmann/json_fwd.hpp>

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mal {

struct Atom {
  double x;
  double p;
};

// Finite-support law. Invariants: at least two atoms, strictly distinct
// support points, every p > 0, total mass 1 within 1e-12. Atoms are kept
// sorted by support point.
class DiscreteDistribution {
 public:
  static constexpr double kMassTolerance = 1e-12;

  explicit DiscreteDistribution(std::vector<Atom> atoms, std::string label = {});

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const std::string& label() const { return label_; }

  // Law of -X.
  DiscreteDistribution negated() const;

  friend bool operator==(const DiscreteDistribution& a, const DiscreteDistribution& b);

 private:
  std::vector<Atom> atoms_;
  std::string label_;
};

struct BernoulliSpec {
  double p;
};

struct NormalSpec {
  double mu = 0.0;
  double sigma = 1.0;
};

struct LegendreSpec {
  int m;
};

enum class SingularVariant { TwoValuedUpper, TwoValuedLower, Symmetric, Rademacher, YThreeValued };

struct SingularSpec {
  int order;
  SingularVariant variant;
};

struct F3Spec {
  double theta;
};

using DistSpec =
    std::variant<DiscreteDistribution, BernoulliSpec, NormalSpec, LegendreSpec, SingularSpec, F3Spec>;

std::string_view to_string(SingularVariant v);
SingularVariant parse_singular_variant(std::string_view name);

// Strict parser for the JSON distribution spec; unknown keys, missing keys and
// wrongly typed values raise ValidationError.
DistSpec parse_dist_spec(const nlohmann::json& j);
DistSpec parse_dist_spec(std::string_view text);

nlohmann::json to_json(const DistSpec& spec);
nlohmann::json to_json(const DiscreteDistribution& dist);

}  // namespace mal
