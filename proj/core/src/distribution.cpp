#include "mal/distribution.hpp"

#include "mal/error.hpp"
#include "mal/numeric.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace mal {

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms, std::string label)
    : atoms_(std::move(atoms)), label_(std::move(label)) {
  if (atoms_.size() < 2) {
    throw ValidationError("discrete distribution needs at least two atoms (non-degenerate)");
  }
  CompensatedSum<double> mass;
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.x) || !std::isfinite(a.p)) {
      throw ValidationError("discrete distribution has a non-finite atom");
    }
    if (!(a.p > 0.0)) throw ValidationError("atom probabilities must be strictly positive");
    mass += a.p;
  }
  if (std::abs(mass.value() - 1.0) > kMassTolerance) {
    throw ValidationError("atom probabilities sum to " + std::to_string(mass.value()) +
                          ", expected 1");
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    if (atoms_[i].x == atoms_[i - 1].x) {
      throw ValidationError("support points must be distinct");
    }
  }
}

DiscreteDistribution DiscreteDistribution::negated() const {
  std::vector<Atom> flipped;
  flipped.reserve(atoms_.size());
  for (const auto& a : atoms_) flipped.push_back({-a.x, a.p});
  return DiscreteDistribution(std::move(flipped), label_);
}

bool operator==(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return std::equal(a.atoms_.begin(), a.atoms_.end(), b.atoms_.begin(), b.atoms_.end(),
                    [](const Atom& u, const Atom& v) { return u.x == v.x && u.p == v.p; });
}

std::string_view to_string(SingularVariant v) {
  switch (v) {
    case SingularVariant::TwoValuedUpper: return "two-valued-upper";
    case SingularVariant::TwoValuedLower: return "two-valued-lower";
    case SingularVariant::Symmetric: return "symmetric";
    case SingularVariant::Rademacher: return "rademacher";
    case SingularVariant::YThreeValued: return "y-three-valued";
  }
  return "unknown";
}

SingularVariant parse_singular_variant(std::string_view name) {
  for (auto v : {SingularVariant::TwoValuedUpper, SingularVariant::TwoValuedLower,
                 SingularVariant::Symmetric, SingularVariant::Rademacher,
                 SingularVariant::YThreeValued}) {
    if (to_string(v) == name) return v;
  }
  throw ValidationError("unknown singular variant '" + std::string(name) + "'");
}

namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> keys(allowed);
  for (const auto& [key, _] : j.items()) {
    if (!keys.contains(key)) throw ValidationError("unexpected key '" + key + "' in distribution spec");
  }
  for (auto key : allowed) {
    if (!j.contains(key)) {
      throw ValidationError("distribution spec is missing key '" + std::string(key) + "'");
    }
  }
}

double get_real(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ValidationError(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(std::string("'") + key + "' must be finite");
  return x;
}

int get_int(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

DistSpec parse_dist_spec(const json& j) {
  if (!j.is_object()) throw ValidationError("distribution spec must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("distribution spec needs a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "finite") {
    require_keys(j, {"kind", "atoms"});
    if (!j["atoms"].is_array()) throw ValidationError("'atoms' must be an array");
    std::vector<Atom> atoms;
    for (const auto& a : j["atoms"]) {
      if (!a.is_object()) throw ValidationError("each atom must be an object {x, p}");
      require_keys(a, {"x", "p"});
      atoms.push_back({get_real(a, "x"), get_real(a, "p")});
    }
    return DiscreteDistribution(std::move(atoms));
  }
  if (kind == "bernoulli") {
    require_keys(j, {"kind", "p"});
    const double p = get_real(j, "p");
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("bernoulli p must lie in (0, 1)");
    return BernoulliSpec{p};
  }
  if (kind == "normal") {
    require_keys(j, {"kind", "mu", "sigma"});
    const double sigma = get_real(j, "sigma");
    if (!(sigma > 0.0)) throw ValidationError("normal sigma must be positive");
    return NormalSpec{get_real(j, "mu"), sigma};
  }
  if (kind == "legendre") {
    require_keys(j, {"kind", "m"});
    return LegendreSpec{get_int(j, "m")};
  }
  if (kind == "singular") {
    require_keys(j, {"kind", "order", "variant"});
    if (!j["variant"].is_string()) throw ValidationError("'variant' must be a string");
    return SingularSpec{get_int(j, "order"), parse_singular_variant(j["variant"].get<std::string>())};
  }
  if (kind == "f3") {
    require_keys(j, {"kind", "theta"});
    return F3Spec{get_real(j, "theta")};
  }
  throw ValidationError("unknown distribution kind '" + kind + "'");
}

DistSpec parse_dist_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("distribution spec is not valid JSON: ") + e.what());
  }
  return parse_dist_spec(j);
}

json to_json(const DiscreteDistribution& dist) {
  json atoms = json::array();
  for (const auto& a : dist.atoms()) atoms.push_back({{"x", a.x}, {"p", a.p}});
  return {{"kind", "finite"}, {"atoms", std::move(atoms)}};
}

json to_json(const DistSpec& spec) {
  struct Visitor {
    json operator()(const DiscreteDistribution& d) const { return to_json(d); }
    json operator()(const BernoulliSpec& b) const { return {{"kind", "bernoulli"}, {"p", b.p}}; }
    json operator()(const NormalSpec& n) const {
      return {{"kind", "normal"}, {"mu", n.mu}, {"sigma", n.sigma}};
    }
    json operator()(const LegendreSpec& l) const { return {{"kind", "legendre"}, {"m", l.m}}; }
    json operator()(const SingularSpec& s) const {
      return {{"kind", "singular"}, {"order", s.order}, {"variant", to_string(s.variant)}};
    }
    json operator()(const F3Spec& f) const { return {{"kind", "f3"}, {"theta", f.theta}}; }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace mal
