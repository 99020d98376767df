#include "mal/singular.hpp"

#include "mal/asymptotics.hpp"
#include "mal/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace mal {

namespace {

void check_order_range(int k, int lo, std::string_view what) {
  if (k < lo) {
    throw ValidationError(std::string(what) + " needs order >= " + std::to_string(lo) + ", got " +
                          std::to_string(k));
  }
  if (k > kMaxSingularOrder) {
    throw ValidationError(std::string(what) + " order " + std::to_string(k) + " exceeds the cap of " +
                          std::to_string(kMaxSingularOrder));
  }
}

Extended sqrt_ext(const Extended& x) { return sqrt(x); }

}  // namespace

Extended root_polynomial(int k, const Extended& t) {
  const Extended tk1 = ipow(t, k - 1);
  const Extended kk = k;
  if (k % 2 == 0) return tk1 * t - kk * tk1 + kk * t - 1;
  return tk1 * t - kk * tk1 - kk * t + 1;
}

Extended root_equation_residual(int k, const Extended& p) {
  const Extended q = Extended(1) - p;
  const Extended kk = k;
  const Extended bracket = (k % 2 == 0) ? Extended(kk - (kk + 1) * p) : Extended((kk + 1) * p - kk);
  const Extended lhs = ipow(p, k - 1) * bracket;
  const Extended rhs = ipow(q, k - 1) * ((kk + 1) * p - 1);
  const Extended scale = std::max(abs(lhs), abs(rhs));
  if (scale == 0) return 0;
  return abs(lhs - rhs) / scale;
}

std::optional<SingularRoot> solve_pk(int k) {
  check_order_range(k, 2, "solve_pk");
  if (k == 2) return std::nullopt;

  Extended lo = std::max(1.0 + 1e-9, static_cast<double>(k - 2));
  Extended hi = 2.0 * k;
  Extended flo = root_polynomial(k, lo);
  const Extended fhi = root_polynomial(k, hi);
  if (!(flo < 0 && fhi > 0)) {
    throw NumericError("solve_pk: no sign change on the bracket for k = " + std::to_string(k));
  }
  while (hi - lo > Extended(1e-14)) {
    const Extended mid = (lo + hi) / 2;
    const Extended fm = root_polynomial(k, mid);
    if (fm == 0) {
      lo = hi = mid;
      break;
    }
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  Extended t = (lo + hi) / 2;
  // One Newton polish step; the derivative is k q_k(t), positive beyond the bracket start.
  const Extended kk = k;
  const Extended deriv = (k % 2 == 0)
                             ? Extended(kk * (ipow(t, k - 1) - (kk - 1) * ipow(t, k - 2) + 1))
                             : Extended(kk * (ipow(t, k - 1) - (kk - 1) * ipow(t, k - 2) - 1));
  if (deriv != 0) {
    const Extended polished = t - root_polynomial(k, t) / deriv;
    if (polished > lo - Extended(1e-13) && polished < hi + Extended(1e-13)) t = polished;
  }

  SingularRoot root;
  root.k = k;
  root.even = (k % 2 == 0);
  root.t_ext = t;
  root.p_ext = t / (1 + t);
  root.t2 = to_double(t);
  root.p = to_double(root.p_ext);
  const Extended scale = std::max(Extended(1), ipow(t, k));
  root.residual = to_double(abs(root_polynomial(k, t)) / scale);
  root.p_residual = to_double(root_equation_residual(k, root.p_ext));
  return root;
}

std::string_view to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::TwoValuedUpper: return "two-valued-upper";
    case FamilyTag::TwoValuedLower: return "two-valued-lower";
    case FamilyTag::Symmetric: return "symmetric";
    case FamilyTag::Rademacher: return "rademacher";
    case FamilyTag::YThreeValued: return "y-three-valued";
    case FamilyTag::WTwoValued: return "w-two-valued";
    case FamilyTag::F3: return "f3";
  }
  return "unknown";
}

SingularMember build_two_valued(int k, bool upper) {
  check_order_range(k, 3, "build_two_valued");
  const auto root = solve_pk(k);
  const Extended p = root->p_ext;
  const Extended q = Extended(1) - p;
  std::vector<Atom> atoms{{to_double(-sqrt_ext(p / q)), to_double(q)},
                          {to_double(sqrt_ext(q / p)), to_double(p)}};
  DiscreteDistribution dist(std::move(atoms), "two-valued order " + std::to_string(k));
  SingularMember m{upper ? dist : dist.negated(), k, true,
                   upper ? FamilyTag::TwoValuedUpper : FamilyTag::TwoValuedLower, root->p};
  return m;
}

SingularMember build_symmetric(int k) {
  check_order_range(k, 3, "build_symmetric");
  if (k % 2 == 0) throw ValidationError("build_symmetric needs an odd order, got " + std::to_string(k));
  const double a = std::sqrt(static_cast<double>(k));
  const double tail = 1.0 / (2.0 * k);
  DiscreteDistribution dist({{-a, tail}, {0.0, 1.0 - 1.0 / k}, {a, tail}},
                            "symmetric order " + std::to_string(k));
  return SingularMember{std::move(dist), k, true, FamilyTag::Symmetric, 0.0};
}

SingularMember build_classic_examples(FamilyTag family, int k) {
  switch (family) {
    case FamilyTag::Rademacher: {
      check_order_range(k, 2, "rademacher example");
      if (k % 2 != 0) throw ValidationError("rademacher example needs an even order");
      DiscreteDistribution dist({{-1.0, 0.5}, {1.0, 0.5}}, "rademacher");
      return SingularMember{std::move(dist), k, true, FamilyTag::Rademacher, 0.0};
    }
    case FamilyTag::YThreeValued: {
      if (k % 2 == 0) throw ValidationError("y-three-valued example needs an odd order");
      auto m = build_symmetric(k);
      m.family = FamilyTag::YThreeValued;
      return m;
    }
    case FamilyTag::WTwoValued: {
      check_order_range(k, 3, "w-two-valued example");
      if (k % 2 == 0) throw ValidationError("w-two-valued example needs an odd order");
      auto m = build_two_valued(k, true);
      m.family = FamilyTag::WTwoValued;
      return m;
    }
    case FamilyTag::TwoValuedUpper: return build_two_valued(k, true);
    case FamilyTag::TwoValuedLower: return build_two_valued(k, false);
    case FamilyTag::Symmetric: return build_symmetric(k);
    case FamilyTag::F3: break;
  }
  throw ValidationError("f3 members are built from theta, not from an order");
}

SingularMember build_f3(double theta) {
  const double root2 = boost::math::double_constants::root_two;
  constexpr double kSnap = 1e-12;
  if (!std::isfinite(theta) || std::abs(theta) > root2 + kSnap) {
    throw ValidationError("f3 needs |theta| <= sqrt(2); no member of the class has theta = " +
                          std::to_string(theta));
  }
  auto tag = [theta](SingularMember m) {
    m.family = FamilyTag::F3;
    m.parameter = theta;
    return m;
  };
  if (theta == 0.0) return tag(build_symmetric(3));
  if (std::abs(theta + root2) <= kSnap) return tag(build_two_valued(3, true));
  if (std::abs(theta - root2) <= kSnap) return tag(build_two_valued(3, false));
  if (theta > 0.0) {
    auto m = build_f3(-theta);
    return SingularMember{m.dist.negated(), 3, true, FamilyTag::F3, theta};
  }

  // gamma^3 - 3 gamma = theta is increasing on (sqrt 2, sqrt 3).
  const Extended th = theta;
  Extended lo = sqrt_ext(Extended(2)), hi = sqrt_ext(Extended(3));
  for (int i = 0; i < 200 && hi - lo > Extended(1e-30); ++i) {
    const Extended mid = (lo + hi) / 2;
    if (mid * mid * mid - 3 * mid < th) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const Extended g = (lo + hi) / 2;
  const Extended b = (-g + sqrt_ext(3 * (4 - g * g))) / 2;
  const Extended a = b + g;
  const Extended p1 = (1 + b * g) / ((b + 2 * g) * (2 * b + g));
  const Extended p2 = (2 - b * b) / ((g - b) * (2 * b + g));
  const Extended p3 = (g * g - 2) / ((g - b) * (b + 2 * g));
  DiscreteDistribution dist({{to_double(-a), to_double(p1)}, {to_double(b), to_double(p2)},
                             {to_double(g), to_double(p3)}},
                            "f3 theta " + std::to_string(theta));
  return SingularMember{std::move(dist), 3, true, FamilyTag::F3, theta};
}

SingularityReport is_singular(const DiscreteDistribution& dist, int k, double atom_tol,
                              double variance_tol) {
  check_order_range(k, 2, "is_singular");
  const MomentSet ms = central_moments(dist, 2 * k);
  SingularityReport r;
  r.k = k;
  const Extended sigma_k = ipow(sqrt_ext(ms.at(2)), k);
  const Extended kk = k;
  Extended worst = 0;
  for (const auto& a : dist.atoms()) {
    const Extended u = Extended(a.x) - ms.mean_ext();
    const Extended lhs = ipow(u, k);
    const Extended rhs = ms.at(k) + kk * ms.at(k - 1) * u;
    const Extended scale = std::max({abs(lhs), abs(rhs), sigma_k});
    worst = std::max(worst, Extended(abs(lhs - rhs) / scale));
  }
  r.max_atom_residual = to_double(worst);
  r.pointwise = r.max_atom_residual <= atom_tol;
  const Extended vk2 = vk_squared(ms, k);
  r.vk2 = to_double(vk2);
  r.vk2_threshold = variance_tol * to_double(sigma_k * sigma_k);
  r.variance_zero = r.vk2 <= r.vk2_threshold;
  r.singular = r.pointwise && r.variance_zero;
  return r;
}

std::vector<double> f3_theta_grid(int count) {
  if (count < 2) throw ValidationError("f3 theta grid needs at least two points");
  const double root2 = boost::math::double_constants::root_two;
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = -root2 + 2.0 * root2 * i / (count - 1);
  grid.back() = root2;
  return grid;
}

std::vector<SingularMember> catalog(int k, const std::vector<double>& theta_grid) {
  check_order_range(k, 2, "catalog");
  std::vector<SingularMember> out;
  if (k % 2 == 0) {
    out.push_back(build_classic_examples(FamilyTag::Rademacher, k));
    if (k >= 4) {
      out.push_back(build_two_valued(k, true));
      out.push_back(build_two_valued(k, false));
    }
    return out;
  }
  out.push_back(build_two_valued(k, true));
  out.push_back(build_two_valued(k, false));
  out.push_back(build_symmetric(k));
  if (k == 3) {
    for (double theta : theta_grid) out.push_back(build_f3(theta));
  }
  return out;
}

}  // namespace mal
