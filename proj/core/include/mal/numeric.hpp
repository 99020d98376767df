#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>

namespace mal {

// 113-bit significand. Moment identities for singular distributions cancel
// terms of size mu_{2k} down to ~0, which needs more than double precision
// once k >= 6.
using Extended = boost::multiprecision::cpp_bin_float_quad;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Extended& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// Neumaier's variant of Kahan summation.
template <typename T>
class CompensatedSum {
 public:
  void add(const T& x) {
    const T t = sum_ + x;
    if (abs_(sum_) >= abs_(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(const T& x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  static T abs_(const T& x) { return x < T(0) ? T(-x) : x; }
  T sum_{0};
  T comp_{0};
};

// Integer power by repeated squaring, usable with every arithmetic type here.
template <typename T>
T ipow(T base, int exponent) {
  T result(1);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

// Exact binomial coefficient; C(64, 32) still fits, the intermediate
// products do not, hence the big-integer accumulator.
inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace mal
