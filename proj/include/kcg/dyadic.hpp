// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <compare>
#include <string>

#include "kcg/errors.hpp"

namespace kcg {

// Exact dyadic rational num / 2^exp, canonical: num is odd, or num == 0 and
// exp == 0. All arithmetic is integer arithmetic; there is no floating point
// anywhere in the library. Wide intermediates go through unsigned __int128.
class DyadicMeasure {
 public:
  constexpr DyadicMeasure() = default;  // zero

  static constexpr DyadicMeasure from_parts(std::uint64_t num, std::uint32_t exp) {
    DyadicMeasure d;
    d.num_ = num;
    d.exp_ = exp;
    d.normalize();
    return d;
  }

  static constexpr DyadicMeasure zero() { return {}; }
  static constexpr DyadicMeasure one() { return from_parts(1, 0); }

  // 2^k for k <= 0, i.e. pow2(-n) is the weight of one length-n string.
  static constexpr DyadicMeasure pow2(std::int64_t k) {
    if (k > 62 || k < -62) throw Error("dyadic exponent out of range");
    if (k >= 0) return from_parts(std::uint64_t{1} << k, 0);
    return from_parts(1, static_cast<std::uint32_t>(-k));
  }

  constexpr std::uint64_t num() const { return num_; }
  constexpr std::uint32_t exp() const { return exp_; }
  constexpr bool is_zero() const { return num_ == 0; }

  constexpr DyadicMeasure plus(const DyadicMeasure& o) const {
    std::uint32_t e = exp_ > o.exp_ ? exp_ : o.exp_;
    unsigned __int128 a = static_cast<unsigned __int128>(num_) << (e - exp_);
    unsigned __int128 b = static_cast<unsigned __int128>(o.num_) << (e - o.exp_);
    return from_wide(a + b, e);
  }

  constexpr DyadicMeasure minus(const DyadicMeasure& o) const {
    std::uint32_t e = exp_ > o.exp_ ? exp_ : o.exp_;
    unsigned __int128 a = static_cast<unsigned __int128>(num_) << (e - exp_);
    unsigned __int128 b = static_cast<unsigned __int128>(o.num_) << (e - o.exp_);
    if (b > a) throw Error("dyadic subtraction would go negative");
    return from_wide(a - b, e);
  }

  constexpr DyadicMeasure scaled(std::uint64_t n) const {
    return from_wide(static_cast<unsigned __int128>(num_) * n, exp_);
  }

  // Multiply by 2^k (k may be negative).
  constexpr DyadicMeasure times_pow2(std::int64_t k) const {
    if (num_ == 0) return {};
    if (k >= 0) return from_wide(static_cast<unsigned __int128>(num_) << k, exp_);
    return from_parts(num_, exp_ + static_cast<std::uint32_t>(-k));
  }

  friend constexpr std::strong_ordering operator<=>(const DyadicMeasure& a,
                                                    const DyadicMeasure& b) {
    std::uint32_t e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
    unsigned __int128 wa = static_cast<unsigned __int128>(a.num_) << (e - a.exp_);
    unsigned __int128 wb = static_cast<unsigned __int128>(b.num_) << (e - b.exp_);
    if (wa < wb) return std::strong_ordering::less;
    if (wa > wb) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend constexpr bool operator==(const DyadicMeasure& a, const DyadicMeasure& b) {
    return (a <=> b) == 0;
  }

  std::string str() const {
    if (num_ == 0) return "0";
    if (exp_ == 0) return std::to_string(num_);
    return std::to_string(num_) + "/2^" + std::to_string(exp_);
  }

 private:
  constexpr void normalize() {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    while ((num_ & 1u) == 0 && exp_ > 0) {
      num_ >>= 1;
      --exp_;
    }
  }

  static constexpr DyadicMeasure from_wide(unsigned __int128 num, std::uint32_t exp) {
    if (num == 0) return {};
    while ((num & 1u) == 0 && exp > 0) {
      num >>= 1;
      --exp;
    }
    if (num > ~std::uint64_t{0}) throw Error("dyadic numerator overflow");
    DyadicMeasure d;
    d.num_ = static_cast<std::uint64_t>(num);
    d.exp_ = exp;
    return d;
  }

  std::uint64_t num_ = 0;
  std::uint32_t exp_ = 0;
};

// Small exact rational, used for thresholds like 1/3 that are not dyadic.
// Comparisons against DyadicMeasure cross-multiply in 128-bit arithmetic.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
    if (d == 0) throw Error("rational with zero denominator");
  }

  friend constexpr bool operator==(const Rational& a, const Rational& b) {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// d <<>> r comparisons: d = n/2^e vs r = p/q  <=>  n*q vs p*2^e.
constexpr std::strong_ordering compare(const DyadicMeasure& d, const Rational& r) {
  unsigned __int128 lhs = static_cast<unsigned __int128>(d.num()) * r.den;
  unsigned __int128 rhs = static_cast<unsigned __int128>(r.num) << d.exp();
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

constexpr bool operator<(const DyadicMeasure& d, const Rational& r) {
  return compare(d, r) < 0;
}
constexpr bool operator>=(const DyadicMeasure& d, const Rational& r) {
  return compare(d, r) >= 0;
}

}  // namespace kcg
