// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "kcg/bitstring.hpp"
#include "kcg/dyadic.hpp"
#include "kcg/errors.hpp"

namespace kcg {

// Online allocator of dyadic intervals. A request of size n is served with a
// string of length n whose interval is disjoint from everything granted
// before. Invariant: the free space is a union of intervals with pairwise
// distinct lengths, so the remaining measure has each free interval as one
// binary digit. A request fits iff some free interval is at least as big,
// which is exactly the Kraft condition sum 2^-n_i <= 1.
class KraftAllocator {
 public:
  KraftAllocator() { free_by_len_.emplace(0u, BitString()); }

  // Serves a request of size n, best fit: split the smallest free interval
  // that still fits, take its leftmost depth-n subinterval, and return the
  // right siblings along the path to the free pool.
  BitString allocate(std::uint32_t n) {
    if (n > BitString::kMaxBits) throw DepthExceeded("request too deep");
    auto it = free_by_len_.upper_bound(n);
    if (it == free_by_len_.begin()) throw KraftExceeded("free space has no interval that big");
    --it;
    BitString x = it->second;
    free_by_len_.erase(it);
    while (x.length() < n) {
      free_by_len_.emplace(x.length() + 1, x.append(true));
      x = x.append(false);
    }
    return x;
  }

  DyadicMeasure remaining() const {
    DyadicMeasure total = DyadicMeasure::zero();
    for (const auto& [len, s] : free_by_len_) total = total.plus(DyadicMeasure::pow2(-static_cast<int>(len)));
    return total;
  }

  // Free intervals, shallowest first.
  std::vector<BitString> free_intervals() const {
    std::vector<BitString> out;
    out.reserve(free_by_len_.size());
    for (const auto& [len, s] : free_by_len_) out.push_back(s);
    return out;
  }

 private:
  std::map<std::uint32_t, BitString> free_by_len_;
};

}  // namespace kcg
