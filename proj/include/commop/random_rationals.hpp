#pragma once

#include <cstdint>
#include <random>

#include "commop/rational.hpp"

namespace commop {

/// Seeded generator of small random rationals for "for all parameters" checks.
class RationalGen {
 public:
  explicit RationalGen(std::uint64_t seed) : rng_(seed) {}

  Rational any(int max_num = 9, int max_den = 7) {
    std::uniform_int_distribution<long> num(-max_num, max_num);
    std::uniform_int_distribution<long> den(1, max_den);
    return Rational(num(rng_), den(rng_));
  }

  Rational nonzero(int max_num = 9, int max_den = 7) {
    for (;;) {
      Rational r = any(max_num, max_den);
      if (!r.is_zero()) return r;
    }
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace commop
