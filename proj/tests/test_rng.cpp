#include <doctest.h>

#include <cmath>
#include <vector>

#include "shiftest/rng.hpp"

using shiftest::CounterRng;

TEST_SUITE("rng") {

TEST_CASE("philox known-answer vector") {
  // Reference vector for Philox 4x32-10 with zero key and zero counter.
  const auto blk = shiftest::detail::philox4x32_10(0, 0, 0);
  CHECK(blk.v[0] == 0x6627e8d5u);
  CHECK(blk.v[1] == 0xe169c58du);
  CHECK(blk.v[2] == 0xbc57ac4cu);
  CHECK(blk.v[3] == 0x9b00dbd8u);
}

TEST_CASE("streams are deterministic and distinct") {
  CounterRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool same_ab = true, same_ac = true, same_ad = true;
  for (int i = 0; i < 256; ++i) {
    const double va = a.next_uniform();
    same_ab &= (va == b.next_uniform());
    same_ac &= (va == c.next_uniform());
    same_ad &= (va == d.next_uniform());
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);
  CHECK_FALSE(same_ad);
}

TEST_CASE("uniform draws live in [0,1) with the right mean") {
  CounterRng rng(123, 0);
  double acc = 0.0;
  bool in_range = true;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_uniform();
    in_range &= (u >= 0.0 && u < 1.0);
    acc += u;
  }
  CHECK(in_range);
  // 5-sigma band around 1/2, sigma = 1/sqrt(12 n).
  CHECK(std::abs(acc / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

}  // TEST_SUITE
