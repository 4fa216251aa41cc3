#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cqed/g2_estimate.hpp"
#include "cqed/rng.hpp"

using namespace cqed;
using doctest::Approx;

TEST_CASE("grid and curve axes") {
  const auto g = uniform_grid(4.0, 5);
  CHECK(g == std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0});
  const auto c = make_curve(g, 2.0 * 3.141592653589793 * 1e6);
  CHECK(c.tau_ns[1] == Approx(1e9 / (2.0 * 3.141592653589793 * 1e6)));
  CHECK(std::isnan(c.g2[0]));
}

TEST_CASE("ratio of averages by hand") {
  G2Accumulator acc(2, 10);
  const double before[] = {0.5, 1.5, 1.0};
  const double after0[] = {0.2, 0.4, 0.6};
  const double after1[] = {1.0, 2.0, 3.0};
  for (int s = 0; s < 3; ++s) {
    acc.begin_sample(before[s]);
    acc.record(0, after0[s]);
    acc.record(1, after1[s]);
  }
  for (double n : {1.0, 2.0, 3.0}) acc.add_denominator(n);
  G2Curve c = make_curve({0.0, 1.0}, 1.0);
  acc.finish(c);
  const double den = 2.0 * 2.0;
  CHECK(c.g2[0] == Approx((0.5 * 0.2 + 1.5 * 0.4 + 1.0 * 0.6) / 3.0 / den));
  CHECK(c.g2[1] == Approx((0.5 * 1.0 + 1.5 * 2.0 + 1.0 * 3.0) / 3.0 / den));
  CHECK(c.n[0] == 3);
  CHECK(std::isnan(c.std_error[0]));  // a single batch has no spread estimate
  CHECK(acc.samples() == 3);
  CHECK(acc.denominator_count() == 3);
}

TEST_CASE("merge order does not change the estimate") {
  auto fill = [](std::uint64_t shard) {
    G2Accumulator acc(3, 7, shard);
    Rng rng = make_stream(99, shard);
    for (int s = 0; s < 100; ++s) {
      acc.begin_sample(uniform01(rng));
      for (std::size_t i = 0; i < 3; ++i) acc.record(i, uniform01(rng));
      acc.add_denominator(uniform01(rng));
    }
    return acc;
  };
  G2Accumulator forward(3, 7);
  G2Accumulator backward(3, 7);
  for (std::uint64_t s = 1; s <= 4; ++s) forward.merge(fill(s));
  for (std::uint64_t s = 4; s >= 1; --s) backward.merge(fill(s));
  G2Curve a = make_curve({0, 1, 2}, 1.0);
  G2Curve b = make_curve({0, 1, 2}, 1.0);
  forward.finish(a);
  backward.finish(b);
  CHECK(a.g2 == b.g2);
  CHECK(a.std_error == b.std_error);
  CHECK(forward.samples() == 400);
  CHECK_THROWS_AS(forward.merge(fill(1)), std::invalid_argument);
}

TEST_CASE("independent samples: jackknife error tracks the spread") {
  // n_before = 1, n_after ~ U(0, 2), denominator exactly 1: g2 = mean of uniforms
  G2Accumulator acc(1, 100);
  Rng rng(1);
  const int samples = 40000;
  for (int s = 0; s < samples; ++s) {
    acc.begin_sample(1.0);
    acc.record(0, 2.0 * uniform01(rng));
    acc.add_denominator(1.0);
  }
  G2Curve c = make_curve({0.0}, 1.0);
  acc.finish(c);
  const double sigma = std::sqrt(1.0 / 3.0 / samples);
  CHECK(c.std_error[0] == Approx(sigma).epsilon(0.15));
  CHECK(std::abs(c.g2[0] - 1.0) < 4.0 * sigma);
}
