#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdsim/channel.hpp"

using namespace mdsim;

TEST_CASE("example channel taps") {
  CHECK(example_channel(0).taps()[0] == 1.0);

  auto h2 = example_channel(2);
  REQUIRE(h2.size() == 3);
  const double s14 = std::sqrt(14.0);
  CHECK(h2[0] == doctest::Approx(3 / s14).epsilon(1e-14));
  CHECK(h2[1] == doctest::Approx(2 / s14).epsilon(1e-14));
  CHECK(h2[2] == doctest::Approx(1 / s14).epsilon(1e-14));
  CHECK(h2[0] == doctest::Approx(0.80178).epsilon(1e-5));

  auto h5 = example_channel(5);
  const double s91 = std::sqrt(91.0);
  for (int k = 0; k <= 5; ++k) {
    CHECK(h5[static_cast<std::size_t>(k)] == doctest::Approx((6 - k) / s91).epsilon(1e-14));
  }
  CHECK_THROWS_AS(example_channel(-1), std::invalid_argument);
}

TEST_CASE("example channels are unit energy and minimum phase") {
  for (int L = 0; L <= 8; ++L) {
    auto h = example_channel(L);
    CHECK(std::abs(h.energy() - 1.0) <= 1e-12);
    CHECK(is_minimum_phase(h));
  }
}

TEST_CASE("tap validation") {
  CHECK_THROWS_AS(ChannelTaps({0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ChannelTaps({0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ChannelTaps(std::vector<double>{}), std::invalid_argument);
  CHECK_NOTHROW(ChannelTaps({0.6, 0.8}));
}

TEST_CASE("parse_channel") {
  auto p = parse_channel("example:2");
  CHECK(p.taps.memory() == 2);
  CHECK_FALSE(p.warning);

  p = parse_channel("3,2,1");
  CHECK(p.warning);
  CHECK(p.taps[0] == doctest::Approx(example_channel(2)[0]));

  p = parse_channel("0.6,0.8");
  CHECK_FALSE(p.warning);
  CHECK_THROWS_AS(parse_channel("example:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_channel("1,abc"), std::invalid_argument);
}

TEST_CASE("convolve") {
  auto identity = example_channel(0);
  std::vector<double> x{1.0, -3.0, 3.0};
  CHECK(convolve(x, identity, -3.0) == x);

  auto h2 = example_channel(2);
  auto r = convolve(std::vector<double>{3.0, -3.0, -3.0}, h2, -3.0);
  CHECK(r[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(3 * h2[1] - 3 * h2[0] - 3 * h2[2]));

  // Impulse above a constant -3 history, minus the constant baseline, gives 6 h.
  std::vector<double> base(8, -3.0), impulse(8, -3.0);
  impulse[2] = 3.0;
  auto rb = convolve(base, h2, -3.0);
  auto ri = convolve(impulse, h2, -3.0);
  for (int j = 0; j <= 2; ++j) {
    CHECK(ri[static_cast<std::size_t>(2 + j)] - rb[static_cast<std::size_t>(2 + j)] ==
          doctest::Approx(6 * h2[static_cast<std::size_t>(j)]));
  }
}

TEST_CASE("convolution is linear with matched histories") {
  auto h = example_channel(3);
  std::vector<double> a{1, -1, 3, 0.5, 2}, b{-2, 0, 1, 1, -1}, s(5);
  for (std::size_t i = 0; i < 5; ++i) s[i] = a[i] + b[i];
  auto ra = convolve(a, h, 1.0);
  auto rb = convolve(b, h, -3.0);
  auto rs = convolve(s, h, -2.0);
  for (std::size_t i = 0; i < 5; ++i) CHECK(rs[i] == doctest::Approx(ra[i] + rb[i]));
}

TEST_CASE("awgn") {
  std::vector<double> x(100, 1.0);
  CHECK(add_awgn(x, 0.0, 3) == x);
  CHECK(add_awgn(x, 0.3, 3) == add_awgn(x, 0.3, 3));
  CHECK(add_awgn(x, 0.3, 3) != add_awgn(x, 0.3, 4));

  std::vector<double> zeros(1'000'000, 0.0);
  auto n = add_awgn(zeros, 0.5, 11);
  double sum = 0.0, sq = 0.0;
  for (double v : n) {
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n.size();
  const double var = sq / n.size() - mean * mean;
  CHECK(std::abs(var - 0.25) < 0.0025);
  CHECK_THROWS_AS(add_awgn(x, -1.0, 1), std::invalid_argument);
}

TEST_CASE("minimum phase check") {
  CHECK(is_minimum_phase(ChannelTaps({1.0})));
  auto h2 = example_channel(2);
  CHECK(is_minimum_phase(h2));
  CHECK_FALSE(is_minimum_phase(ChannelTaps({h2[2], h2[1], h2[0]})));
  CHECK_FALSE(is_minimum_phase(ChannelTaps::normalized({1.0, 1.0})));  // zero on the unit circle
}
