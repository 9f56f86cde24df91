#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdsim/modem.hpp"

using namespace mdsim;

TEST_CASE("natural mapping") {
  CHECK(map_level(BitVector{0, 0}, Labeling::natural, 4) == -3.0);
  CHECK(map_level(BitVector{0, 1}, Labeling::natural, 4) == -1.0);
  CHECK(map_level(BitVector{1, 0}, Labeling::natural, 4) == 1.0);
  CHECK(map_level(BitVector{1, 1}, Labeling::natural, 4) == 3.0);
  CHECK(map_level(BitVector{1, 1, 1}, Labeling::natural, 8) == 7.0);
  CHECK(map_level(BitVector{0}, Labeling::natural, 2) == -1.0);
}

TEST_CASE("gray mapping follows the closed form") {
  CHECK(label_index(BitVector{0, 0}, Labeling::gray, 4) == 0);
  CHECK(label_index(BitVector{0, 1}, Labeling::gray, 4) == 1);
  CHECK(label_index(BitVector{1, 0}, Labeling::gray, 4) == 3);
  CHECK(label_index(BitVector{1, 1}, Labeling::gray, 4) == 2);
  CHECK(map_level(BitVector{1, 0}, Labeling::gray, 4) == 3.0);
}

TEST_CASE("qam4 mapping") {
  CHECK(map_symbol(BitVector{1, 0}, Labeling::qam4, 4) == std::complex<double>(1.0, -1.0));
  CHECK(map_symbol(BitVector{0, 1}, Labeling::qam4, 4) == std::complex<double>(-1.0, 1.0));
  CHECK_THROWS_AS(map_level(BitVector{1, 0}, Labeling::qam4, 4), std::invalid_argument);
}

TEST_CASE("mapping errors") {
  CHECK_THROWS_AS(map_symbol(BitVector{1, 0}, Labeling::natural, 3), std::invalid_argument);
  CHECK_THROWS_AS(map_symbol(BitVector{1, 0, 0}, Labeling::gray, 8), std::invalid_argument);
  CHECK_THROWS_AS(map_symbol(BitVector{1, 0, 0}, Labeling::qam4, 8), std::invalid_argument);
  CHECK_THROWS_AS(map_symbol(BitVector{1}, Labeling::natural, 4), std::invalid_argument);
}

TEST_CASE("labelings are bijections for M=4") {
  for (auto lab : {Labeling::natural, Labeling::gray}) {
    for (int c = 0; c < 4; ++c) {
      CHECK(label_index(unlabel_index(c, lab, 4), lab, 4) == c);
    }
  }
}

TEST_CASE("constellation energy") {
  for (int m : {2, 4, 8, 16}) {
    Constellation a(m);
    CHECK(a.mean_energy() == doctest::Approx((m * m - 1) / 3.0));
    for (int c = 1; c < m; ++c) CHECK(a.level(c) - a.level(c - 1) == 2.0);
    CHECK(a.level(0) == -a.level(m - 1));
  }
  CHECK(Constellation(4).mean_energy() == 5.0);
}

TEST_CASE("mod2_via_floor") {
  CHECK(mod2_via_floor(0) == 0);
  CHECK(mod2_via_floor(3) == 1);
  for (long long x = 0; x <= 10'000; ++x) REQUIRE(mod2_via_floor(x) == x % 2);
  CHECK_THROWS_AS(mod2_via_floor(-1), std::invalid_argument);
}

TEST_CASE("noise_sigma") {
  CHECK(noise_sigma(10.0, 5.0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(noise_sigma(0.0, 1.0, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  // 10 log10(2) dB; Eb = 1, N0 = 0.5.
  CHECK(noise_sigma(10.0 * std::log10(2.0), 2.0, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(noise_sigma(3.0103, 2.0, 2) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("labeling tokens") {
  CHECK(parse_labeling("gray") == Labeling::gray);
  CHECK(to_string(Labeling::qam4) == "qam4");
  CHECK_THROWS_AS(parse_labeling("ungerboeck"), std::invalid_argument);
}
