#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>

#include "mdsim/convcode.hpp"

using namespace mdsim;

namespace {

GeneratorSet gen(std::string_view s) { return parse_generators(s); }

}  // namespace

TEST_CASE("parse_generators reads octal MSB first") {
  auto g = gen("5,7");
  CHECK(g.n() == 2);
  CHECK(g.memory() == 2);
  CHECK(g.poly(0) == BitVector{1, 0, 1});
  CHECK(g.poly(1) == BitVector{1, 1, 1});

  g = gen("23,04");
  CHECK(g.memory() == 4);
  CHECK(g.poly(0) == BitVector{1, 0, 0, 1, 1});
  CHECK(g.poly(1) == BitVector{0, 0, 1, 0, 0});
  CHECK(g.octal(0) == "23");
  CHECK(g.octal(1) == "04");

  g = gen("1,1");
  CHECK(g.memory() == 0);
  CHECK(g.poly(0) == BitVector{1});

  g = gen("103,024");
  CHECK(g.memory() == 6);
  CHECK(g.poly(1) == BitVector{0, 0, 1, 0, 1, 0, 0});
}

TEST_CASE("parse_generators rejects bad input") {
  CHECK_THROWS_AS(parse_generators(std::vector<std::string>{}), std::invalid_argument);
  CHECK_THROWS_AS(gen("5,8"), std::invalid_argument);
  CHECK_THROWS_AS(gen("5,x"), std::invalid_argument);
  CHECK_THROWS_AS(gen("5,0"), std::invalid_argument);
  CHECK_THROWS_AS(gen("5,00"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generators(std::string_view("5,7"), 2), std::invalid_argument);
}

TEST_CASE("memory is tight when every polynomial ends in zero taps") {
  // 6 = 110, 4 = 100: no tap at delay 2, so the code has memory 1.
  auto g = gen("6,4");
  CHECK(g.memory() == 1);
  CHECK(g.poly(0) == BitVector{1, 1});
  CHECK(g.poly(1) == BitVector{1, 0});
}

TEST_CASE("encode_step on [5,7]") {
  auto g = gen("5,7");
  auto s = encode_step(g, EncoderState{{0, 0}}, 1);
  CHECK(s.out == BitVector{1, 1});
  CHECK(s.next.bits == BitVector{1, 0});

  s = encode_step(g, EncoderState{{1, 0}}, 0);
  CHECK(s.out == BitVector{0, 1});
  CHECK(s.next.bits == BitVector{0, 1});

  CHECK_THROWS_AS(encode_step(g, EncoderState{{0}}, 1), std::invalid_argument);
}

TEST_CASE("encode_block framing") {
  auto g = gen("5,7");
  const BitVector info{1, 0, 0};
  auto out = encode_block(g, info, false);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == BitVector{1, 1});
  CHECK(out[1] == BitVector{0, 1});
  CHECK(out[2] == BitVector{1, 1});

  out = encode_block(g, BitVector{}, true);
  REQUIRE(out.size() == 2);
  CHECK(out[0] == BitVector{0, 0});
  CHECK(out[1] == BitVector{0, 0});

  CHECK(encode_block(gen("23,04"), BitVector(100, 1), true).size() == 104);
}

TEST_CASE("impulse response equals the generator taps") {
  for (auto text : {"5,7", "23,04", "103,024"}) {
    auto g = gen(text);
    BitVector impulse(static_cast<std::size_t>(g.memory()) + 1, 0);
    impulse[0] = 1;
    auto out = encode_block(g, impulse, false);
    for (int i = 0; i < g.n(); ++i) {
      for (int j = 0; j <= g.memory(); ++j) {
        CHECK(out[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] ==
              g.poly(i)[static_cast<std::size_t>(j)]);
      }
    }
  }
}

TEST_CASE("encoding is linear over GF(2) and terminates in zero state") {
  std::mt19937_64 rng(7);
  auto g = gen("23,04");
  for (int trial = 0; trial < 50; ++trial) {
    BitVector a(40), b(40), x(40);
    for (std::size_t i = 0; i < 40; ++i) {
      a[i] = rng() & 1u;
      b[i] = rng() & 1u;
      x[i] = a[i] ^ b[i];
    }
    auto ca = encode_block(g, a, true);
    auto cb = encode_block(g, b, true);
    auto cx = encode_block(g, x, true);
    for (std::size_t k = 0; k < cx.size(); ++k) {
      for (std::size_t i = 0; i < 2; ++i) CHECK(cx[k][i] == (ca[k][i] ^ cb[k][i]));
    }
    auto state = EncoderState::zero(g.memory());
    for (Bit u : a) state = encode_step(g, state, u).next;
    for (int t = 0; t < g.memory(); ++t) state = encode_step(g, state, 0).next;
    CHECK(state.is_zero());
  }
}

TEST_CASE("packed state round trip") {
  auto s = EncoderState{{1, 0, 1, 1}};
  CHECK(pack_state(s) == 0b1101u);
  CHECK(unpack_state(pack_state(s), 4) == s);
}
