#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdsim {

using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;

// Rate-1/n feedforward convolutional code. polys[i][j] is the tap of output
// branch i at delay D^j; branch 0 is the MSB branch.
class GeneratorSet {
 public:
  GeneratorSet(std::vector<BitVector> polys);

  int n() const { return static_cast<int>(polys_.size()); }
  int memory() const { return nu_; }
  int inputs_per_step() const { return 1; }
  const std::vector<BitVector>& polys() const { return polys_; }
  const BitVector& poly(int i) const { return polys_.at(static_cast<std::size_t>(i)); }

  // Generator i as an octal string with the same alignment parse_generators uses.
  std::string octal(int i) const;

 private:
  std::vector<BitVector> polys_;
  int nu_ = 0;
};

// Parses octal generator strings such as {"23", "04"}. All polynomials are
// right-aligned to a common width and read MSB first, so the leading bit
// multiplies the current input. Only k_inputs == 1 is supported.
GeneratorSet parse_generators(std::span<const std::string> octal_strings, int k_inputs = 1);

// Convenience overload taking a comma separated list, e.g. "23,04".
GeneratorSet parse_generators(std::string_view comma_separated, int k_inputs = 1);

// Shift register contents, newest input first. Length equals the code memory.
struct EncoderState {
  BitVector bits;

  static EncoderState zero(int nu) { return EncoderState{BitVector(static_cast<std::size_t>(nu), 0)}; }
  bool is_zero() const;
  bool operator==(const EncoderState&) const = default;
};

struct EncoderStep {
  EncoderState next;
  BitVector out;  // n bits, poly 0 first
};

EncoderStep encode_step(const GeneratorSet& gen, const EncoderState& state, Bit u);

// Returns one row of n coded bits per step. With terminate, nu zero bits are
// appended so the encoder ends in the zero state.
std::vector<BitVector> encode_block(const GeneratorSet& gen, std::span<const Bit> info_bits,
                                    bool terminate);

// Encoder state packed as an integer: bit i holds the input delayed by i+1.
std::uint32_t pack_state(const EncoderState& state);
EncoderState unpack_state(std::uint32_t packed, int nu);

}  // namespace mdsim
