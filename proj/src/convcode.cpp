#include "mdsim/convcode.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdsim {

GeneratorSet::GeneratorSet(std::vector<BitVector> polys) : polys_(std::move(polys)) {
  if (polys_.empty()) {
    throw std::invalid_argument("generator set must contain at least one polynomial");
  }
  nu_ = 0;
  for (const auto& p : polys_) {
    auto last = std::find(p.rbegin(), p.rend(), Bit{1});
    if (last == p.rend()) {
      throw std::invalid_argument("all-zero generator polynomial");
    }
    nu_ = std::max(nu_, static_cast<int>(std::distance(last, p.rend())) - 1);
  }
  for (auto& p : polys_) {
    p.resize(static_cast<std::size_t>(nu_) + 1, 0);
  }
}

std::string GeneratorSet::octal(int i) const {
  // Re-pad to a multiple of three bits, padding on the high-order (left) side.
  const BitVector& p = poly(i);
  std::size_t width = p.size();
  std::size_t padded = (width + 2) / 3 * 3;
  BitVector bits(padded - width, 0);
  bits.insert(bits.end(), p.begin(), p.end());
  std::string s;
  for (std::size_t k = 0; k < padded; k += 3) {
    s.push_back(static_cast<char>('0' + (bits[k] << 2 | bits[k + 1] << 1 | bits[k + 2])));
  }
  return s;
}

GeneratorSet parse_generators(std::span<const std::string> octal_strings, int k_inputs) {
  if (k_inputs != 1) {
    throw std::invalid_argument("unsupported code rate: only K=1 input per step is supported");
  }
  if (octal_strings.empty()) {
    throw std::invalid_argument("empty generator list");
  }
  std::vector<BitVector> raw;
  std::size_t width = 0;
  for (const auto& s : octal_strings) {
    if (s.empty()) {
      throw std::invalid_argument("empty generator string");
    }
    BitVector bits;
    for (char ch : s) {
      if (ch < '0' || ch > '7') {
        throw std::invalid_argument("non-octal character in generator '" + s + "'");
      }
      int d = ch - '0';
      bits.push_back(static_cast<Bit>((d >> 2) & 1));
      bits.push_back(static_cast<Bit>((d >> 1) & 1));
      bits.push_back(static_cast<Bit>(d & 1));
    }
    auto first_one = std::find(bits.begin(), bits.end(), Bit{1});
    if (first_one == bits.end()) {
      throw std::invalid_argument("all-zero generator polynomial '" + s + "'");
    }
    bits.erase(bits.begin(), first_one);
    width = std::max(width, bits.size());
    raw.push_back(std::move(bits));
  }
  for (auto& bits : raw) {
    bits.insert(bits.begin(), width - bits.size(), Bit{0});
  }
  return GeneratorSet(std::move(raw));
}

GeneratorSet parse_generators(std::string_view comma_separated, int k_inputs) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= comma_separated.size()) {
    auto pos = comma_separated.find(',', start);
    if (pos == std::string_view::npos) pos = comma_separated.size();
    std::string part(comma_separated.substr(start, pos - start));
    part.erase(std::remove_if(part.begin(), part.end(), [](char c) { return c == ' '; }), part.end());
    if (!part.empty()) parts.push_back(std::move(part));
    start = pos + 1;
  }
  return parse_generators(std::span<const std::string>(parts), k_inputs);
}

bool EncoderState::is_zero() const {
  return std::all_of(bits.begin(), bits.end(), [](Bit b) { return b == 0; });
}

EncoderStep encode_step(const GeneratorSet& gen, const EncoderState& state, Bit u) {
  const int nu = gen.memory();
  if (static_cast<int>(state.bits.size()) != nu) {
    throw std::invalid_argument("encoder state length does not match code memory");
  }
  EncoderStep step;
  step.out.resize(static_cast<std::size_t>(gen.n()));
  for (int i = 0; i < gen.n(); ++i) {
    const BitVector& g = gen.poly(i);
    Bit acc = g[0] & u;
    for (int j = 1; j <= nu; ++j) {
      acc ^= g[static_cast<std::size_t>(j)] & state.bits[static_cast<std::size_t>(j - 1)];
    }
    step.out[static_cast<std::size_t>(i)] = acc;
  }
  step.next.bits.resize(static_cast<std::size_t>(nu));
  if (nu > 0) {
    step.next.bits[0] = u;
    std::copy(state.bits.begin(), state.bits.end() - 1, step.next.bits.begin() + 1);
  }
  return step;
}

std::vector<BitVector> encode_block(const GeneratorSet& gen, std::span<const Bit> info_bits,
                                    bool terminate) {
  const std::size_t tail = terminate ? static_cast<std::size_t>(gen.memory()) : 0;
  std::vector<BitVector> out;
  out.reserve(info_bits.size() + tail);
  auto state = EncoderState::zero(gen.memory());
  auto push = [&](Bit u) {
    auto step = encode_step(gen, state, u);
    state = std::move(step.next);
    out.push_back(std::move(step.out));
  };
  for (Bit u : info_bits) push(u);
  for (std::size_t t = 0; t < tail; ++t) push(0);
  return out;
}

std::uint32_t pack_state(const EncoderState& state) {
  std::uint32_t packed = 0;
  for (std::size_t i = 0; i < state.bits.size(); ++i) {
    packed |= static_cast<std::uint32_t>(state.bits[i] & 1u) << i;
  }
  return packed;
}

EncoderState unpack_state(std::uint32_t packed, int nu) {
  EncoderState s = EncoderState::zero(nu);
  for (int i = 0; i < nu; ++i) s.bits[static_cast<std::size_t>(i)] = (packed >> i) & 1u;
  return s;
}

}  // namespace mdsim
