#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdsim/channel.hpp"
#include "mdsim/convcode.hpp"
#include "mdsim/modem.hpp"
#include "mdsim/trellis.hpp"

namespace mdsim {

// Number of newest register bits kept as the hyperstate in MD-RSSE.
struct RssePartition {
  int retained_bits = 0;

  std::uint32_t hyperstates() const { return std::uint32_t{1} << retained_bits; }
};

inline constexpr double kLlrClamp = 50.0;

// Per-step bit LLRs, ln(P(bit=0) / P(bit=1)), clamped to +-kLlrClamp.
struct BitLlrs {
  int bits_per_step = 0;
  std::vector<double> values;  // step-major

  std::size_t steps() const {
    return bits_per_step == 0 ? 0 : values.size() / static_cast<std::size_t>(bits_per_step);
  }
  double at(std::size_t step, int bit) const {
    return values[step * static_cast<std::size_t>(bits_per_step) + static_cast<std::size_t>(bit)];
  }
};

// Viterbi MLSE on any trellis carrying real hypotheses with branch metric
// (r - hyp)^2. Returns the input decided at each step. Terminated blocks are
// traced back from state 0, otherwise from the smallest end metric. Ties go
// to the smaller predecessor state index.
std::vector<std::uint32_t> viterbi_mlse(const Trellis& trellis, std::span<const double> observations,
                                        bool terminated);

// Reduced-state matched decoding. Hyperstate = the r newest register bits;
// the older bits come from each hyperstate's own survivor path.
BitVector md_rsse_decode(const Trellis& matched, RssePartition partition,
                         std::span<const double> observations, bool terminated);

// Decision-feedback sequence estimation over M^q_h states built on the first
// q_h + 1 taps; the remaining taps are cancelled with per-survivor decisions.
// Returns the decided symbol levels. The block is traced back from the
// all -(M-1) state when terminated.
std::vector<double> dfse_equalize(const ChannelTaps& taps, int m, int q_h,
                                  std::span<const double> observations, bool terminated = true);

// Log-domain forward-backward symbol posteriors on a channel trellis.
// Row k holds P(c[k] = c | r) for each symbol index c. When terminated, the
// path must end in the start state.
std::vector<std::vector<double>> bcjr_symbol_posteriors(const Trellis& channel_trellis,
                                                        std::span<const double> observations,
                                                        double sigma, bool terminated = true);

// Symbol posteriors marginalized to bit LLRs under the given labeling.
BitLlrs bcjr_equalize(const Trellis& channel_trellis, std::span<const double> observations,
                      double sigma, Labeling labeling = Labeling::natural, bool terminated = true);

BitLlrs symbol_posteriors_to_llrs(const std::vector<std::vector<double>>& posteriors,
                                  Labeling labeling, int m);

// Hamming-metric Viterbi on a code trellis; terminated traceback. Returns one
// decided input bit per step, tail included.
BitVector decode_code_hard(const Trellis& code_trellis, std::span<const BitVector> hard_bits);

// Viterbi minimizing the sum of llr_i over coded bits equal to 1; terminated.
BitVector decode_code_soft(const Trellis& code_trellis, const BitLlrs& llrs);

// Nearest level (ties to the smaller level), then the inverse labeling.
std::vector<BitVector> demap_hard(std::span<const double> symbols, Labeling labeling, int m);

// Nearest symbol index for a real value, ties to the smaller index.
int nearest_symbol_index(double value, int m);

}  // namespace mdsim
