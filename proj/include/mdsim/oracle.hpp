#pragma once

// Brute-force reference computations. Everything here goes through the plain
// encode -> map -> convolve chain and never touches a trellis, so it can be
// used to check the trellis-based receivers.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mdsim/channel.hpp"
#include "mdsim/convcode.hpp"
#include "mdsim/detect.hpp"
#include "mdsim/modem.hpp"

namespace mdsim::oracle {

// Noiseless channel output for an input bit sequence sent from the zero state.
std::vector<double> transmit(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                             std::span<const Bit> input);

// Channel output expected on the matched-trellis branch leaving `register_bits`
// (bit t = input delayed by t+1) with input u.
double matched_branch_output(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                             std::uint32_t register_bits, Bit u);

// Minimum squared distance over all 2^info_bits inputs, each followed by
// nu+L zeros. Returns the full input (tail included).
BitVector exhaustive_mlse(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                          std::span<const double> observations, int info_bits);

// Minimum squared distance over all M^N symbol index sequences; when
// terminated the last L indices are forced to zero.
std::vector<int> exhaustive_channel_mlse(const ChannelTaps& taps, int m, std::span<const double> observations,
                                         bool terminated);

// Minimum Hamming distance codeword over all 2^info_bits inputs followed by nu zeros.
BitVector exhaustive_hard_decode(const GeneratorSet& gen, std::span<const BitVector> received, int info_bits);

// Minimum sum of llr over coded ones, same candidate set as above.
BitVector exhaustive_soft_decode(const GeneratorSet& gen, const BitLlrs& llrs, int info_bits);

// Symbol posteriors by enumeration of all M^N sequences.
std::vector<std::vector<double>> exhaustive_symbol_posteriors(const ChannelTaps& taps, int m,
                                                              std::span<const double> observations,
                                                              double sigma, bool terminated);

// Closed-form BER of uncoded M-ASK on AWGN with nearest-level decisions,
// counting the Hamming distance between transmitted and decided labels.
double uncoded_ask_ber(double ebn0_db, int m, Labeling labeling);

// Randomized oracle-equivalence checks; prints one line per check and
// returns true if all pass.
bool run_verification_suite(std::uint64_t seed, int trials, std::ostream& log);

}  // namespace mdsim::oracle
