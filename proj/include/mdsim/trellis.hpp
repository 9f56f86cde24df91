#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdsim/channel.hpp"
#include "mdsim/convcode.hpp"
#include "mdsim/modem.hpp"

namespace mdsim {

// Thrown when a trellis would exceed the configured state budget.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::uint64_t kDefaultStateBudget = std::uint64_t{1} << 20;

enum class TrellisKind { code, channel, super, matched };

std::string_view to_string(TrellisKind kind);

// Immutable state-transition table. Each branch (state, input) carries either
// a real channel-output hypothesis or, for code trellises, the packed coded
// bits (output 0 in the most significant position).
//
// Shift-register trellises (code, channel, matched) index states so that the
// newest register element sits in the least significant digit:
//   next = (state * base + input) mod base^length
// which makes keeping the r newest elements a single modulo.
class Trellis {
 public:
  struct Tables {
    TrellisKind kind = TrellisKind::code;
    std::uint32_t num_states = 0;
    std::uint32_t inputs_per_state = 0;
    std::uint32_t start_state = 0;
    std::vector<std::uint32_t> next;
    std::vector<double> hypothesis;      // empty for code trellises
    std::vector<std::uint32_t> label;    // empty unless kind == code
    int label_bits = 0;
    int register_base = 2;               // digit base of the state register
    int register_length = 0;             // digits in the state register
    int alphabet_size = 2;
    Labeling labeling = Labeling::natural;
  };

  explicit Trellis(Tables tables);

  TrellisKind kind() const { return t_.kind; }
  std::uint32_t num_states() const { return t_.num_states; }
  std::uint32_t inputs_per_state() const { return t_.inputs_per_state; }
  std::uint32_t start_state() const { return t_.start_state; }
  bool has_hypotheses() const { return !t_.hypothesis.empty(); }
  int label_bits() const { return t_.label_bits; }
  int register_base() const { return t_.register_base; }
  int register_length() const { return t_.register_length; }
  int alphabet_size() const { return t_.alphabet_size; }
  Labeling labeling() const { return t_.labeling; }

  std::uint32_t next(std::uint32_t state, std::uint32_t input) const {
    return t_.next[state * t_.inputs_per_state + input];
  }
  double hypothesis(std::uint32_t state, std::uint32_t input) const {
    return t_.hypothesis[state * t_.inputs_per_state + input];
  }
  std::uint32_t label(std::uint32_t state, std::uint32_t input) const {
    return t_.label[state * t_.inputs_per_state + input];
  }

  // Flat row-major views (state-major, input-minor) for hot loops.
  const std::vector<std::uint32_t>& next_table() const { return t_.next; }
  const std::vector<double>& hypothesis_table() const { return t_.hypothesis; }

 private:
  Tables t_;
};

Trellis build_code_trellis(const GeneratorSet& gen);

// M^L states indexed by the last L symbol indices; inputs are symbol indices c
// with level 2c - (M-1). The start state is the all -(M-1) history.
Trellis build_channel_trellis(const ChannelTaps& taps, int m,
                              std::uint64_t state_budget = kDefaultStateBudget);

// Joint encoder x channel trellis. State = encoder_state + 2^nu * channel_state.
Trellis build_super_trellis(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                            std::uint64_t state_budget = kDefaultStateBudget);

// Binary non-linear trellis over the nu+L most recent input bits.
Trellis build_matched_trellis(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                              std::uint64_t state_budget = kDefaultStateBudget);

// Output offset C = -(M-1) sum_j h[j] of the matched encoder.
double matched_offset(const ChannelTaps& taps, int m);

struct ComplexityReport {
  std::uint64_t z_enc = 0;
  std::uint64_t z_equ = 0;
  std::uint64_t z_separate = 0;
  std::uint64_t z_std = 0;
  std::uint64_t z_md = 0;
  std::uint64_t gain_md = 0;
};

ComplexityReport complexity_report(int nu, int channel_memory, int m);
ComplexityReport complexity_report(const GeneratorSet& gen, const ChannelTaps& taps, int m);

}  // namespace mdsim
