#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdsim/modem.hpp"
#include "mdsim/trellis.hpp"

namespace mdsim {

enum class ReceiverKind { super_trellis, matched, matched_rsse, dfse_va, bcjr_va };

// Receiver token: std | md | md-rsse:<r> | dfse:<q_h>+va | bcjr+va
struct ReceiverSpec {
  ReceiverKind kind = ReceiverKind::matched;
  int param = 0;  // r for md-rsse, q_h for dfse

  static ReceiverSpec parse(std::string_view token);
  std::string label() const;
  bool operator==(const ReceiverSpec&) const = default;
};

struct StopRule {
  std::uint64_t min_bit_errors = 200;
  std::uint64_t max_bits = 20'000'000;
  // A point also needs this many bits before the error count can stop it.
  std::uint64_t min_bits = 0;
};

// Parses "start:step:stop" (inclusive) or a comma separated list of dB values.
std::vector<double> parse_ebn0_grid(std::string_view text);

struct SimConfig {
  std::string generators = "23,04";  // octal list, or "uncoded"
  std::string channel = "example:2";
  Labeling labeling = Labeling::natural;
  int m = 4;
  std::vector<ReceiverSpec> receivers{ReceiverSpec{}};
  std::vector<double> ebn0_db;
  int block_length = 10'000;  // information bits per block
  StopRule stop;
  std::uint64_t base_seed = 1;
  // Diagnostic: replaces the channel noise deviation. Receivers keep the
  // nominal deviation derived from Eb/N0.
  std::optional<double> sigma_override;
  // Once a receiver measures a BER below this value, its remaining (higher)
  // grid points are skipped. 0 disables.
  double stop_below_ber = 0.0;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::uint64_t state_budget = kDefaultStateBudget;

  void validate() const;
};

struct BerRecord {
  double ebn0_db = 0.0;
  std::string receiver;
  std::uint64_t states = 0;
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  double ber = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const BerRecord&) const = default;
};

struct SweepResult {
  std::vector<BerRecord> records;  // grid order, receivers in config order within a point

  std::vector<BerRecord> for_receiver(std::string_view label) const;
};

// Number of receiver states reported for a receiver on a given link.
std::uint64_t receiver_states(const ReceiverSpec& receiver, const SimConfig& cfg);

// One Monte-Carlo point for every configured receiver, all on the same
// (paired) blocks. stream selects the independent RNG stream of the point.
std::vector<BerRecord> run_ber_point(const SimConfig& cfg, double ebn0_db, std::uint64_t stream = 0);

SweepResult run_sweep(const SimConfig& cfg);

// Log-linear interpolation of log10(BER) over dB between the first pair of
// grid points bracketing target. Throws std::out_of_range if not bracketed.
double required_snr_at_ber(std::span<const BerRecord> records, double target);

void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::string& path);
SweepResult parse_csv(std::istream& in);

}  // namespace mdsim
