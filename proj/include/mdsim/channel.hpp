#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdsim {

// Real FIR impulse response h[0..L] with unit energy and h[0] != 0.
class ChannelTaps {
 public:
  // Throws unless sum h^2 == 1 within 1e-12 and h[0] != 0.
  explicit ChannelTaps(std::vector<double> h);

  // Scales h to unit energy first.
  static ChannelTaps normalized(std::vector<double> h);

  int memory() const { return static_cast<int>(h_.size()) - 1; }
  std::size_t size() const { return h_.size(); }
  double operator[](std::size_t j) const { return h_[j]; }
  std::span<const double> taps() const { return h_; }
  double sum() const;
  double energy() const;

 private:
  std::vector<double> h_;
};

// h[k] = (L - k + 1) / (L + 1), scaled to unit energy.
ChannelTaps example_channel(int memory);

struct ParsedChannel {
  ChannelTaps taps;
  std::optional<std::string> warning;
};

// Accepts "example:L" or a comma separated list of reals. Explicit lists are
// re-normalized; a warning is attached when the energy was off by more than 1e-6.
ParsedChannel parse_channel(std::string_view spec);

// r[k] = sum_j h[j] b[k-j], with b[m] = history for m < 0. Output length
// equals the input length.
std::vector<double> convolve(std::span<const double> symbols, const ChannelTaps& taps,
                             double history);

// Adds i.i.d. N(0, sigma^2) samples drawn from the given engine.
void add_awgn_inplace(std::span<double> r, double sigma, std::mt19937_64& rng);

// Deterministic given the seed.
std::vector<double> add_awgn(std::span<const double> r, double sigma, std::uint64_t seed);

// True iff every zero of sum_j h[j] z^(L-j) lies strictly inside the unit circle.
bool is_minimum_phase(const ChannelTaps& taps);

}  // namespace mdsim
