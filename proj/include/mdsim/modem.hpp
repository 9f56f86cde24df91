#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mdsim/convcode.hpp"

namespace mdsim {

enum class Labeling { natural, gray, qam4 };

Labeling parse_labeling(std::string_view token);
std::string_view to_string(Labeling labeling);

// Bipolar M-ASK alphabet {-(M-1), ..., -1, +1, ..., +(M-1)}.
class Constellation {
 public:
  explicit Constellation(int m);

  int size() const { return m_; }
  int bits_per_symbol() const { return n_; }
  double level(int index) const { return 2.0 * index - (m_ - 1); }
  const std::vector<double>& levels() const { return levels_; }
  double mean_energy() const { return es_; }

 private:
  int m_;
  int n_;
  std::vector<double> levels_;
  double es_;
};

bool is_power_of_two(int m);
int log2_exact(int m);

// Unipolar symbol index c in [0, M) for an n-bit pattern, MSB first.
// Only natural and gray are valid here.
int label_index(std::span<const Bit> bits, Labeling labeling, int m);

// Inverse of label_index.
BitVector unlabel_index(int c, Labeling labeling, int m);

// Maps n bits (MSB first) to a symbol. ASK labelings give a real value
// b = 2c - (M-1); qam4 gives (2 MSB - 1) + j (2 LSB - 1).
std::complex<double> map_symbol(std::span<const Bit> bits, Labeling labeling, int m);

// Real-valued mapping for the ASK chain; rejects qam4.
double map_level(std::span<const Bit> bits, Labeling labeling, int m);

// x mod 2 written as x - 2 floor(x / 2).
Bit mod2_via_floor(long long x);

// Noise standard deviation per real sample for a given Eb/N0, with
// Eb = es / info_bits_per_symbol and sigma^2 = N0 / 2.
double noise_sigma(double ebn0_db, double es, int info_bits_per_symbol);

}  // namespace mdsim
