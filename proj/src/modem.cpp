#include "mdsim/modem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mdsim {

Labeling parse_labeling(std::string_view token) {
  if (token == "natural") return Labeling::natural;
  if (token == "gray") return Labeling::gray;
  if (token == "qam4") return Labeling::qam4;
  throw std::invalid_argument("unknown labeling '" + std::string(token) + "'");
}

std::string_view to_string(Labeling labeling) {
  switch (labeling) {
    case Labeling::natural: return "natural";
    case Labeling::gray: return "gray";
    case Labeling::qam4: return "qam4";
  }
  return "?";
}

bool is_power_of_two(int m) { return m >= 2 && (m & (m - 1)) == 0; }

int log2_exact(int m) {
  if (!is_power_of_two(m)) {
    throw std::invalid_argument("alphabet size " + std::to_string(m) + " is not a power of two");
  }
  int n = 0;
  while ((1 << n) < m) ++n;
  return n;
}

Constellation::Constellation(int m) : m_(m), n_(log2_exact(m)) {
  levels_.reserve(static_cast<std::size_t>(m));
  double sum = 0.0;
  for (int c = 0; c < m; ++c) {
    levels_.push_back(level(c));
    sum += levels_.back() * levels_.back();
  }
  es_ = sum / m;
}

namespace {

void check_bits(std::span<const Bit> bits, int m) {
  if (static_cast<int>(bits.size()) != log2_exact(m)) {
    throw std::invalid_argument("bit pattern length must equal log2(M)");
  }
}

void require_m4(Labeling labeling, int m) {
  if (m != 4) {
    throw std::invalid_argument(std::string(to_string(labeling)) + " labeling is defined for M=4 only");
  }
}

}  // namespace

int label_index(std::span<const Bit> bits, Labeling labeling, int m) {
  check_bits(bits, m);
  switch (labeling) {
    case Labeling::natural: {
      int c = 0;
      for (Bit b : bits) c = (c << 1) | (b & 1);
      return c;
    }
    case Labeling::gray: {
      require_m4(labeling, m);
      const int msb = bits[0] & 1;
      const int lsb = bits[1] & 1;
      return (1 - msb) * (2 * msb + lsb) + msb * (2 * msb + (1 - lsb));
    }
    case Labeling::qam4:
      break;
  }
  throw std::invalid_argument("qam4 labeling has no real-valued symbol index");
}

BitVector unlabel_index(int c, Labeling labeling, int m) {
  const int n = log2_exact(m);
  if (c < 0 || c >= m) throw std::out_of_range("symbol index outside alphabet");
  BitVector bits(static_cast<std::size_t>(n));
  switch (labeling) {
    case Labeling::natural:
      for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = (c >> (n - 1 - i)) & 1;
      return bits;
    case Labeling::gray:
      require_m4(labeling, m);
      bits[0] = (c >> 1) & 1;
      bits[1] = static_cast<Bit>(((c >> 1) ^ c) & 1);
      return bits;
    case Labeling::qam4:
      break;
  }
  throw std::invalid_argument("qam4 labeling has no real-valued symbol index");
}

std::complex<double> map_symbol(std::span<const Bit> bits, Labeling labeling, int m) {
  if (labeling == Labeling::qam4) {
    require_m4(labeling, m);
    check_bits(bits, m);
    return {2.0 * bits[0] - 1.0, 2.0 * bits[1] - 1.0};
  }
  return {map_level(bits, labeling, m), 0.0};
}

double map_level(std::span<const Bit> bits, Labeling labeling, int m) {
  return 2.0 * label_index(bits, labeling, m) - (m - 1);
}

Bit mod2_via_floor(long long x) {
  if (x < 0) throw std::invalid_argument("mod2_via_floor expects a nonnegative argument");
  // Integer division floors for nonnegative operands.
  return static_cast<Bit>(x - 2 * (x / 2));
}

double noise_sigma(double ebn0_db, double es, int info_bits_per_symbol) {
  const double eb = es / info_bits_per_symbol;
  const double n0 = eb * std::pow(10.0, -ebn0_db / 10.0);
  return std::sqrt(n0 / 2.0);
}

}  // namespace mdsim
