#include "mdsim/detect.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "viterbi_core.hpp"

namespace mdsim {

std::vector<std::uint32_t> viterbi_mlse(const Trellis& trellis, std::span<const double> observations,
                                        bool terminated) {
  if (!trellis.has_hypotheses()) {
    throw std::invalid_argument("viterbi_mlse needs a trellis with real hypotheses");
  }
  const auto& hyp = trellis.hypothesis_table();
  const std::uint32_t inputs = trellis.inputs_per_state();
  return detail::trellis_viterbi(
      trellis, observations.size(),
      [&](std::size_t k, std::uint32_t s, std::uint32_t u) {
        const double e = observations[k] - hyp[std::size_t{s} * inputs + u];
        return e * e;
      },
      terminated);
}

BitVector md_rsse_decode(const Trellis& matched, RssePartition partition,
                         std::span<const double> observations, bool terminated) {
  if (matched.kind() != TrellisKind::matched) {
    throw std::invalid_argument("md_rsse_decode needs a matched trellis");
  }
  const int reg = matched.register_length();
  if (partition.retained_bits < 1 || partition.retained_bits > reg) {
    throw std::invalid_argument("MD-RSSE retained bits must lie in [1, " + std::to_string(reg) + "]");
  }
  const auto& hyp = matched.hypothesis_table();
  auto decided = detail::survivor_viterbi(
      2, reg, partition.retained_bits, observations.data(), observations.size(),
      [&](std::uint64_t full, std::uint32_t u) { return hyp[full * 2 + u]; }, terminated);
  return BitVector(decided.begin(), decided.end());
}

std::vector<double> dfse_equalize(const ChannelTaps& taps, int m, int q_h,
                                  std::span<const double> observations, bool terminated) {
  const Constellation alphabet(m);
  const int memory = taps.memory();
  if (q_h < 0 || q_h > memory) {
    throw std::invalid_argument("DFSE trellis taps q_h must lie in [0, L]");
  }
  if (memory * alphabet.bits_per_symbol() > 48) {
    throw CapacityError("DFSE survivor register too long");
  }
  const auto mu = static_cast<std::uint64_t>(m);
  const auto levels = alphabet.levels();
  auto decided = detail::survivor_viterbi(
      static_cast<std::uint32_t>(m), memory, q_h, observations.data(), observations.size(),
      [&](std::uint64_t full, std::uint32_t c) {
        double acc = taps[0] * levels[c];
        for (int j = 1; j <= memory; ++j) {
          acc += taps[static_cast<std::size_t>(j)] * levels[full % mu];
          full /= mu;
        }
        return acc;
      },
      terminated);
  std::vector<double> out(decided.size());
  std::transform(decided.begin(), decided.end(), out.begin(),
                 [&](std::uint32_t c) { return alphabet.level(static_cast<int>(c)); });
  return out;
}

namespace {

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

std::vector<std::vector<double>> bcjr_symbol_posteriors(const Trellis& channel_trellis,
                                                        std::span<const double> observations,
                                                        double sigma, bool terminated) {
  if (!(sigma > 0.0)) throw std::invalid_argument("BCJR needs a positive noise deviation");
  if (channel_trellis.kind() != TrellisKind::channel) {
    throw std::invalid_argument("BCJR equalization needs a channel trellis");
  }
  const std::size_t steps = observations.size();
  if (steps == 0) throw std::invalid_argument("empty observation sequence");
  const std::uint32_t states = channel_trellis.num_states();
  const std::uint32_t inputs = channel_trellis.inputs_per_state();
  const auto& next = channel_trellis.next_table();
  const auto& hyp = channel_trellis.hypothesis_table();
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);

  auto gamma = [&](std::size_t k, std::size_t branch) {
    const double e = observations[k] - hyp[branch];
    return -e * e * inv_two_var;
  };

  // alpha[k] is the state log-probability before step k; normalized per step.
  std::vector<double> alpha((steps + 1) * states, -INFINITY);
  alpha[channel_trellis.start_state()] = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double* a = alpha.data() + k * states;
    double* an = alpha.data() + (k + 1) * states;
    for (std::uint32_t s = 0; s < states; ++s) {
      if (a[s] == -INFINITY) continue;
      for (std::uint32_t c = 0; c < inputs; ++c) {
        const std::size_t b = std::size_t{s} * inputs + c;
        an[next[b]] = log_add(an[next[b]], a[s] + gamma(k, b));
      }
    }
    const double norm = *std::max_element(an, an + states);
    for (std::uint32_t s = 0; s < states; ++s) an[s] -= norm;
  }

  std::vector<double> beta(states, terminated ? -INFINITY : 0.0), beta_prev(states);
  if (terminated) beta[channel_trellis.start_state()] = 0.0;

  std::vector<std::vector<double>> post(steps, std::vector<double>(inputs, -INFINITY));
  for (std::size_t k = steps; k-- > 0;) {
    const double* a = alpha.data() + k * states;
    std::fill(beta_prev.begin(), beta_prev.end(), -INFINITY);
    auto& pk = post[k];
    for (std::uint32_t s = 0; s < states; ++s) {
      for (std::uint32_t c = 0; c < inputs; ++c) {
        const std::size_t b = std::size_t{s} * inputs + c;
        const double tail = gamma(k, b) + beta[next[b]];
        beta_prev[s] = log_add(beta_prev[s], tail);
        if (a[s] != -INFINITY) pk[c] = log_add(pk[c], a[s] + tail);
      }
    }
    double total = -INFINITY;
    for (double v : pk) total = log_add(total, v);
    for (double& v : pk) v = std::exp(v - total);
    const double norm = *std::max_element(beta_prev.begin(), beta_prev.end());
    for (auto& v : beta_prev) v -= norm;
    beta.swap(beta_prev);
  }
  return post;
}

BitLlrs symbol_posteriors_to_llrs(const std::vector<std::vector<double>>& posteriors,
                                  Labeling labeling, int m) {
  const int n = log2_exact(m);
  std::vector<BitVector> patterns;
  for (int c = 0; c < m; ++c) patterns.push_back(unlabel_index(c, labeling, m));
  BitLlrs llrs;
  llrs.bits_per_step = n;
  llrs.values.reserve(posteriors.size() * static_cast<std::size_t>(n));
  for (const auto& p : posteriors) {
    for (int i = 0; i < n; ++i) {
      double p0 = 0.0, p1 = 0.0;
      for (int c = 0; c < m; ++c) {
        (patterns[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] ? p1 : p0) +=
            p[static_cast<std::size_t>(c)];
      }
      double llr;
      if (p1 <= 0.0) {
        llr = kLlrClamp;
      } else if (p0 <= 0.0) {
        llr = -kLlrClamp;
      } else {
        llr = std::clamp(std::log(p0) - std::log(p1), -kLlrClamp, kLlrClamp);
      }
      llrs.values.push_back(llr);
    }
  }
  return llrs;
}

BitLlrs bcjr_equalize(const Trellis& channel_trellis, std::span<const double> observations,
                      double sigma, Labeling labeling, bool terminated) {
  return symbol_posteriors_to_llrs(
      bcjr_symbol_posteriors(channel_trellis, observations, sigma, terminated), labeling,
      channel_trellis.alphabet_size());
}

BitVector decode_code_hard(const Trellis& code_trellis, std::span<const BitVector> hard_bits) {
  if (code_trellis.kind() != TrellisKind::code) {
    throw std::invalid_argument("hard decoding needs a code trellis");
  }
  const int n = code_trellis.label_bits();
  std::vector<std::uint32_t> received(hard_bits.size());
  for (std::size_t k = 0; k < hard_bits.size(); ++k) {
    if (static_cast<int>(hard_bits[k].size()) != n) {
      throw std::invalid_argument("hard bit row length does not match code outputs");
    }
    std::uint32_t w = 0;
    for (Bit b : hard_bits[k]) w = (w << 1) | (b & 1u);
    received[k] = w;
  }
  auto decided = detail::trellis_viterbi(
      code_trellis, received.size(),
      [&](std::size_t k, std::uint32_t s, std::uint32_t u) {
        return static_cast<double>(std::popcount(code_trellis.label(s, u) ^ received[k]));
      },
      true);
  return BitVector(decided.begin(), decided.end());
}

BitVector decode_code_soft(const Trellis& code_trellis, const BitLlrs& llrs) {
  if (code_trellis.kind() != TrellisKind::code) {
    throw std::invalid_argument("soft decoding needs a code trellis");
  }
  const int n = code_trellis.label_bits();
  if (llrs.bits_per_step != n || llrs.values.size() % static_cast<std::size_t>(n) != 0) {
    throw std::invalid_argument("LLR count per step does not match code outputs");
  }
  // Metric sum_i llr_i [c_i = 1] can be negative; shifting each step by the
  // sum of negative LLRs keeps it nonnegative without changing decisions.
  std::vector<double> shift(llrs.steps(), 0.0);
  for (std::size_t k = 0; k < llrs.steps(); ++k) {
    for (int i = 0; i < n; ++i) shift[k] -= std::min(0.0, llrs.at(k, i));
  }
  auto decided = detail::trellis_viterbi(
      code_trellis, llrs.steps(),
      [&](std::size_t k, std::uint32_t s, std::uint32_t u) {
        const std::uint32_t label = code_trellis.label(s, u);
        double acc = shift[k];
        for (int i = 0; i < n; ++i) {
          if ((label >> (n - 1 - i)) & 1u) acc += llrs.at(k, i);
        }
        return acc;
      },
      true);
  return BitVector(decided.begin(), decided.end());
}

int nearest_symbol_index(double value, int m) {
  const double pos = (value + (m - 1)) / 2.0;
  const double c = std::ceil(pos - 0.5);
  return static_cast<int>(std::clamp(c, 0.0, static_cast<double>(m - 1)));
}

std::vector<BitVector> demap_hard(std::span<const double> symbols, Labeling labeling, int m) {
  std::vector<BitVector> bits;
  bits.reserve(symbols.size());
  for (double v : symbols) bits.push_back(unlabel_index(nearest_symbol_index(v, m), labeling, m));
  return bits;
}

}  // namespace mdsim
