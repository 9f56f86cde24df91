#include "mdsim/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "mdsim/trellis.hpp"

namespace mdsim::oracle {

namespace {

BitVector bits_of(std::uint64_t value, int count) {
  BitVector bits(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) bits[static_cast<std::size_t>(i)] = (value >> i) & 1u;
  return bits;
}

void require_small(int count, int limit) {
  if (count > limit) throw std::invalid_argument("exhaustive search too large");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
  return d;
}

}  // namespace

std::vector<double> transmit(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                             std::span<const Bit> input) {
  const int m = 1 << gen.n();
  const auto coded = encode_block(gen, input, false);
  std::vector<double> levels;
  levels.reserve(coded.size());
  for (const auto& row : coded) levels.push_back(map_level(row, labeling, m));
  return convolve(levels, taps, -(m - 1.0));
}

double matched_branch_output(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                             std::uint32_t register_bits, Bit u) {
  const int reg = gen.memory() + taps.memory();
  // Oldest first: u[k-reg], ..., u[k-1], u[k].
  BitVector input;
  for (int t = reg - 1; t >= 0; --t) input.push_back((register_bits >> t) & 1u);
  input.push_back(u);
  return transmit(gen, taps, labeling, input).back();
}

BitVector exhaustive_mlse(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                          std::span<const double> observations, int info_bits) {
  require_small(info_bits, 16);
  const int tail = gen.memory() + taps.memory();
  if (observations.size() != static_cast<std::size_t>(info_bits + tail)) {
    throw std::invalid_argument("observation length must equal info bits plus tail");
  }
  BitVector best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << info_bits); ++v) {
    BitVector input = bits_of(v, info_bits);
    input.resize(static_cast<std::size_t>(info_bits + tail), 0);
    const double d = squared_distance(observations, transmit(gen, taps, labeling, input));
    if (d < best_d) {
      best_d = d;
      best = std::move(input);
    }
  }
  return best;
}

std::vector<int> exhaustive_channel_mlse(const ChannelTaps& taps, int m, std::span<const double> observations,
                                         bool terminated) {
  const int steps = static_cast<int>(observations.size());
  const Constellation alphabet(m);
  require_small(steps * alphabet.bits_per_symbol(), 20);
  std::vector<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  std::vector<int> c(static_cast<std::size_t>(steps), 0);
  std::vector<double> levels(static_cast<std::size_t>(steps));
  std::function<void(int)> walk = [&](int k) {
    if (k == steps) {
      for (int i = 0; i < steps; ++i) levels[static_cast<std::size_t>(i)] = alphabet.level(c[static_cast<std::size_t>(i)]);
      const double d = squared_distance(observations, convolve(levels, taps, alphabet.level(0)));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
      return;
    }
    const bool forced = terminated && k >= steps - taps.memory();
    for (int s = 0; s < (forced ? 1 : m); ++s) {
      c[static_cast<std::size_t>(k)] = s;
      walk(k + 1);
    }
  };
  walk(0);
  return best;
}

BitVector exhaustive_hard_decode(const GeneratorSet& gen, std::span<const BitVector> received, int info_bits) {
  require_small(info_bits, 16);
  BitVector best;
  long best_d = std::numeric_limits<long>::max();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << info_bits); ++v) {
    BitVector input = bits_of(v, info_bits);
    const auto coded = encode_block(gen, input, true);
    if (coded.size() != received.size()) throw std::invalid_argument("received length mismatch");
    long d = 0;
    for (std::size_t k = 0; k < coded.size(); ++k) {
      for (std::size_t i = 0; i < coded[k].size(); ++i) d += coded[k][i] != received[k][i];
    }
    if (d < best_d) {
      best_d = d;
      input.resize(coded.size(), 0);
      best = std::move(input);
    }
  }
  return best;
}

BitVector exhaustive_soft_decode(const GeneratorSet& gen, const BitLlrs& llrs, int info_bits) {
  require_small(info_bits, 16);
  BitVector best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << info_bits); ++v) {
    BitVector input = bits_of(v, info_bits);
    const auto coded = encode_block(gen, input, true);
    if (coded.size() != llrs.steps()) throw std::invalid_argument("LLR length mismatch");
    double d = 0.0;
    for (std::size_t k = 0; k < coded.size(); ++k) {
      for (std::size_t i = 0; i < coded[k].size(); ++i) {
        if (coded[k][i]) d += llrs.at(k, static_cast<int>(i));
      }
    }
    if (d < best_d) {
      best_d = d;
      input.resize(coded.size(), 0);
      best = std::move(input);
    }
  }
  return best;
}

std::vector<std::vector<double>> exhaustive_symbol_posteriors(const ChannelTaps& taps, int m,
                                                              std::span<const double> observations,
                                                              double sigma, bool terminated) {
  const int steps = static_cast<int>(observations.size());
  const Constellation alphabet(m);
  require_small(steps * alphabet.bits_per_symbol(), 20);

  // Two passes: find the best log-weight, then accumulate scaled weights.
  std::vector<std::pair<std::vector<int>, double>> candidates;
  std::vector<int> c(static_cast<std::size_t>(steps), 0);
  std::vector<double> levels(static_cast<std::size_t>(steps));
  std::function<void(int)> walk = [&](int k) {
    if (k == steps) {
      for (int i = 0; i < steps; ++i) levels[static_cast<std::size_t>(i)] = alphabet.level(c[static_cast<std::size_t>(i)]);
      const double d = squared_distance(observations, convolve(levels, taps, alphabet.level(0)));
      candidates.emplace_back(c, -d / (2.0 * sigma * sigma));
      return;
    }
    const bool forced = terminated && k >= steps - taps.memory();
    for (int s = 0; s < (forced ? 1 : m); ++s) {
      c[static_cast<std::size_t>(k)] = s;
      walk(k + 1);
    }
  };
  walk(0);
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& cand : candidates) peak = std::max(peak, cand.second);
  std::vector<std::vector<double>> post(static_cast<std::size_t>(steps), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  double total = 0.0;
  for (const auto& [seq, logw] : candidates) {
    const double w = std::exp(logw - peak);
    total += w;
    for (int k = 0; k < steps; ++k) post[static_cast<std::size_t>(k)][static_cast<std::size_t>(seq[static_cast<std::size_t>(k)])] += w;
  }
  for (auto& row : post) {
    for (double& p : row) p /= total;
  }
  return post;
}

double uncoded_ask_ber(double ebn0_db, int m, Labeling labeling) {
  const Constellation alphabet(m);
  const int n = alphabet.bits_per_symbol();
  const double sigma = noise_sigma(ebn0_db, alphabet.mean_energy(), n);
  auto q = [](double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); };
  double expected_bit_errors = 0.0;
  for (int tx = 0; tx < m; ++tx) {
    const auto tx_bits = unlabel_index(tx, labeling, m);
    const double s = alphabet.level(tx);
    for (int rx = 0; rx < m; ++rx) {
      // Decision region of level rx is [level - 1, level + 1], open-ended at the edges.
      const double lo = rx == 0 ? -INFINITY : alphabet.level(rx) - 1.0;
      const double hi = rx == m - 1 ? INFINITY : alphabet.level(rx) + 1.0;
      const double p = q((lo - s) / sigma) - q((hi - s) / sigma);
      const auto rx_bits = unlabel_index(rx, labeling, m);
      int hamming = 0;
      for (int i = 0; i < n; ++i) hamming += tx_bits[static_cast<std::size_t>(i)] != rx_bits[static_cast<std::size_t>(i)];
      expected_bit_errors += p * hamming;
    }
  }
  return expected_bit_errors / (m * n);
}

namespace {

struct Check {
  std::string name;
  std::function<bool(std::mt19937_64&)> trial;
};

std::vector<double> noisy(std::vector<double> clean, double sigma, std::mt19937_64& rng) {
  add_awgn_inplace(clean, sigma, rng);
  return clean;
}

BitVector random_bits(int count, std::mt19937_64& rng) {
  BitVector bits(static_cast<std::size_t>(count));
  for (auto& b : bits) b = rng() & 1u;
  return bits;
}

template <class T>
BitVector to_bits(const std::vector<T>& v) {
  return BitVector(v.begin(), v.end());
}

}  // namespace

bool run_verification_suite(std::uint64_t seed, int trials, std::ostream& log) {
  const auto gen57 = parse_generators(std::string_view("5,7"));
  const auto gen2304 = parse_generators(std::string_view("23,04"));
  const auto h2 = example_channel(2);
  const auto h1 = example_channel(1);
  constexpr int kInfo = 8;
  constexpr double kSigma = 1.2;

  auto coded_observation = [&](const GeneratorSet& gen, const ChannelTaps& taps, std::mt19937_64& rng) {
    BitVector input = random_bits(kInfo, rng);
    input.resize(static_cast<std::size_t>(kInfo + gen.memory() + taps.memory()), 0);
    return noisy(transmit(gen, taps, Labeling::natural, input), kSigma, rng);
  };

  std::vector<Check> checks;
  checks.push_back({"matched hypotheses equal encode-map-convolve", [&](std::mt19937_64&) {
    for (const auto* gen : {&gen57, &gen2304}) {
      for (auto labeling : {Labeling::natural, Labeling::gray}) {
        const auto t = build_matched_trellis(*gen, h2, labeling);
        for (std::uint32_t s = 0; s < t.num_states(); ++s) {
          for (Bit u = 0; u < 2; ++u) {
            if (std::abs(t.hypothesis(s, u) - matched_branch_output(*gen, h2, labeling, s, u)) > 1e-12) return false;
          }
        }
      }
    }
    return true;
  }});
  checks.push_back({"super-trellis Viterbi equals exhaustive MLSE", [&](std::mt19937_64& rng) {
    const auto t = build_super_trellis(gen2304, h2, Labeling::natural);
    const auto r = coded_observation(gen2304, h2, rng);
    return to_bits(viterbi_mlse(t, r, true)) == exhaustive_mlse(gen2304, h2, Labeling::natural, r, kInfo);
  }});
  checks.push_back({"matched Viterbi equals exhaustive MLSE", [&](std::mt19937_64& rng) {
    const auto t = build_matched_trellis(gen2304, h2, Labeling::natural);
    const auto r = coded_observation(gen2304, h2, rng);
    return to_bits(viterbi_mlse(t, r, true)) == exhaustive_mlse(gen2304, h2, Labeling::natural, r, kInfo);
  }});
  checks.push_back({"MD-RSSE with all register bits equals exhaustive MLSE", [&](std::mt19937_64& rng) {
    const auto t = build_matched_trellis(gen57, h1, Labeling::natural);
    const auto r = coded_observation(gen57, h1, rng);
    return md_rsse_decode(t, RssePartition{t.register_length()}, r, true) ==
           exhaustive_mlse(gen57, h1, Labeling::natural, r, kInfo);
  }});
  checks.push_back({"hard Viterbi decoding equals minimum Hamming search", [&](std::mt19937_64& rng) {
    const auto t = build_code_trellis(gen57);
    auto rx = encode_block(gen57, random_bits(kInfo, rng), true);
    for (auto& row : rx) {
      for (auto& b : row) b ^= (rng() % 8 == 0);
    }
    const auto decoded = decode_code_hard(t, rx);
    const auto best = exhaustive_hard_decode(gen57, rx, kInfo);
    // Equal metric is what matters when several codewords tie.
    auto distance = [&](const BitVector& input) {
      const auto c = encode_block(gen57, std::span<const Bit>(input.data(), kInfo), true);
      long d = 0;
      for (std::size_t k = 0; k < c.size(); ++k)
        for (std::size_t i = 0; i < c[k].size(); ++i) d += c[k][i] != rx[k][i];
      return d;
    };
    return distance(decoded) == distance(best);
  }});
  checks.push_back({"soft Viterbi decoding equals exhaustive LLR search", [&](std::mt19937_64& rng) {
    const auto t = build_code_trellis(gen2304);
    BitLlrs llrs;
    llrs.bits_per_step = 2;
    std::normal_distribution<double> g(0.0, 3.0);
    for (int k = 0; k < 2 * (kInfo + gen2304.memory()); ++k) llrs.values.push_back(g(rng));
    return decode_code_soft(t, llrs) == exhaustive_soft_decode(gen2304, llrs, kInfo);
  }});
  checks.push_back({"DFSE with q_h = L equals exhaustive channel MLSE", [&](std::mt19937_64& rng) {
    std::vector<double> levels;
    for (int k = 0; k < 6; ++k) levels.push_back(2.0 * static_cast<double>(rng() % 4) - 3.0);
    levels.push_back(-3.0);
    levels.push_back(-3.0);
    const auto r = noisy(convolve(levels, h2, -3.0), 0.8, rng);
    const auto d = dfse_equalize(h2, 4, 2, r, true);
    const auto best = exhaustive_channel_mlse(h2, 4, r, true);
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (d[k] != 2.0 * best[k] - 3.0) return false;
    }
    return true;
  }});
  checks.push_back({"BCJR posteriors equal exhaustive marginalization", [&](std::mt19937_64& rng) {
    const auto channel = build_channel_trellis(h2, 4);
    std::vector<double> levels;
    for (int k = 0; k < 6; ++k) levels.push_back(2.0 * static_cast<double>(rng() % 4) - 3.0);
    const auto r = noisy(convolve(levels, h2, -3.0), 0.9, rng);
    for (bool terminated : {false, true}) {
      const auto a = bcjr_symbol_posteriors(channel, r, 0.9, terminated);
      const auto b = exhaustive_symbol_posteriors(h2, 4, r, 0.9, terminated);
      for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t c = 0; c < a[k].size(); ++c)
          if (std::abs(a[k][c] - b[k][c]) > 1e-9) return false;
    }
    return true;
  }});
  checks.push_back({"MD and STD decide identically", [&](std::mt19937_64& rng) {
    const auto md = build_matched_trellis(gen2304, h2, Labeling::natural);
    const auto std_trellis = build_super_trellis(gen2304, h2, Labeling::natural);
    BitVector input = random_bits(500, rng);
    input.resize(input.size() + 6, 0);
    const auto r = noisy(transmit(gen2304, h2, Labeling::natural, input), 1.5, rng);
    return viterbi_mlse(md, r, true) == viterbi_mlse(std_trellis, r, true);
  }});

  std::mt19937_64 rng(seed);
  bool all = true;
  for (const auto& check : checks) {
    int passed = 0;
    for (int t = 0; t < trials; ++t) passed += check.trial(rng) ? 1 : 0;
    const bool ok = passed == trials;
    all = all && ok;
    log << (ok ? "PASS " : "FAIL ") << check.name << " (" << passed << "/" << trials << ")\n";
  }
  return all;
}

}  // namespace mdsim::oracle
