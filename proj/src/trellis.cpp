#include "mdsim/trellis.hpp"

#include <stdexcept>

namespace mdsim {

std::string_view to_string(TrellisKind kind) {
  switch (kind) {
    case TrellisKind::code: return "code";
    case TrellisKind::channel: return "channel";
    case TrellisKind::super: return "super";
    case TrellisKind::matched: return "matched";
  }
  return "?";
}

Trellis::Trellis(Tables tables) : t_(std::move(tables)) {
  const std::size_t branches = std::size_t{t_.num_states} * t_.inputs_per_state;
  if (t_.num_states == 0 || t_.inputs_per_state == 0) {
    throw std::invalid_argument("trellis must have at least one state and one input");
  }
  if (t_.next.size() != branches) throw std::invalid_argument("transition table is not total");
  if (!t_.hypothesis.empty() && t_.hypothesis.size() != branches) {
    throw std::invalid_argument("hypothesis table size mismatch");
  }
  if (!t_.label.empty() && t_.label.size() != branches) {
    throw std::invalid_argument("label table size mismatch");
  }
  for (auto s : t_.next) {
    if (s >= t_.num_states) throw std::invalid_argument("transition to nonexistent state");
  }
  if (t_.start_state >= t_.num_states) throw std::invalid_argument("start state out of range");
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t budget, const char* what) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > budget) {
      throw CapacityError(std::string(what) + " trellis exceeds the state budget of " +
                          std::to_string(budget) + " states");
    }
  }
  return v;
}

void require_real_labeling(const GeneratorSet& gen, Labeling labeling, int m) {
  if (labeling == Labeling::qam4) {
    throw std::invalid_argument("qam4 labeling is not usable in the real-valued trellis chain");
  }
  if (log2_exact(m) != gen.n()) {
    throw std::invalid_argument("code outputs per step must equal log2(M)");
  }
}

// Coded-bit labels as a symbol index: label_bits MSB-first.
int symbol_index_of_label(std::uint32_t label, int n, Labeling labeling, int m) {
  BitVector bits(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = (label >> (n - 1 - i)) & 1u;
  return label_index(bits, labeling, m);
}

}  // namespace

Trellis build_code_trellis(const GeneratorSet& gen) {
  const int nu = gen.memory();
  const int n = gen.n();
  Trellis::Tables t;
  t.kind = TrellisKind::code;
  t.num_states = 1u << nu;
  t.inputs_per_state = 2;
  t.label_bits = n;
  t.register_base = 2;
  t.register_length = nu;
  t.alphabet_size = 1 << n;
  t.next.resize(std::size_t{t.num_states} * 2);
  t.label.resize(t.next.size());
  const std::uint32_t mask = t.num_states - 1;
  for (std::uint32_t s = 0; s < t.num_states; ++s) {
    for (std::uint32_t u = 0; u < 2; ++u) {
      // Bit t of the window is the input delayed by t.
      const std::uint32_t window = (s << 1) | u;
      std::uint32_t label = 0;
      for (int i = 0; i < n; ++i) {
        std::uint32_t acc = 0;
        const BitVector& g = gen.poly(i);
        for (int j = 0; j <= nu; ++j) acc ^= g[static_cast<std::size_t>(j)] & ((window >> j) & 1u);
        label = (label << 1) | acc;
      }
      t.next[s * 2 + u] = window & mask;
      t.label[s * 2 + u] = label;
    }
  }
  return Trellis(std::move(t));
}

Trellis build_channel_trellis(const ChannelTaps& taps, int m, std::uint64_t state_budget) {
  const Constellation alphabet(m);
  const int memory = taps.memory();
  const auto states = checked_pow(static_cast<std::uint64_t>(m), memory, state_budget, "channel");
  Trellis::Tables t;
  t.kind = TrellisKind::channel;
  t.num_states = static_cast<std::uint32_t>(states);
  t.inputs_per_state = static_cast<std::uint32_t>(m);
  t.register_base = m;
  t.register_length = memory;
  t.alphabet_size = m;
  t.next.resize(std::size_t{t.num_states} * t.inputs_per_state);
  t.hypothesis.resize(t.next.size());
  for (std::uint32_t s = 0; s < t.num_states; ++s) {
    for (std::uint32_t c = 0; c < t.inputs_per_state; ++c) {
      double acc = taps[0] * alphabet.level(static_cast<int>(c));
      std::uint32_t digits = s;
      for (int j = 1; j <= memory; ++j) {
        acc += taps[static_cast<std::size_t>(j)] * alphabet.level(static_cast<int>(digits % m));
        digits /= static_cast<std::uint32_t>(m);
      }
      const std::size_t b = std::size_t{s} * t.inputs_per_state + c;
      t.hypothesis[b] = acc;
      t.next[b] = static_cast<std::uint32_t>((std::uint64_t{s} * m + c) % states);
    }
  }
  return Trellis(std::move(t));
}

Trellis build_super_trellis(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                            std::uint64_t state_budget) {
  const int m = 1 << gen.n();
  require_real_labeling(gen, labeling, m);
  const Trellis code = build_code_trellis(gen);
  const Trellis channel = build_channel_trellis(taps, m, state_budget);
  const std::uint64_t total = std::uint64_t{code.num_states()} * channel.num_states();
  if (total > state_budget) {
    throw CapacityError("super trellis exceeds the state budget of " + std::to_string(state_budget) +
                        " states");
  }
  Trellis::Tables t;
  t.kind = TrellisKind::super;
  t.num_states = static_cast<std::uint32_t>(total);
  t.inputs_per_state = 2;
  t.alphabet_size = m;
  t.labeling = labeling;
  t.register_length = 0;
  t.next.resize(std::size_t{t.num_states} * 2);
  t.hypothesis.resize(t.next.size());
  const std::uint32_t z_enc = code.num_states();
  for (std::uint32_t s = 0; s < t.num_states; ++s) {
    const std::uint32_t enc = s % z_enc;
    const std::uint32_t cha = s / z_enc;
    for (std::uint32_t u = 0; u < 2; ++u) {
      const auto c = static_cast<std::uint32_t>(
          symbol_index_of_label(code.label(enc, u), gen.n(), labeling, m));
      t.next[s * 2 + u] = code.next(enc, u) + z_enc * channel.next(cha, c);
      t.hypothesis[s * 2 + u] = channel.hypothesis(cha, c);
    }
  }
  return Trellis(std::move(t));
}

double matched_offset(const ChannelTaps& taps, int m) { return -taps.sum() * (m - 1); }

Trellis build_matched_trellis(const GeneratorSet& gen, const ChannelTaps& taps, Labeling labeling,
                              std::uint64_t state_budget) {
  const int m = 1 << gen.n();
  require_real_labeling(gen, labeling, m);
  const int nu = gen.memory();
  const int memory = taps.memory();
  const int n = gen.n();
  const int reg = nu + memory;
  if (reg > 31) throw CapacityError("matched register longer than 31 bits");
  const auto states = checked_pow(2, reg, state_budget, "matched");
  const double offset = matched_offset(taps, m);

  Trellis::Tables t;
  t.kind = TrellisKind::matched;
  t.num_states = static_cast<std::uint32_t>(states);
  t.inputs_per_state = 2;
  t.register_base = 2;
  t.register_length = reg;
  t.alphabet_size = m;
  t.labeling = labeling;
  t.next.resize(std::size_t{t.num_states} * 2);
  t.hypothesis.resize(t.next.size());
  const std::uint32_t mask = t.num_states - 1;

  BitVector coded(static_cast<std::size_t>(n));
  std::vector<double> branch_partial(static_cast<std::size_t>(n));
  for (std::uint32_t s = 0; s < t.num_states; ++s) {
    for (std::uint32_t u = 0; u < 2; ++u) {
      // Bit t of the window is u[k - t], t = 0 .. nu + L.
      const std::uint64_t window = (std::uint64_t{s} << 1) | u;
      std::fill(branch_partial.begin(), branch_partial.end(), 0.0);
      for (int lag = 0; lag <= memory; ++lag) {
        for (int i = 0; i < n; ++i) {
          // Integer convolution sum, reduced mod 2 through the floor identity.
          long long conv = 0;
          const BitVector& g = gen.poly(i);
          for (int d = 0; d <= nu; ++d) {
            conv += g[static_cast<std::size_t>(d)] * static_cast<long long>((window >> (lag + d)) & 1u);
          }
          coded[static_cast<std::size_t>(i)] = mod2_via_floor(conv);
        }
        if (labeling == Labeling::gray) {
          coded = unlabel_index(label_index(coded, Labeling::gray, m), Labeling::natural, m);
        }
        for (int i = 0; i < n; ++i) {
          branch_partial[static_cast<std::size_t>(i)] +=
              taps[static_cast<std::size_t>(lag)] * coded[static_cast<std::size_t>(i)];
        }
      }
      double weighted = 0.0;
      for (int i = 0; i < n; ++i) {
        weighted += static_cast<double>(1 << (n - 1 - i)) * branch_partial[static_cast<std::size_t>(i)];
      }
      t.hypothesis[s * 2 + u] = 2.0 * weighted + offset;
      t.next[s * 2 + u] = static_cast<std::uint32_t>(window & mask);
    }
  }
  return Trellis(std::move(t));
}

ComplexityReport complexity_report(int nu, int channel_memory, int m) {
  const int n = log2_exact(m);
  if (nu < 0 || channel_memory < 0) throw std::invalid_argument("negative memory");
  if (nu + n * channel_memory > 62) throw std::overflow_error("state count exceeds 64-bit range");
  ComplexityReport r;
  r.z_enc = std::uint64_t{1} << nu;
  r.z_equ = std::uint64_t{1} << (n * channel_memory);
  r.z_separate = r.z_enc + r.z_equ;
  r.z_std = r.z_enc * r.z_equ;
  r.z_md = std::uint64_t{1} << (nu + channel_memory);
  r.gain_md = r.z_std / r.z_md;
  return r;
}

ComplexityReport complexity_report(const GeneratorSet& gen, const ChannelTaps& taps, int m) {
  return complexity_report(gen.memory(), taps.memory(), m);
}

}  // namespace mdsim
