#pragma once

// Shared add-compare-select loops. Not part of the public interface.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mdsim/trellis.hpp"

namespace mdsim::detail {

inline constexpr double kUnreached = std::numeric_limits<double>::infinity();

// Picks the traceback start: state 0 when terminated, else the smallest end
// metric (ties to the smaller index).
inline std::uint32_t traceback_start(const std::vector<double>& metric, bool terminated) {
  if (terminated && metric[0] < kUnreached) return 0;
  std::uint32_t best = 0;
  for (std::uint32_t s = 1; s < metric.size(); ++s) {
    if (metric[s] < metric[best]) best = s;
  }
  return best;
}

// Full-state Viterbi over an arbitrary trellis. branch_metric(k, state, input)
// must be nonnegative. Predecessors are visited in increasing state order and
// replaced only on a strictly smaller metric, so ties keep the smaller index.
template <class BranchMetric>
std::vector<std::uint32_t> trellis_viterbi(const Trellis& trellis, std::size_t steps,
                                           BranchMetric&& branch_metric, bool terminated) {
  if (steps == 0) throw std::invalid_argument("empty observation sequence");
  const std::uint32_t states = trellis.num_states();
  const std::uint32_t inputs = trellis.inputs_per_state();
  const auto& next = trellis.next_table();

  std::vector<double> metric(states, kUnreached), fresh(states);
  metric[trellis.start_state()] = 0.0;
  std::vector<std::uint32_t> pred(steps * states), decided(steps * states);

  for (std::size_t k = 0; k < steps; ++k) {
    std::fill(fresh.begin(), fresh.end(), kUnreached);
    std::uint32_t* pk = pred.data() + k * states;
    std::uint32_t* dk = decided.data() + k * states;
    for (std::uint32_t s = 0; s < states; ++s) {
      const double base = metric[s];
      if (!(base < kUnreached)) continue;
      for (std::uint32_t u = 0; u < inputs; ++u) {
        const std::uint32_t ns = next[std::size_t{s} * inputs + u];
        const double cand = base + branch_metric(k, s, u);
        if (cand < fresh[ns]) {
          fresh[ns] = cand;
          pk[ns] = s;
          dk[ns] = u;
        }
      }
    }
    metric.swap(fresh);
  }

  std::vector<std::uint32_t> out(steps);
  std::uint32_t s = traceback_start(metric, terminated);
  for (std::size_t k = steps; k-- > 0;) {
    out[k] = decided[k * states + s];
    s = pred[k * states + s];
  }
  return out;
}

// Reduced-state Viterbi on a shift-register trellis with per-survivor
// processing. The full register holds `full_length` base-`base` digits with the
// newest digit least significant; the hyperstate keeps the `retained` newest.
// Each hyperstate carries its survivor's full register, which supplies the
// digits the hyperstate drops. hypothesis(full_register, input) gives the
// expected channel output of the branch.
template <class Hypothesis>
std::vector<std::uint32_t> survivor_viterbi(std::uint32_t base, int full_length, int retained,
                                            const double* observations, std::size_t steps,
                                            Hypothesis&& hypothesis, bool terminated) {
  if (steps == 0) throw std::invalid_argument("empty observation sequence");
  if (retained < 0 || retained > full_length) throw std::invalid_argument("retained digits out of range");
  std::uint64_t full_mod = 1, hyper_mod = 1;
  for (int i = 0; i < full_length; ++i) full_mod *= base;
  for (int i = 0; i < retained; ++i) hyper_mod *= base;
  const auto hyper = static_cast<std::uint32_t>(hyper_mod);

  std::vector<double> metric(hyper, kUnreached), fresh(hyper);
  std::vector<std::uint64_t> reg(hyper, 0), fresh_reg(hyper, 0);
  metric[0] = 0.0;
  std::vector<std::uint32_t> pred(steps * hyper), decided(steps * hyper);

  for (std::size_t k = 0; k < steps; ++k) {
    std::fill(fresh.begin(), fresh.end(), kUnreached);
    std::uint32_t* pk = pred.data() + k * hyper;
    std::uint32_t* dk = decided.data() + k * hyper;
    const double r = observations[k];
    for (std::uint32_t h = 0; h < hyper; ++h) {
      const double m = metric[h];
      if (!(m < kUnreached)) continue;
      const std::uint64_t full = reg[h];
      for (std::uint32_t u = 0; u < base; ++u) {
        const double e = r - hypothesis(full, u);
        const double cand = m + e * e;
        const auto nh = static_cast<std::uint32_t>((std::uint64_t{h} * base + u) % hyper_mod);
        if (cand < fresh[nh]) {
          fresh[nh] = cand;
          fresh_reg[nh] = (full * base + u) % full_mod;
          pk[nh] = h;
          dk[nh] = u;
        }
      }
    }
    metric.swap(fresh);
    reg.swap(fresh_reg);
  }

  std::vector<std::uint32_t> out(steps);
  std::uint32_t h = traceback_start(metric, terminated);
  for (std::size_t k = steps; k-- > 0;) {
    out[k] = decided[k * hyper + h];
    h = pred[k * hyper + h];
  }
  return out;
}

}  // namespace mdsim::detail
