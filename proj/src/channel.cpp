#include "mdsim/channel.hpp"

#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdsim {

namespace {

constexpr double kEnergyTolerance = 1e-12;
constexpr double kRenormWarnTolerance = 1e-6;
constexpr double kUnitCircleMargin = 1e-9;

double energy_of(std::span<const double> h) {
  return std::inner_product(h.begin(), h.end(), h.begin(), 0.0);
}

}  // namespace

ChannelTaps::ChannelTaps(std::vector<double> h) : h_(std::move(h)) {
  if (h_.empty()) throw std::invalid_argument("channel needs at least one tap");
  if (h_[0] == 0.0) throw std::invalid_argument("leading channel tap h[0] must be nonzero");
  if (std::abs(energy_of(h_) - 1.0) > kEnergyTolerance) {
    throw std::invalid_argument("channel taps must have unit energy");
  }
}

ChannelTaps ChannelTaps::normalized(std::vector<double> h) {
  const double e = energy_of(h);
  if (!(e > 0.0)) throw std::invalid_argument("channel taps have zero energy");
  const double scale = 1.0 / std::sqrt(e);
  for (double& v : h) v *= scale;
  return ChannelTaps(std::move(h));
}

double ChannelTaps::sum() const { return std::accumulate(h_.begin(), h_.end(), 0.0); }

double ChannelTaps::energy() const { return energy_of(h_); }

ChannelTaps example_channel(int memory) {
  if (memory < 0) throw std::invalid_argument("channel memory must be nonnegative");
  std::vector<double> h(static_cast<std::size_t>(memory) + 1);
  for (int k = 0; k <= memory; ++k) {
    h[static_cast<std::size_t>(k)] = static_cast<double>(memory - k + 1) / (memory + 1);
  }
  return ChannelTaps::normalized(std::move(h));
}

ParsedChannel parse_channel(std::string_view spec) {
  constexpr std::string_view kExample = "example:";
  if (spec.starts_with(kExample)) {
    auto digits = spec.substr(kExample.size());
    int memory = -1;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), memory);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw std::invalid_argument("bad channel spec '" + std::string(spec) + "'");
    }
    return {example_channel(memory), std::nullopt};
  }
  std::vector<double> h;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto pos = spec.find(',', start);
    if (pos == std::string_view::npos) pos = spec.size();
    std::string item(spec.substr(start, pos - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad channel tap '" + item + "'");
    }
    while (used < item.size() && item[used] == ' ') ++used;
    if (used != item.size()) throw std::invalid_argument("bad channel tap '" + item + "'");
    h.push_back(v);
    start = pos + 1;
  }
  const double e = energy_of(h);
  std::optional<std::string> warning;
  if (std::abs(e - 1.0) > kRenormWarnTolerance) {
    warning = "channel taps re-normalized to unit energy (energy was " + std::to_string(e) + ")";
  }
  return {ChannelTaps::normalized(std::move(h)), warning};
}

std::vector<double> convolve(std::span<const double> symbols, const ChannelTaps& taps,
                             double history) {
  const auto len = static_cast<std::ptrdiff_t>(symbols.size());
  std::vector<double> r(symbols.size());
  for (std::ptrdiff_t k = 0; k < len; ++k) {
    double acc = 0.0;
    for (std::ptrdiff_t j = 0; j <= taps.memory(); ++j) {
      const double b = k - j >= 0 ? symbols[static_cast<std::size_t>(k - j)] : history;
      acc += taps[static_cast<std::size_t>(j)] * b;
    }
    r[static_cast<std::size_t>(k)] = acc;
  }
  return r;
}

void add_awgn_inplace(std::span<double> r, double sigma, std::mt19937_64& rng) {
  if (sigma < 0.0) throw std::invalid_argument("noise deviation must be nonnegative");
  if (sigma == 0.0) return;
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : r) v += noise(rng);
}

std::vector<double> add_awgn(std::span<const double> r, double sigma, std::uint64_t seed) {
  std::vector<double> out(r.begin(), r.end());
  std::mt19937_64 rng(seed);
  add_awgn_inplace(out, sigma, rng);
  return out;
}

bool is_minimum_phase(const ChannelTaps& taps) {
  const int degree = taps.memory();
  if (degree == 0) return true;
  // Companion matrix of the monic polynomial z^L + (h1/h0) z^(L-1) + ... + hL/h0.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int j = 0; j < degree; ++j) {
    companion(0, j) = -taps[static_cast<std::size_t>(j) + 1] / taps[0];
  }
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  const auto roots = solver.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    if (std::abs(roots[i]) >= 1.0 - kUnitCircleMargin) return false;
  }
  return true;
}

}  // namespace mdsim
