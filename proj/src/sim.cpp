#include "mdsim/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mdsim/channel.hpp"
#include "mdsim/convcode.hpp"
#include "mdsim/detect.hpp"

namespace mdsim {

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

double parse_double(std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool is_uncoded(const SimConfig& cfg) { return cfg.generators == "uncoded"; }

// Everything a block needs that does not change between blocks.
struct Link {
  const SimConfig& cfg;
  ChannelTaps taps;
  int m;
  int n;
  bool uncoded;
  std::optional<GeneratorSet> gen;
  std::optional<Trellis> code, channel, super, matched;
  int info_bits = 0;   // per block
  int symbols = 0;     // per block, tail included
  int tail = 0;        // tail steps
  double nominal_sigma = 0.0;
  double channel_sigma = 0.0;

  Link(const SimConfig& c, double ebn0_db)
      : cfg(c), taps(parse_channel(c.channel).taps), m(c.m), n(log2_exact(c.m)), uncoded(is_uncoded(c)) {
    const Constellation alphabet(m);
    if (uncoded) {
      symbols = (cfg.block_length + n - 1) / n;
      info_bits = symbols * n;
      tail = taps.memory();
    } else {
      gen = parse_generators(std::string_view(cfg.generators));
      if (gen->n() != n) throw std::invalid_argument("code outputs per step must equal log2(M)");
      info_bits = cfg.block_length;
      tail = gen->memory() + taps.memory();
    }
    symbols = (uncoded ? symbols : info_bits) + tail;
    const int info_per_symbol = uncoded ? n : 1;
    nominal_sigma = noise_sigma(ebn0_db, alphabet.mean_energy(), info_per_symbol);
    channel_sigma = cfg.sigma_override.value_or(nominal_sigma);

    for (const auto& rx : cfg.receivers) {
      switch (rx.kind) {
        case ReceiverKind::super_trellis:
        case ReceiverKind::matched:
          if (uncoded) {
            ensure_channel();
          } else if (rx.kind == ReceiverKind::super_trellis) {
            if (!super) super = build_super_trellis(*gen, taps, cfg.labeling, cfg.state_budget);
          } else if (!matched) {
            matched = build_matched_trellis(*gen, taps, cfg.labeling, cfg.state_budget);
          }
          break;
        case ReceiverKind::matched_rsse:
          if (uncoded) throw std::invalid_argument("md-rsse needs a coded link");
          if (!matched) matched = build_matched_trellis(*gen, taps, cfg.labeling, cfg.state_budget);
          if (rx.param < 1 || rx.param > matched->register_length()) {
            throw std::invalid_argument("md-rsse retained bits out of range");
          }
          break;
        case ReceiverKind::dfse_va:
          if (rx.param > taps.memory()) throw std::invalid_argument("dfse q_h exceeds channel memory");
          if (!uncoded && !code) code = build_code_trellis(*gen);
          break;
        case ReceiverKind::bcjr_va:
          ensure_channel();
          if (!uncoded && !code) code = build_code_trellis(*gen);
          break;
      }
    }
  }

  void ensure_channel() {
    if (!channel) channel = build_channel_trellis(taps, m, cfg.state_budget);
  }

  // Info bits and observations of one block.
  struct Block {
    BitVector info;
    std::vector<double> observed;
  };

  Block make_block(std::uint64_t point_seed, std::uint64_t block_index) const {
    std::seed_seq seq{static_cast<std::uint32_t>(point_seed), static_cast<std::uint32_t>(point_seed >> 32),
                      static_cast<std::uint32_t>(block_index),
                      static_cast<std::uint32_t>(block_index >> 32)};
    std::mt19937_64 rng(seq);
    Block b;
    b.info.resize(static_cast<std::size_t>(info_bits));
    for (std::size_t i = 0; i < b.info.size(); i += 64) {
      std::uint64_t word = rng();
      for (std::size_t j = i; j < std::min(b.info.size(), i + 64); ++j, word >>= 1) b.info[j] = word & 1u;
    }
    std::vector<double> levels(static_cast<std::size_t>(symbols));
    const Constellation alphabet(m);
    if (uncoded) {
      const int data_symbols = info_bits / n;
      for (int k = 0; k < data_symbols; ++k) {
        std::span<const Bit> group(b.info.data() + static_cast<std::size_t>(k) * n, static_cast<std::size_t>(n));
        levels[static_cast<std::size_t>(k)] = map_level(group, cfg.labeling, m);
      }
      for (int k = data_symbols; k < symbols; ++k) levels[static_cast<std::size_t>(k)] = alphabet.level(0);
    } else {
      BitVector input(b.info);
      input.resize(static_cast<std::size_t>(symbols), 0);
      const auto coded = encode_block(*gen, input, false);
      for (std::size_t k = 0; k < coded.size(); ++k) levels[k] = map_level(coded[k], cfg.labeling, m);
    }
    b.observed = convolve(levels, taps, alphabet.level(0));
    add_awgn_inplace(b.observed, channel_sigma, rng);
    return b;
  }

  BitVector decode(const ReceiverSpec& rx, std::span<const double> r) const {
    BitVector bits;
    auto take_inputs = [&](const std::vector<std::uint32_t>& v) {
      return BitVector(v.begin(), v.begin() + info_bits);
    };
    auto symbols_to_bits = [&](const std::vector<std::uint32_t>& c) {
      BitVector out;
      out.reserve(static_cast<std::size_t>(info_bits));
      for (int k = 0; k < info_bits / n; ++k) {
        auto pattern = unlabel_index(static_cast<int>(c[static_cast<std::size_t>(k)]), cfg.labeling, m);
        out.insert(out.end(), pattern.begin(), pattern.end());
      }
      return out;
    };
    switch (rx.kind) {
      case ReceiverKind::super_trellis:
      case ReceiverKind::matched:
        if (uncoded) return symbols_to_bits(viterbi_mlse(*channel, r, true));
        return take_inputs(viterbi_mlse(rx.kind == ReceiverKind::matched ? *matched : *super, r, true));
      case ReceiverKind::matched_rsse: {
        auto d = md_rsse_decode(*matched, RssePartition{rx.param}, r, true);
        d.resize(static_cast<std::size_t>(info_bits));
        return d;
      }
      case ReceiverKind::dfse_va: {
        const auto levels = dfse_equalize(taps, m, rx.param, r, true);
        const auto hard = demap_hard(levels, cfg.labeling, m);
        if (uncoded) {
          for (int k = 0; k < info_bits / n; ++k) {
            bits.insert(bits.end(), hard[static_cast<std::size_t>(k)].begin(), hard[static_cast<std::size_t>(k)].end());
          }
          return bits;
        }
        bits = decode_code_hard(*code, hard);
        bits.resize(static_cast<std::size_t>(info_bits));
        return bits;
      }
      case ReceiverKind::bcjr_va: {
        const auto llrs = bcjr_equalize(*channel, r, nominal_sigma, cfg.labeling, true);
        if (uncoded) {
          for (std::size_t i = 0; i < static_cast<std::size_t>(info_bits); ++i) {
            bits.push_back(llrs.values[i] < 0.0 ? 1 : 0);
          }
          return bits;
        }
        bits = decode_code_soft(*code, llrs);
        bits.resize(static_cast<std::size_t>(info_bits));
        return bits;
      }
    }
    throw std::logic_error("unhandled receiver");
  }
};

std::uint64_t count_errors(const BitVector& a, const BitVector& b) {
  std::uint64_t e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e += a[i] != b[i];
  return e;
}

}  // namespace

ReceiverSpec ReceiverSpec::parse(std::string_view token) {
  if (token == "std") return {ReceiverKind::super_trellis, 0};
  if (token == "md") return {ReceiverKind::matched, 0};
  if (token == "bcjr+va") return {ReceiverKind::bcjr_va, 0};
  if (token.starts_with("md-rsse:")) {
    return {ReceiverKind::matched_rsse, parse_int(token.substr(8), "md-rsse state bits")};
  }
  if (token.starts_with("dfse:") && token.ends_with("+va")) {
    return {ReceiverKind::dfse_va, parse_int(token.substr(5, token.size() - 8), "dfse taps")};
  }
  throw std::invalid_argument("unknown receiver '" + std::string(token) + "'");
}

std::string ReceiverSpec::label() const {
  switch (kind) {
    case ReceiverKind::super_trellis: return "std";
    case ReceiverKind::matched: return "md";
    case ReceiverKind::matched_rsse: return "md-rsse:" + std::to_string(param);
    case ReceiverKind::dfse_va: return "dfse:" + std::to_string(param) + "+va";
    case ReceiverKind::bcjr_va: return "bcjr+va";
  }
  return "?";
}

std::vector<double> parse_ebn0_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("Eb/N0 range must be start:step:stop");
    const double start = parse_double(parts[0]);
    const double step = parse_double(parts[1]);
    const double stop = parse_double(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("Eb/N0 step must be positive");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  } else if (!text.empty()) {
    for (auto p : split(text, ',')) grid.push_back(parse_double(p));
  }
  if (grid.empty()) throw std::invalid_argument("empty Eb/N0 grid");
  return grid;
}

void SimConfig::validate() const {
  if (block_length < 1) throw std::invalid_argument("block length must be at least 1");
  if (stop.min_bit_errors < 1) throw std::invalid_argument("min bit errors must be at least 1");
  if (stop.max_bits < 1) throw std::invalid_argument("max bits must be at least 1");
  if (ebn0_db.empty()) throw std::invalid_argument("empty Eb/N0 grid");
  if (receivers.empty()) throw std::invalid_argument("no receiver configured");
  if (labeling == Labeling::qam4) throw std::invalid_argument("qam4 is not simulated");
  if (sigma_override && *sigma_override < 0.0) throw std::invalid_argument("negative sigma override");
  log2_exact(m);
  parse_channel(channel);
  if (!is_uncoded(*this)) {
    if (parse_generators(std::string_view(generators)).n() != log2_exact(m)) {
      throw std::invalid_argument("code outputs per step must equal log2(M)");
    }
  }
}

std::uint64_t receiver_states(const ReceiverSpec& receiver, const SimConfig& cfg) {
  const auto taps = parse_channel(cfg.channel).taps;
  const int nu = is_uncoded(cfg) ? 0 : parse_generators(std::string_view(cfg.generators)).memory();
  const auto report = complexity_report(nu, taps.memory(), cfg.m);
  const std::uint64_t code_states = is_uncoded(cfg) ? 0 : report.z_enc;
  switch (receiver.kind) {
    case ReceiverKind::super_trellis: return is_uncoded(cfg) ? report.z_equ : report.z_std;
    case ReceiverKind::matched: return is_uncoded(cfg) ? report.z_equ : report.z_md;
    case ReceiverKind::matched_rsse: return std::uint64_t{1} << receiver.param;
    case ReceiverKind::dfse_va: {
      std::uint64_t s = 1;
      for (int i = 0; i < receiver.param; ++i) s *= static_cast<std::uint64_t>(cfg.m);
      return s + code_states;
    }
    case ReceiverKind::bcjr_va: return report.z_equ + code_states;
  }
  return 0;
}

std::vector<BerRecord> run_ber_point(const SimConfig& cfg, double ebn0_db, std::uint64_t stream) {
  cfg.validate();
  const Link link(cfg, ebn0_db);
  const std::uint64_t point_seed = splitmix64(cfg.base_seed ^ splitmix64(stream + 0x5eedULL));
  const std::size_t nrx = cfg.receivers.size();
  std::vector<BerRecord> records(nrx);
  std::vector<bool> done(nrx, false);
  for (std::size_t i = 0; i < nrx; ++i) {
    records[i].ebn0_db = ebn0_db;
    records[i].receiver = cfg.receivers[i].label();
    records[i].states = receiver_states(cfg.receivers[i], cfg);
    records[i].seed = point_seed;
  }

  const unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t next_block = 0;
  auto all_done = [&] { return std::all_of(done.begin(), done.end(), [](bool d) { return d; }); };

  // Blocks are evaluated in waves; results are merged in block order so the
  // stop rule sees the same sequence for any thread count.
  while (!all_done()) {
    const std::vector<bool> skip = done;
    auto run_block = [&link, &cfg, &skip, point_seed, nrx](std::uint64_t index) {
      const auto block = link.make_block(point_seed, index);
      std::vector<std::uint64_t> errors(nrx, 0);
      for (std::size_t i = 0; i < nrx; ++i) {
        if (skip[i]) continue;
        errors[i] = count_errors(block.info, link.decode(cfg.receivers[i], block.observed));
      }
      return errors;
    };
    std::vector<std::vector<std::uint64_t>> wave;
    if (threads == 1) {
      wave.push_back(run_block(next_block));
    } else {
      std::vector<std::future<std::vector<std::uint64_t>>> futures;
      for (unsigned t = 0; t < threads; ++t) futures.push_back(std::async(std::launch::async, run_block, next_block + t));
      for (auto& f : futures) wave.push_back(f.get());
    }
    next_block += wave.size();
    for (const auto& errors : wave) {
      for (std::size_t i = 0; i < nrx; ++i) {
        if (done[i]) continue;
        records[i].bits += static_cast<std::uint64_t>(link.info_bits);
        records[i].errors += errors[i];
        const bool enough = records[i].errors >= cfg.stop.min_bit_errors && records[i].bits >= cfg.stop.min_bits;
        if (enough || records[i].bits >= cfg.stop.max_bits) {
          done[i] = true;
        }
      }
    }
  }
  for (auto& r : records) r.ber = static_cast<double>(r.errors) / static_cast<double>(r.bits);
  return records;
}

SweepResult run_sweep(const SimConfig& cfg) {
  cfg.validate();
  SweepResult result;
  std::vector<bool> finished(cfg.receivers.size(), false);
  for (std::size_t p = 0; p < cfg.ebn0_db.size(); ++p) {
    SimConfig point_cfg = cfg;
    point_cfg.receivers.clear();
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < cfg.receivers.size(); ++i) {
      if (finished[i]) continue;
      point_cfg.receivers.push_back(cfg.receivers[i]);
      index.push_back(i);
    }
    if (index.empty()) break;
    auto records = run_ber_point(point_cfg, cfg.ebn0_db[p], p);
    for (std::size_t j = 0; j < records.size(); ++j) {
      if (cfg.stop_below_ber > 0.0 && records[j].ber < cfg.stop_below_ber) finished[index[j]] = true;
      result.records.push_back(std::move(records[j]));
    }
  }
  return result;
}

std::vector<BerRecord> SweepResult::for_receiver(std::string_view label) const {
  std::vector<BerRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const BerRecord& r) { return r.receiver == label; });
  return out;
}

double required_snr_at_ber(std::span<const BerRecord> records, double target) {
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("target BER must lie in (0, 1)");
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].receiver != records[0].receiver) {
      throw std::invalid_argument("required_snr_at_ber expects records of a single receiver");
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = records[i];
    if (a.ber == target) return a.ebn0_db;
    if (i + 1 == records.size()) break;
    const auto& b = records[i + 1];
    if (a.ber > target && b.ber < target && b.ber > 0.0) {
      const double la = std::log10(a.ber);
      const double lb = std::log10(b.ber);
      const double t = (std::log10(target) - la) / (lb - la);
      return a.ebn0_db + t * (b.ebn0_db - a.ebn0_db);
    }
  }
  throw std::out_of_range("target BER is not bracketed by the sweep");
}

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << "ebn0_db,receiver,states,bits,errors,ber,seed\n";
  std::ostringstream line;
  line << std::setprecision(17);
  for (const auto& r : result.records) {
    line.str("");
    line << r.ebn0_db << ',' << r.receiver << ',' << r.states << ',' << r.bits << ',' << r.errors << ','
         << r.ber << ',' << r.seed << '\n';
    out << line.str();
  }
  if (!out) throw std::runtime_error("failed writing CSV");
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_csv(result, file);
}

SweepResult parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "ebn0_db,receiver,states,bits,errors,ber,seed") {
    throw std::invalid_argument("unexpected CSV header");
  }
  auto to_u64 = [](std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad integer field");
    return v;
  };
  SweepResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 7) throw std::invalid_argument("CSV row must have 7 fields");
    BerRecord r;
    r.ebn0_db = parse_double(f[0]);
    r.receiver = std::string(f[1]);
    r.states = to_u64(f[2]);
    r.bits = to_u64(f[3]);
    r.errors = to_u64(f[4]);
    r.ber = parse_double(f[5]);
    r.seed = to_u64(f[6]);
    result.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace mdsim
