// mdsim: BER sweeps, state-count tables and oracle checks for joint
// equalization and decoding of coded M-ASK over ISI channels.
//
//   mdsim sweep --gen 23,04 --channel example:2 --receiver md,md-rsse:2 --ebn0 4:0.5:9
//   mdsim complexity --gen 23,04 --channel example:2
//   mdsim verify

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

#include "mdsim/channel.hpp"
#include "mdsim/convcode.hpp"
#include "mdsim/oracle.hpp"
#include "mdsim/sim.hpp"
#include "mdsim/trellis.hpp"

namespace {

std::vector<mdsim::ReceiverSpec> parse_receivers(const std::string& text) {
  std::vector<mdsim::ReceiverSpec> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(mdsim::ReceiverSpec::parse(token));
  }
  return out;
}

int run_sweep_command(const std::string& gen, const std::string& channel, const std::string& labeling,
                      int m, const std::string& receivers, const std::string& ebn0, double target_ber,
                      std::uint64_t seed, const std::string& out_path, int block_length,
                      std::uint64_t min_errors, std::uint64_t max_bits, std::uint64_t min_bits, unsigned threads,
                      double sigma_override, double stop_ber) {
  mdsim::SimConfig cfg;
  cfg.generators = gen;
  cfg.channel = channel;
  cfg.labeling = mdsim::parse_labeling(labeling);
  cfg.m = m;
  cfg.receivers = parse_receivers(receivers);
  cfg.ebn0_db = mdsim::parse_ebn0_grid(ebn0);
  cfg.block_length = block_length;
  cfg.stop = {min_errors, max_bits, min_bits};
  cfg.base_seed = seed;
  cfg.threads = threads;
  cfg.stop_below_ber = stop_ber;
  if (sigma_override >= 0.0) cfg.sigma_override = sigma_override;

  if (auto parsed = mdsim::parse_channel(channel); parsed.warning) {
    std::cerr << "warning: " << *parsed.warning << '\n';
  }
  if (!mdsim::is_minimum_phase(mdsim::parse_channel(channel).taps)) {
    std::cerr << "warning: channel is not minimum phase; decision feedback receivers will suffer\n";
  }
  cfg.validate();

  const auto result = mdsim::run_sweep(cfg);
  std::cout << std::setw(9) << "Eb/N0" << std::setw(14) << "receiver" << std::setw(9) << "states"
            << std::setw(12) << "bits" << std::setw(9) << "errors" << std::setw(14) << "BER" << '\n';
  for (const auto& r : result.records) {
    std::cout << std::fixed << std::setprecision(2) << std::setw(9) << r.ebn0_db << std::setw(14) << r.receiver
              << std::setw(9) << r.states << std::setw(12) << r.bits << std::setw(9) << r.errors
              << std::scientific << std::setprecision(3) << std::setw(14) << r.ber << '\n';
  }
  std::cout << std::defaultfloat;
  if (target_ber > 0.0) {
    for (const auto& rx : cfg.receivers) {
      const auto records = result.for_receiver(rx.label());
      std::cout << "required Eb/N0 at BER " << target_ber << " for " << rx.label() << ": ";
      try {
        std::cout << std::fixed << std::setprecision(2) << mdsim::required_snr_at_ber(records, target_ber)
                  << " dB\n";
      } catch (const std::out_of_range&) {
        std::cout << "not bracketed\n";
      }
      std::cout << std::defaultfloat;
    }
  }
  if (!out_path.empty()) mdsim::emit_csv(result, out_path);
  return 0;
}

int run_complexity_command(const std::string& gen_text, const std::string& channel, int m, bool csv) {
  const auto gen = mdsim::parse_generators(std::string_view(gen_text));
  const auto taps = mdsim::parse_channel(channel).taps;
  const auto r = mdsim::complexity_report(gen, taps, m);
  if (csv) {
    std::cout << "nu,L,M,z_enc,z_equ,z_separate,z_std,z_md,gain_md\n"
              << gen.memory() << ',' << taps.memory() << ',' << m << ',' << r.z_enc << ',' << r.z_equ << ','
              << r.z_separate << ',' << r.z_std << ',' << r.z_md << ',' << r.gain_md << '\n';
    return 0;
  }
  std::cout << "encoder [";
  for (int i = 0; i < gen.n(); ++i) std::cout << (i ? "; " : "") << gen.octal(i);
  std::cout << "]  nu=" << gen.memory() << "  L=" << taps.memory() << "  M=" << m << '\n';
  auto row = [](const char* name, std::uint64_t v) {
    std::cout << "  " << std::left << std::setw(12) << name << std::right << std::setw(12) << v << '\n';
  };
  row("Z_enc", r.z_enc);
  row("Z_equ", r.z_equ);
  row("Z_separate", r.z_separate);
  row("Z_STD", r.z_std);
  row("Z_MD", r.z_md);
  row("G_MD", r.gain_md);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matched decoding simulator for coded M-ASK over ISI channels"};
  app.require_subcommand(1);

  std::string gen = "23,04";
  std::string channel = "example:2";
  std::string labeling = "natural";
  int m = 4;
  std::string receivers = "md";
  std::string ebn0 = "4:1:12";
  double target_ber = 0.0;
  std::uint64_t seed = 1;
  std::string out_path;
  int block_length = 10'000;
  std::uint64_t min_errors = 200;
  std::uint64_t max_bits = 20'000'000;
  std::uint64_t min_bits = 0;
  unsigned threads = 0;
  double sigma_override = -1.0;
  double stop_ber = 0.0;

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo BER sweep over Eb/N0");
  sweep->add_option("--gen", gen, "octal generators, comma separated, or 'uncoded'")->capture_default_str();
  sweep->add_option("--channel", channel, "example:L or comma separated taps")->capture_default_str();
  sweep->add_option("--labeling", labeling, "natural | gray")->capture_default_str();
  sweep->add_option("-M,--alphabet", m, "ASK alphabet size")->capture_default_str();
  sweep->add_option("--receiver", receivers,
                    "comma separated: std | md | md-rsse:<r> | dfse:<q_h>+va | bcjr+va")
      ->capture_default_str();
  sweep->add_option("--ebn0", ebn0, "start:step:stop in dB, or a comma separated list")->capture_default_str();
  sweep->add_option("--target-ber", target_ber, "report required Eb/N0 at this BER");
  sweep->add_option("--seed", seed, "base seed")->capture_default_str();
  sweep->add_option("--out", out_path, "CSV output path");
  sweep->add_option("--block-length", block_length, "information bits per block")->capture_default_str();
  sweep->add_option("--min-errors", min_errors, "stop a point after this many bit errors")->capture_default_str();
  sweep->add_option("--max-bits", max_bits, "stop a point after this many bits")->capture_default_str();
  sweep->add_option("--min-bits", min_bits, "bits a point needs before the error count can stop it")
      ->capture_default_str();
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
  sweep->add_option("--sigma-override", sigma_override, "diagnostic: channel noise deviation");
  sweep->add_option("--stop-ber", stop_ber, "skip a receiver's remaining points once BER falls below");

  bool csv = false;
  auto* complexity = app.add_subcommand("complexity", "print receiver state counts");
  complexity->add_option("--gen", gen, "octal generators")->capture_default_str();
  complexity->add_option("--channel", channel, "example:L or comma separated taps")->capture_default_str();
  complexity->add_option("-M,--alphabet", m, "ASK alphabet size")->capture_default_str();
  complexity->add_flag("--csv", csv, "CSV output");

  int trials = 20;
  auto* verify = app.add_subcommand("verify", "run the exhaustive-search equivalence checks");
  verify->add_option("--seed", seed, "seed")->capture_default_str();
  verify->add_option("--trials", trials, "random trials per check")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      return run_sweep_command(gen, channel, labeling, m, receivers, ebn0, target_ber, seed, out_path,
                               block_length, min_errors, max_bits, min_bits, threads, sigma_override, stop_ber);
    }
    if (complexity->parsed()) return run_complexity_command(gen, channel, m, csv);
    if (verify->parsed()) return mdsim::oracle::run_verification_suite(seed, trials, std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
