#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mdsim/oracle.hpp"
#include "mdsim/sim.hpp"

using namespace mdsim;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.generators = "23,04";
  cfg.channel = "example:2";
  cfg.block_length = 500;
  cfg.stop = {50, 20'000};
  cfg.ebn0_db = {6.0};
  cfg.threads = 1;
  return cfg;
}

double binomial_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST_CASE("receiver tokens") {
  CHECK(ReceiverSpec::parse("std").kind == ReceiverKind::super_trellis);
  CHECK(ReceiverSpec::parse("md").kind == ReceiverKind::matched);
  CHECK(ReceiverSpec::parse("md-rsse:3") == ReceiverSpec{ReceiverKind::matched_rsse, 3});
  CHECK(ReceiverSpec::parse("dfse:1+va") == ReceiverSpec{ReceiverKind::dfse_va, 1});
  CHECK(ReceiverSpec::parse("bcjr+va").kind == ReceiverKind::bcjr_va);
  for (auto t : {"std", "md", "md-rsse:3", "dfse:2+va", "bcjr+va"}) CHECK(ReceiverSpec::parse(t).label() == t);
  CHECK_THROWS_AS(ReceiverSpec::parse("dfse:1"), std::invalid_argument);
  CHECK_THROWS_AS(ReceiverSpec::parse("md-rsse:x"), std::invalid_argument);
  CHECK_THROWS_AS(ReceiverSpec::parse("turbo"), std::invalid_argument);
}

TEST_CASE("Eb/N0 grid parsing") {
  CHECK(parse_ebn0_grid("4:1:6") == std::vector<double>{4, 5, 6});
  CHECK(parse_ebn0_grid("1,2.5") == std::vector<double>{1, 2.5});
  CHECK(parse_ebn0_grid("2:0.5:3").size() == 3);
  CHECK_THROWS_AS(parse_ebn0_grid(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_ebn0_grid("1:0:3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ebn0_grid("1:3"), std::invalid_argument);
}

TEST_CASE("config validation") {
  auto cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.ebn0_db.clear();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.block_length = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.stop.min_bit_errors = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.generators = "5,7,7";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.receivers = {ReceiverSpec{ReceiverKind::matched_rsse, 9}};
  CHECK_THROWS_AS(run_ber_point(cfg, 5.0), std::invalid_argument);
  cfg = small_config();
  cfg.receivers = {ReceiverSpec{ReceiverKind::super_trellis, 0}};
  cfg.state_budget = 100;
  CHECK_THROWS_AS(run_ber_point(cfg, 5.0), CapacityError);
}

TEST_CASE("receiver state counts") {
  auto cfg = small_config();
  CHECK(receiver_states(ReceiverSpec::parse("std"), cfg) == 256);
  CHECK(receiver_states(ReceiverSpec::parse("md"), cfg) == 64);
  CHECK(receiver_states(ReceiverSpec::parse("md-rsse:2"), cfg) == 4);
  CHECK(receiver_states(ReceiverSpec::parse("dfse:1+va"), cfg) == 4 + 16);
  CHECK(receiver_states(ReceiverSpec::parse("dfse:2+va"), cfg) == 16 + 16);
  CHECK(receiver_states(ReceiverSpec::parse("bcjr+va"), cfg) == 16 + 16);
}

TEST_CASE("noiseless links are error free for every receiver") {
  auto cfg = small_config();
  cfg.sigma_override = 0.0;
  cfg.stop = {1, 2'000};
  cfg.receivers.clear();
  for (auto t : {"std", "md", "md-rsse:1", "md-rsse:2", "md-rsse:4", "dfse:0+va", "dfse:1+va", "dfse:2+va", "bcjr+va"}) {
    cfg.receivers.push_back(ReceiverSpec::parse(t));
  }
  for (const auto& r : run_ber_point(cfg, 8.0)) {
    CHECK_MESSAGE(r.errors == 0, r.receiver);
    CHECK(r.bits >= 2'000);
  }
}

TEST_CASE("uncoded 4-ASK matches the closed form") {
  SimConfig cfg;
  cfg.generators = "uncoded";
  cfg.channel = "example:0";
  cfg.receivers = {ReceiverSpec::parse("md")};
  cfg.block_length = 10'000;
  cfg.stop = {2'000, 2'000'000};
  cfg.ebn0_db = {6.0, 10.0};
  cfg.threads = 1;
  for (double ebn0 : {6.0, 10.0}) {
    const auto r = run_ber_point(cfg, ebn0);
    const double p = oracle::uncoded_ask_ber(ebn0, 4, Labeling::natural);
    CHECK_MESSAGE(std::abs(r[0].ber - p) <= 3.0 * binomial_sigma(p, static_cast<double>(r[0].bits)),
                  "ebn0 " << ebn0 << " measured " << r[0].ber << " expected " << p);
  }
}

TEST_CASE("closed-form 4-ASK BER sanity") {
  // Gray 4-ASK at high SNR approaches (3/4) Q(sqrt(4/5 Eb/N0)); natural
  // labeling flips two bits on the middle decision boundary.
  const double ebn0 = 14.0;
  const double g = std::pow(10.0, ebn0 / 10.0);
  const double textbook = 0.75 * 0.5 * std::erfc(std::sqrt(0.8 * g) / std::sqrt(2.0));
  CHECK(oracle::uncoded_ask_ber(ebn0, 4, Labeling::gray) == doctest::Approx(textbook).epsilon(1e-3));
  CHECK(oracle::uncoded_ask_ber(ebn0, 4, Labeling::natural) > oracle::uncoded_ask_ber(ebn0, 4, Labeling::gray));
}

TEST_CASE("MD and STD count identical errors on paired noise") {
  auto cfg = small_config();
  cfg.receivers = {ReceiverSpec::parse("md"), ReceiverSpec::parse("std")};
  cfg.stop = {1'000'000, 20'000};
  for (double ebn0 : {4.0, 6.0}) {
    auto r = run_ber_point(cfg, ebn0);
    CHECK(r[0].bits == r[1].bits);
    CHECK(r[0].errors == r[1].errors);
    CHECK(r[0].errors > 0);
  }
}

TEST_CASE("sweeps are reproducible and independent of thread count") {
  auto cfg = small_config();
  cfg.receivers = {ReceiverSpec::parse("md"), ReceiverSpec::parse("md-rsse:2")};
  cfg.ebn0_db = {5.0, 7.0};
  auto a = run_sweep(cfg);
  auto b = run_sweep(cfg);
  CHECK(a.records == b.records);
  cfg.threads = 3;
  CHECK(run_sweep(cfg).records == a.records);
  cfg.base_seed = 2;
  CHECK(run_sweep(cfg).records != a.records);
  REQUIRE(a.records.size() == 4);
  CHECK(a.records[0].seed != a.records[2].seed);
  for (const auto& r : a.records) CHECK(r.ber == doctest::Approx(static_cast<double>(r.errors) / r.bits));
}

TEST_CASE("BER decreases with Eb/N0") {
  auto cfg = small_config();
  cfg.ebn0_db = {3.0, 5.0, 7.0};
  cfg.stop = {100, 200'000};
  auto result = run_sweep(cfg);
  for (std::size_t i = 1; i < result.records.size(); ++i) {
    const auto& a = result.records[i - 1];
    const auto& b = result.records[i];
    const double slack = 2.0 * (binomial_sigma(a.ber, a.bits) + binomial_sigma(b.ber, b.bits));
    CHECK(b.ber <= a.ber + slack);
  }
}

TEST_CASE("MD-RSSE improves with more states") {
  auto cfg = small_config();
  cfg.receivers.clear();
  for (int r = 2; r <= 6; ++r) cfg.receivers.push_back(ReceiverSpec{ReceiverKind::matched_rsse, r});
  cfg.stop = {400, 400'000};
  cfg.block_length = 2'000;
  const auto records = run_ber_point(cfg, 8.0);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    const double slack = 2.0 * (binomial_sigma(a.ber, a.bits) + binomial_sigma(b.ber, b.bits));
    CHECK_MESSAGE(b.ber <= a.ber + slack, a.receiver << " " << a.ber << " vs " << b.receiver << " " << b.ber);
  }
}

TEST_CASE("stop-below-ber skips the remaining points of a receiver") {
  auto cfg = small_config();
  cfg.receivers = {ReceiverSpec::parse("md")};
  cfg.sigma_override = 0.0;
  cfg.stop = {1, 1'000};
  cfg.ebn0_db = {1.0, 2.0, 3.0};
  cfg.stop_below_ber = 1e-3;
  CHECK(run_sweep(cfg).records.size() == 1);
}

TEST_CASE("required SNR interpolation") {
  auto rec = [](double db, double ber) {
    BerRecord r;
    r.ebn0_db = db;
    r.receiver = "md";
    r.ber = ber;
    return r;
  };
  std::vector<BerRecord> pts{rec(6.0, 2e-3), rec(7.0, 5e-4)};
  // log10(1e-3) sits at (log 2e-3 - log 1e-3) / (log 2e-3 - log 5e-4) = 0.5 of the way.
  CHECK(required_snr_at_ber(pts, 1e-3) == doctest::Approx(6.5).epsilon(1e-12));
  CHECK(required_snr_at_ber(pts, 2e-3) == 6.0);
  CHECK_THROWS_AS(required_snr_at_ber(pts, 1e-5), std::out_of_range);
  CHECK_THROWS_AS(required_snr_at_ber(pts, 1e-1), std::out_of_range);
  pts.push_back(rec(8.0, 1e-5));
  pts[2].receiver = "std";
  CHECK_THROWS_AS(required_snr_at_ber(pts, 1e-3), std::invalid_argument);
}

TEST_CASE("CSV output") {
  SweepResult empty;
  std::ostringstream out;
  emit_csv(empty, out);
  CHECK(out.str() == "ebn0_db,receiver,states,bits,errors,ber,seed\n");

  auto cfg = small_config();
  cfg.ebn0_db = {4.0, 5.5};
  cfg.receivers = {ReceiverSpec::parse("dfse:1+va")};
  auto result = run_sweep(cfg);
  std::ostringstream two;
  emit_csv(result, two);
  const auto text = two.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);

  std::istringstream in(text);
  CHECK(parse_csv(in).records == result.records);

  std::istringstream bad("nope\n");
  CHECK_THROWS_AS(parse_csv(bad), std::invalid_argument);
  CHECK_THROWS_AS(emit_csv(result, std::string("/nonexistent/dir/out.csv")), std::runtime_error);
}

TEST_CASE("transmitted symbol energy") {
  std::mt19937_64 rng(21);
  auto g = parse_generators(std::string_view("23,04"));
  BitVector input(200'000);
  for (auto& b : input) b = rng() & 1u;
  auto x = oracle::transmit(g, example_channel(0), Labeling::natural, input);
  double e = 0.0;
  for (double v : x) e += v * v;
  e /= static_cast<double>(x.size());
  CHECK(std::abs(e - 5.0) / 5.0 < 0.01);
}

TEST_CASE("min_bits keeps a point running past the error count") {
  auto cfg = small_config();
  cfg.receivers = {ReceiverSpec::parse("md-rsse:1")};
  cfg.stop = {1, 1'000'000};
  CHECK(run_ber_point(cfg, 3.0)[0].bits == 500);
  cfg.stop.min_bits = 5'000;
  CHECK(run_ber_point(cfg, 3.0)[0].bits == 5'000);
}
