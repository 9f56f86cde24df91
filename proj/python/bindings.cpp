#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <sstream>

#include "mdsim/channel.hpp"
#include "mdsim/detect.hpp"
#include "mdsim/oracle.hpp"
#include "mdsim/sim.hpp"
#include "mdsim/trellis.hpp"

namespace py = pybind11;
using namespace mdsim;

namespace {

ChannelTaps channel_of(const std::string& spec) { return parse_channel(spec).taps; }

GeneratorSet gen_of(const std::string& text) { return parse_generators(std::string_view(text)); }

Trellis md_or_std(const std::string& gen, const std::string& channel, Labeling labeling, const std::string& kind) {
  if (kind == "md") return build_matched_trellis(gen_of(gen), channel_of(channel), labeling);
  if (kind == "std") return build_super_trellis(gen_of(gen), channel_of(channel), labeling);
  throw std::invalid_argument("trellis must be 'md' or 'std'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Matched decoding of coded M-ASK over ISI channels";

  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);

  py::enum_<Labeling>(m, "Labeling")
      .value("natural", Labeling::natural)
      .value("gray", Labeling::gray)
      .value("qam4", Labeling::qam4);

  py::class_<ComplexityReport>(m, "ComplexityReport")
      .def_readonly("z_enc", &ComplexityReport::z_enc)
      .def_readonly("z_equ", &ComplexityReport::z_equ)
      .def_readonly("z_separate", &ComplexityReport::z_separate)
      .def_readonly("z_std", &ComplexityReport::z_std)
      .def_readonly("z_md", &ComplexityReport::z_md)
      .def_readonly("gain_md", &ComplexityReport::gain_md);

  m.def("complexity_report", py::overload_cast<int, int, int>(&complexity_report), py::arg("nu"),
        py::arg("channel_memory"), py::arg("m") = 4);
  m.def(
      "complexity_report",
      [](const std::string& gen, const std::string& channel, int alphabet) {
        return complexity_report(gen_of(gen), channel_of(channel), alphabet);
      },
      py::arg("gen"), py::arg("channel"), py::arg("m") = 4);

  m.def(
      "example_channel",
      [](int memory) {
        const auto h = example_channel(memory);
        return std::vector<double>(h.taps().begin(), h.taps().end());
      },
      py::arg("memory"));
  m.def(
      "is_minimum_phase", [](const std::vector<double>& taps) { return is_minimum_phase(ChannelTaps(taps)); },
      py::arg("taps"));

  m.def(
      "transmit",
      [](const std::string& gen, const std::string& channel, Labeling labeling, const std::vector<int>& input) {
        const BitVector bits(input.begin(), input.end());
        return oracle::transmit(gen_of(gen), channel_of(channel), labeling, bits);
      },
      py::arg("gen"), py::arg("channel"), py::arg("labeling"), py::arg("input"));

  m.def(
      "matched_hypotheses",
      [](const std::string& gen, const std::string& channel, Labeling labeling) {
        const auto t = build_matched_trellis(gen_of(gen), channel_of(channel), labeling);
        std::vector<std::array<double, 2>> out(t.num_states());
        for (std::uint32_t s = 0; s < t.num_states(); ++s) out[s] = {t.hypothesis(s, 0), t.hypothesis(s, 1)};
        return out;
      },
      py::arg("gen"), py::arg("channel"), py::arg("labeling") = Labeling::natural);
  m.def(
      "matched_branch_output",
      [](const std::string& gen, const std::string& channel, Labeling labeling, std::uint32_t state, int u) {
        return oracle::matched_branch_output(gen_of(gen), channel_of(channel), labeling, state,
                                             static_cast<Bit>(u));
      },
      py::arg("gen"), py::arg("channel"), py::arg("labeling"), py::arg("state"), py::arg("u"));

  m.def(
      "viterbi_mlse",
      [](const std::string& gen, const std::string& channel, const std::vector<double>& r, Labeling labeling,
         const std::string& trellis, bool terminated) {
        const auto d = viterbi_mlse(md_or_std(gen, channel, labeling, trellis), r, terminated);
        return std::vector<int>(d.begin(), d.end());
      },
      py::arg("gen"), py::arg("channel"), py::arg("observations"), py::arg("labeling") = Labeling::natural,
      py::arg("trellis") = "md", py::arg("terminated") = true);
  m.def(
      "md_rsse_decode",
      [](const std::string& gen, const std::string& channel, int r, const std::vector<double>& obs,
         Labeling labeling, bool terminated) {
        const auto t = build_matched_trellis(gen_of(gen), channel_of(channel), labeling);
        const auto d = md_rsse_decode(t, RssePartition{r}, obs, terminated);
        return std::vector<int>(d.begin(), d.end());
      },
      py::arg("gen"), py::arg("channel"), py::arg("r"), py::arg("observations"),
      py::arg("labeling") = Labeling::natural, py::arg("terminated") = true);

  py::class_<BerRecord>(m, "BerRecord")
      .def_readonly("ebn0_db", &BerRecord::ebn0_db)
      .def_readonly("receiver", &BerRecord::receiver)
      .def_readonly("states", &BerRecord::states)
      .def_readonly("bits", &BerRecord::bits)
      .def_readonly("errors", &BerRecord::errors)
      .def_readonly("ber", &BerRecord::ber)
      .def_readonly("seed", &BerRecord::seed)
      .def("__repr__", [](const BerRecord& r) {
        std::ostringstream s;
        s << "BerRecord(ebn0_db=" << r.ebn0_db << ", receiver='" << r.receiver << "', bits=" << r.bits
          << ", errors=" << r.errors << ", ber=" << r.ber << ")";
        return s.str();
      });

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("generators", &SimConfig::generators)
      .def_readwrite("channel", &SimConfig::channel)
      .def_readwrite("labeling", &SimConfig::labeling)
      .def_readwrite("m", &SimConfig::m)
      .def_property(
          "receivers",
          [](const SimConfig& c) {
            std::vector<std::string> out;
            for (const auto& r : c.receivers) out.push_back(r.label());
            return out;
          },
          [](SimConfig& c, const std::vector<std::string>& tokens) {
            c.receivers.clear();
            for (const auto& t : tokens) c.receivers.push_back(ReceiverSpec::parse(t));
          })
      .def_readwrite("ebn0_db", &SimConfig::ebn0_db)
      .def_readwrite("block_length", &SimConfig::block_length)
      .def_property(
          "min_bit_errors", [](const SimConfig& c) { return c.stop.min_bit_errors; },
          [](SimConfig& c, std::uint64_t v) { c.stop.min_bit_errors = v; })
      .def_property(
          "max_bits", [](const SimConfig& c) { return c.stop.max_bits; },
          [](SimConfig& c, std::uint64_t v) { c.stop.max_bits = v; })
      .def_property(
          "min_bits", [](const SimConfig& c) { return c.stop.min_bits; },
          [](SimConfig& c, std::uint64_t v) { c.stop.min_bits = v; })
      .def_readwrite("base_seed", &SimConfig::base_seed)
      .def_readwrite("sigma_override", &SimConfig::sigma_override)
      .def_readwrite("stop_below_ber", &SimConfig::stop_below_ber)
      .def_readwrite("threads", &SimConfig::threads)
      .def("validate", &SimConfig::validate);

  m.def("run_ber_point", &run_ber_point, py::arg("config"), py::arg("ebn0_db"), py::arg("stream") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_sweep", [](const SimConfig& cfg) { return run_sweep(cfg).records; }, py::arg("config"),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "required_snr_at_ber",
      [](const std::vector<BerRecord>& records, double target) { return required_snr_at_ber(records, target); },
      py::arg("records"), py::arg("target"));

  m.def("uncoded_ask_ber", &oracle::uncoded_ask_ber, py::arg("ebn0_db"), py::arg("m") = 4,
        py::arg("labeling") = Labeling::natural);
  m.def(
      "verify",
      [](std::uint64_t seed, int trials) {
        std::ostringstream log;
        const bool ok = oracle::run_verification_suite(seed, trials, log);
        return py::make_tuple(ok, log.str());
      },
      py::arg("seed") = 1, py::arg("trials") = 10);
}
