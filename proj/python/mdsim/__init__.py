"""Matched decoding of coded M-ASK over ISI channels."""

from ._core import (
    BerRecord,
    ComplexityReport,
    Labeling,
    SimConfig,
    complexity_report,
    example_channel,
    is_minimum_phase,
    matched_branch_output,
    md_rsse_decode,
    matched_hypotheses,
    required_snr_at_ber,
    run_ber_point,
    run_sweep,
    transmit,
    uncoded_ask_ber,
    verify,
    viterbi_mlse,
)

__all__ = [
    "BerRecord",
    "ComplexityReport",
    "Labeling",
    "SimConfig",
    "complexity_report",
    "example_channel",
    "is_minimum_phase",
    "matched_branch_output",
    "matched_hypotheses",
    "md_rsse_decode",
    "required_snr_at_ber",
    "run_ber_point",
    "run_sweep",
    "transmit",
    "uncoded_ask_ber",
    "verify",
    "viterbi_mlse",
]
