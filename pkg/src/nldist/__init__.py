"""Simulation and distillation of binary-input, d-output nonsignaling boxes."""
from .boxes import (
    AffineDecomposition,
    Box,
    ValidationReport,
    basis,
    decompose_affine,
    make_box,
    make_ld_box,
    make_lc_box,
    make_mixed_box,
    make_nl_box,
    mix,
    validate_nonsignaling,
)
from .cglmp import CglmpReport, cglmp_value, correlator
from .distillation import (
    DistillationResult,
    Family,
    MixtureParams,
    NoisyParams,
    Protocol,
    build_mixture,
    build_noisy,
    distill_iterate,
    distill_noisy,
    distill_once,
    noisy_final_cglmp,
    predict_epsilon_a,
    predict_epsilon_b,
)
from .wiring import WiringSpec, comparator, comparator_wiring, wire

__version__ = "0.1.0"
