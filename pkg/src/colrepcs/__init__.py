"""Deterministic compressive-sensing matrices built from linear codes by column replacement."""
from .codes import Codebook, LinearCode, enumerate_codewords, rs2_generator
from .colrep import PatternMatrix, column_replace, theorem2_construct
from .galois import GF, FieldElement, FieldSpec
from .recovery import ExperimentConfig, omp, run_recovery_vs_sparsity, run_snr_sweep
from .resize import (
    compare_vs_kronecker,
    construct_example3,
    construct_example4,
    kronecker,
    resize_theorem4,
)
from .sensing import (
    SensingMatrix,
    coherence,
    construct_example1,
    construct_example2,
    welch_bound,
)

__version__ = "0.1.0"
