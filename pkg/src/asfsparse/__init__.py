"""Sparse-recovery certificates for finite 1-approximate Schauder frames."""

from .frames import (CoherenceCertificate, FramePair, certify, coherence, cross_gram,
                     from_hilbert_frame, mercedes_benz, random_pair, sparsity_threshold)
from .lp import LinearProgram, LpOutcome, lp_oracle_enumerate, solve_lp
from .nsp import (NspReport, counterexample_from_witness, nsp_check, nsp_support_ratio,
                  null_space_basis)
from .solvers import SparseSolution, solve_l0, solve_l1, solve_on_support

__version__ = "0.1.0"
