"""Power-series Schur-complement low-rank preconditioning for saddle-point systems."""

from .baselines import AdiConfig, adi_solve, jacobi_inverse, rcm_order
from .bench import BenchConfig, emit_spectrum, run_bench
from .errors import (
    ConfigError,
    CorrectionSingular,
    DimensionError,
    InvalidInput,
    MatrixIOError,
    ParseError,
    PivotBreakdown,
    PslrError,
    SingularMatrix,
    UnsupportedFormat,
)
from .factor import Factorization, FactorKind, apply_inverse, factor_dense, factorize, ic0, ilu0
from .generators import gen_banded, gen_example1, gen_random_saddle
from .krylov import LinearOperator, SolveReport, Status, arnoldi, cg, gmres, pcg
from .mmio import mm_read, mm_write
from .precond import (
    PslrPreconditioner,
    apply_pslr,
    build_pslr,
    error_diagnostics,
    pinv_solve,
    woodbury_correction,
)
from .saddle import SaddleSystem, Sign, assemble_saddle
from .sparse import CsrMatrix, from_coo, from_dense, spmv

__version__ = "0.1.0"
