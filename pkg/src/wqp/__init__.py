"""Z_N-vertex elliptic R-matrix, W_{q,p} structure functions and residual
certification of the identities that relate them."""

from .errors import (
    ConvergenceError,
    DegenerateParameterError,
    DivergenceError,
    LegLimitError,
    NearPoleError,
    ParameterError,
    Refusal,
    SingularMatrixError,
    TruncationError,
    WqpError,
)
from .legs import LegMatrix, embed, partial_trace, partial_transpose
from .params import DEFAULT_REGION, LogParams, Region, SurfaceSpec, classical_tau, solve_surface_c
from .poisson import check_poisson_limit, f_h
from .report import CheckReport, residual
from .rmatrix import build_r, build_r_hat, build_r_tilde
from .runner import RunManifest, run_manifest, verify_quick
from .specfun import DEFAULT_TRUNC, TruncationPolicy, big_theta, kappa_inv, tau_n, theta_char
from .structfn import f_multi, f_struct, g_inverse, g_struct, y_multi, y_struct

__version__ = "0.1.0"
