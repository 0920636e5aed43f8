"""Abel-Goncharov polynomials, root-moment identities and root-sharing analysis."""

from __future__ import annotations

__version__ = "0.1.0"

from .analysis import CAReport, ca_check, prop6_bound, prop6_constant, prop9_report, shared_roots, triviality_check
from .explorer import SampleConfig, SearchConfig, ca_search, nelder_mead, schoenberg_experiment
from .goncharov import (
    HessenbergMatrix,
    NodeSequence,
    SupportPattern,
    bound_classical,
    bound_tight,
    compressed_det,
    goncharov_expand,
    goncharov_integral,
    goncharov_levinson,
    goncharov_recurrence,
    hessenberg_det,
    levinson_H,
    levinson_matrix,
    s1_nonvanishing,
)
from .identities import (
    IdentityReport,
    centroid,
    derivative_separation,
    hoppe_log_derivative,
    laguerre_check,
    log_deriv_roots,
    moment_identity,
    newton_like_aggregate,
    rectilinearity,
    schoenberg_gap,
    sz_nagy_check,
    viete_check,
)
from .numeric import (
    ComplexFloat,
    DomainError,
    ExactnessError,
    GaussianRational,
    InvariantViolation,
    NumericError,
    ScalarParseError,
    Tolerance,
    approx_eq,
    parse_scalar,
    render,
)
from .poly import Poly, RootMultiset, derivative, eval_poly, root_multiset, roots_numeric
from .serialize import RunManifest, load_poly_json, write_report
from .sweeps import sweep

__all__ = [name for name in dir() if not name.startswith("_")]
