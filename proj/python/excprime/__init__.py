"""Exceptional-prime scanner for elliptic curves over Q.

Thin wrapper over the C++ core: trace tables by exhaustive point counting,
witness-based mod-ell image classification, the explicit bound ladder, and
the least-prime lab for quadratic fields.
"""

from ._core import (
    InputError,
    InternalError,
    adams12,
    analyze,
    bounds_report,
    cheb_sweep,
    compare,
    count_points,
    curve_invariants,
    gl2_selftest,
    kronecker,
    least_prime_quadratic,
    trace_table,
)

__all__ = [
    "InputError",
    "InternalError",
    "adams12",
    "analyze",
    "bounds_report",
    "cheb_sweep",
    "compare",
    "count_points",
    "curve_invariants",
    "gl2_selftest",
    "kronecker",
    "least_prime_quadratic",
    "trace_table",
]

__version__ = "0.1.0"
