"""Hot inner loops, with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time from ``CMBOUND_BACKEND``
(``numba``, the default, or ``numpy``). If numba cannot be imported the
numpy path is used silently. Both backends return identical results; the
test suite checks this and ``benchmarks/bench_kernels.py`` times them.
"""

from __future__ import annotations

import os

_requested = os.environ.get("CMBOUND_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"CMBOUND_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from cmbound.kernels import _numba as _impl
    except ImportError:  # pragma: no cover - numba is a declared dependency
        from cmbound.kernels import _numpy as _impl
else:
    from cmbound.kernels import _numpy as _impl

BACKEND = _impl.__name__.rsplit("._", 1)[-1]

disk_residue_hist = _impl.disk_residue_hist
classify_pairs = _impl.classify_pairs
pair_traces = _impl.pair_traces
legendre_table = _impl.legendre_table
prime_traces = _impl.prime_traces
group_closure = _impl.group_closure
rank_mod_p = _impl.rank_mod_p
nullspace_mod_p = _impl.nullspace_mod_p

__all__ = [
    "BACKEND",
    "disk_residue_hist",
    "classify_pairs",
    "pair_traces",
    "legendre_table",
    "prime_traces",
    "group_closure",
    "rank_mod_p",
    "nullspace_mod_p",
]
