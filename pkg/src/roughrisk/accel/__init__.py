"""Backend selection for the numerical kernels.

The numba JIT backend is used by default whenever numba imports cleanly.
Set ROUGHRISK_BACKEND=numpy (or =numba) before the first import to force
a backend; `BACKEND` records which one actually loaded.
"""

import importlib
import os

import numpy as np

ENV_VAR = "ROUGHRISK_BACKEND"
_NAMES = ("numba", "numpy")


def get_backend(name):
    """Import and return a kernel backend module by name."""
    if name not in _NAMES:
        raise ValueError(f"unknown backend {name!r}; expected one of {_NAMES}")
    return importlib.import_module(f"{__name__}._{name}_impl")


_requested = os.environ.get(ENV_VAR, "numba").strip().lower()
if _requested not in _NAMES:
    raise ImportError(f"{ENV_VAR} must be one of {_NAMES}, got {_requested!r}")
try:
    _impl = get_backend(_requested)
    BACKEND = _requested
except ImportError:
    if _requested == "numpy":
        raise
    _impl = get_backend("numpy")
    BACKEND = "numpy"

factorize1d = _impl.factorize1d
contingency = _impl.contingency
quality_numerator = _impl.quality_numerator
similarity_matrix = _impl.similarity_matrix

# keys must stay below this to be mixed-radix packed without overflow
_PACK_LIMIT = 1 << 62


def row_codes(values, columns):
    """Group rows of an int64 matrix by the given columns.

    Returns (codes, n_groups) with dense group codes numbered in
    first-occurrence order, which keeps every downstream float
    accumulation order canonical. An empty column selection puts all
    rows in one group.
    """
    n = values.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64), 0
    if len(columns) == 0:
        return np.zeros(n, dtype=np.int64), 1
    key = None
    cap = 1
    for c in columns:
        col = np.ascontiguousarray(values[:, c], dtype=np.int64)
        radix = int(col.max()) + 1
        if key is None:
            key, cap = col, radix
            continue
        if cap > _PACK_LIMIT // radix:
            # compress before the radix product can overflow int64
            key, cap = factorize1d(key)
        key = key * radix + col
        cap = cap * radix
    return factorize1d(key)


def warmup():
    """Run every kernel once on tiny inputs to absorb JIT compile time."""
    keys = np.array([3, 1, 3, 2], dtype=np.int64)
    codes, n_groups = factorize1d(keys)
    dec = np.array([0, 1, 0, 1], dtype=np.int64)
    cont = contingency(codes, n_groups, dec, 2)
    quality_numerator(cont, np.arange(5, dtype=np.int64))
    similarity_matrix(
        np.zeros((2, 2), dtype=np.int64),
        np.ones((1, 2), dtype=np.int64),
        np.full(2, 0.5),
        np.array([2, 0], dtype=np.int64),
    )
    row_codes(np.array([[1, 0], [1, 1]], dtype=np.int64), (0, 1))
