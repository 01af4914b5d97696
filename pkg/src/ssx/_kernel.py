"""Enumeration kernel selection.

The compiled kernel is used when it imports; ``SSX_PURE_PYTHON=1`` forces the
pure-Python fallback. Both take an integer Gram matrix and an integer bound.
"""
import os

import numpy as np

from . import _enum_py

try:
    if os.environ.get("SSX_PURE_PYTHON") == "1":
        raise ImportError("pure Python requested")
    from . import _enum_ext
except ImportError:
    _enum_ext = None

BACKEND = "cython" if _enum_ext is not None else "python"


class CellLimitExceeded(Exception):
    pass


def enumerate_python(gram, bound, cell_limit):
    try:
        return _enum_py.enumerate_short(gram, bound, cell_limit)
    except _enum_py.CellLimitExceeded as exc:
        raise CellLimitExceeded(str(exc)) from exc


def enumerate_compiled(gram, bound, cell_limit):
    if _enum_ext is None:
        raise RuntimeError("compiled kernel not built")
    d, mu = _enum_py.ldl(gram)
    n = len(gram)
    G = np.array(gram, dtype=np.int64)
    dd = np.array([float(x) for x in d])
    mm = np.array([[float(mu[i][j]) for j in range(n)] for i in range(n)])
    try:
        return _enum_ext.enumerate_short(G, int(bound), dd, mm, int(cell_limit))
    except _enum_ext.CellLimitExceeded as exc:
        raise CellLimitExceeded(str(exc)) from exc


def enumerate_short(gram, bound, cell_limit=10**8, backend=None):
    """Nonzero integer vectors with ``x^T G x <= bound`` (unsorted tuples)."""
    backend = backend or BACKEND
    if backend == "cython":
        return enumerate_compiled(gram, bound, cell_limit)
    return enumerate_python(gram, bound, cell_limit)
