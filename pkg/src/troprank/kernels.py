"""Backend selection and integer encoding for the assignment kernels.

The hot path (tangible-permanent tests inside submatrix sweeps) runs on one
of two interchangeable backends:

* ``troprank._kernels`` — Cython, int64 costs, selected when importable;
* ``troprank._kernels_py`` — pure Python, arbitrary-precision costs.

Set ``TROPRANK_PURE=1`` to force the pure backend.  Matrices whose scaled
integer costs do not fit comfortably in int64 (or exceed 64 rows/columns)
are routed to the pure backend automatically, so exactness never depends on
the compiled path.

``TROP_THREADS`` caps the parallelism of the submatrix sweeps (default 1).
The compiled kernel releases the GIL, so threads give real speedup there.
"""

from __future__ import annotations

import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import gcd

from .semiring import Scalar

from . import _kernels_py

if os.environ.get("TROPRANK_PURE"):
    _impl = None
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = None

HAVE_COMPILED = _impl is not None
BACKEND = "compiled" if HAVE_COMPILED else "pure"

_MAX_COMPILED_DIM = 64
_MAX_COMPILED_COST = 1 << 40


def thread_count(explicit=None) -> int:
    """Resolve the worker count: explicit argument, else TROP_THREADS, else 1."""
    raw = explicit if explicit is not None else os.environ.get("TROP_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except (TypeError, ValueError):
        print(f"troprank: ignoring unparsable TROP_THREADS={raw!r}", file=sys.stderr)
        return 1
    if value < 1:
        print(f"troprank: ignoring non-positive TROP_THREADS={raw!r}", file=sys.stderr)
        return 1
    return value


class EncodedMatrix:
    """A matrix flattened to integer grids shared by both backends.

    Finite values are scaled by the least common multiple of their
    denominators, so every submatrix sees consistent integer costs and the
    assignment optimum is exact.
    """

    __slots__ = ("nrows", "ncols", "cost", "fin", "tang", "scale", "compiled_ok",
                 "_np_cost", "_np_fin", "_np_tang")

    def __init__(self, nrows, ncols, cost, fin, tang, scale, compiled_ok):
        self.nrows = nrows
        self.ncols = ncols
        self.cost = cost
        self.fin = fin
        self.tang = tang
        self.scale = scale
        self.compiled_ok = compiled_ok
        self._np_cost = None
        self._np_fin = None
        self._np_tang = None

    def _np_views(self):
        if self._np_cost is None:
            import numpy as np

            self._np_cost = np.array(self.cost, dtype=np.int64).reshape(self.nrows, self.ncols)
            self._np_fin = np.array(self.fin, dtype=np.uint8).reshape(self.nrows, self.ncols)
            self._np_tang = np.array(self.tang, dtype=np.uint8).reshape(self.nrows, self.ncols)
        return self._np_cost, self._np_fin, self._np_tang


def encode(entries) -> EncodedMatrix:
    """Encode a grid of :class:`~troprank.semiring.Scalar` for the kernels."""
    nrows = len(entries)
    ncols = len(entries[0]) if nrows else 0
    scale = 1
    for row in entries:
        for s in row:
            if s.value is not None:
                scale = scale // gcd(scale, s.value.denominator) * s.value.denominator
    cost = []
    fin = []
    tang = []
    biggest = 0
    for row in entries:
        crow, frow, trow = [], [], []
        for s in row:
            if s.value is None:
                crow.append(0)
                frow.append(0)
                trow.append(0)
            else:
                c = s.value.numerator * (scale // s.value.denominator)
                crow.append(c)
                frow.append(1)
                trow.append(0 if s.is_ghost else 1)
                if abs(c) > biggest:
                    biggest = abs(c)
        cost.append(crow)
        fin.append(frow)
        tang.append(trow)
    compiled_ok = (
        HAVE_COMPILED
        and nrows <= _MAX_COMPILED_DIM
        and ncols <= _MAX_COMPILED_DIM
        and biggest <= _MAX_COMPILED_COST
    )
    return EncodedMatrix(nrows, ncols, cost, fin, tang, scale, compiled_ok)


def encode_matrix(matrix) -> EncodedMatrix:
    return encode(matrix.entries)


def is_nonsingular_enc(enc: EncodedMatrix, rows, cols) -> bool:
    """Tangible-permanent test on the selected square submatrix."""
    if enc.compiled_ok:
        import numpy as np

        c, f, t = enc._np_views()
        return _impl.is_nonsingular(
            c, f, t,
            np.asarray(rows, dtype=np.int32),
            np.asarray(cols, dtype=np.int32),
        )
    return _kernels_py.is_nonsingular(enc.cost, enc.fin, enc.tang, rows, cols)


def assignment_duals(enc: EncodedMatrix, rows, cols):
    """Exact optimal assignment with dual potentials, as Fractions.

    Returns ``(feasible, value, match, u, v)``; value and potentials are
    rescaled back from the integer encoding.
    """
    feasible, value, match, u, v = _kernels_py.solve_assignment_duals(
        enc.cost, enc.fin, list(rows), list(cols)
    )
    if not feasible:
        return False, None, [], [], []
    s = enc.scale
    return (
        True,
        Fraction(value, s),
        match,
        [Fraction(x, s) for x in u],
        [Fraction(x, s) for x in v],
    )


def first_nonsingular(enc: EncodedMatrix, row_sets, col_sets, threads=None) -> int:
    """First (lexicographic) non-singular pair index across the level, or -1.

    ``row_sets`` and ``col_sets`` are sequences of equal-length index tuples;
    the pair index is ``ri * len(col_sets) + ci``.  With ``threads > 1`` the
    row sets are processed in fixed-size rounds so the result is still the
    lexicographically first hit.
    """
    if not row_sets or not col_sets:
        return -1
    workers = thread_count(threads)
    width = len(col_sets)

    if enc.compiled_ok:
        import numpy as np

        c, f, t = enc._np_views()
        rs = np.asarray(row_sets, dtype=np.int32).reshape(len(row_sets), -1)
        cs = np.asarray(col_sets, dtype=np.int32).reshape(width, -1)

        def run(start, stop):
            return _impl.first_nonsingular(c, f, t, rs, cs, start, stop)

    else:

        def run(start, stop):
            return _kernels_py.first_nonsingular(
                enc.cost, enc.fin, enc.tang, row_sets, col_sets, start, stop
            )

    total = len(row_sets)
    if workers <= 1:
        return run(0, total)

    # Keep rounds small enough that an early witness exits quickly.
    per_worker = max(1, min(2048 // max(1, width), (total + workers - 1) // workers))
    round_size = per_worker * workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        start = 0
        while start < total:
            stop = min(start + round_size, total)
            bounds = [
                (b, min(b + per_worker, stop)) for b in range(start, stop, per_worker)
            ]
            results = list(pool.map(lambda se: run(se[0], se[1]), bounds))
            hits = [r for r in results if r >= 0]
            if hits:
                return min(hits)
            start = stop
    return -1
