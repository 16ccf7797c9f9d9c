"""Paired-row matrices and the row-collapsing correspondence.

A *symmetrized* matrix stores each abstract row ``i`` as a pair of concrete
rows ``i#1`` and ``i#2``.  The first block of columns (one per abstract row)
anchors the pairs: both rows of pair ``i`` carry a tangible 0 in column ``i``
and infinity in the other anchor columns.  No entry anywhere is a ghost.

:func:`sigma` collapses each pair by supertropical addition and drops the
anchor columns; :func:`symmetrize` is its canonical one-sided inverse.  The
rank additivity this encodes — the rank of the paired matrix exceeds the
rank of its collapse by exactly the number of pairs — is exposed as
:func:`verify_rank_additivity` so it can be demonstrated on user matrices.
"""

from __future__ import annotations

from .errors import DimensionMismatch, LabelClash, MalformedSymmetrized
from .matrix import Matrix, matrix_from_json, matrix_to_json, tropical_rank
from .semiring import INF, Scalar, format_scalar, st_add, tangible

__all__ = [
    "SymmetrizedMatrix",
    "sigma",
    "symmetrize",
    "verify_rank_additivity",
    "symmetrized_to_json",
    "symmetrized_from_json",
]


class SymmetrizedMatrix:
    """A validated paired-row matrix.

    ``base`` is the full matrix with rows ``[i#1 ...] + [i#2 ...]`` and
    columns ``I + J``; validation pins the exact label layout so files
    round-trip byte-for-byte.
    """

    __slots__ = ("base", "I", "J")

    def __init__(self, base: Matrix, I, J):
        I = tuple(str(i) for i in I)
        J = tuple(str(j) for j in J)
        if set(I) & set(J):
            raise LabelClash(f"row/column index sets overlap: {sorted(set(I) & set(J))}")
        for label in I + J:
            if "#" in label:
                raise MalformedSymmetrized(
                    f"index label {label!r} may not contain '#' (reserved for row pairs)"
                )
        expected_rows = tuple(f"{i}#1" for i in I) + tuple(f"{i}#2" for i in I)
        if base.rows != expected_rows:
            raise MalformedSymmetrized(
                f"row labels must be {list(expected_rows)}, got {list(base.rows)}"
            )
        if base.cols != I + J:
            raise MalformedSymmetrized(
                f"column labels must be {list(I + J)}, got {list(base.cols)}"
            )
        zero = tangible(0)
        for r, row_label in enumerate(base.rows):
            for c, col_label in enumerate(base.cols):
                e = base.entries[r][c]
                if e.is_ghost:
                    raise MalformedSymmetrized(
                        f"ghost entry at ({row_label}|{col_label})"
                    )
                if col_label in I:
                    anchor = row_label.rsplit("#", 1)[0]
                    if col_label == anchor:
                        if e != zero:
                            raise MalformedSymmetrized(
                                f"entry at ({row_label}|{col_label}) must be t:0, "
                                f"got {format_scalar(e)}"
                            )
                    elif not e.is_inf:
                        raise MalformedSymmetrized(
                            f"entry at ({row_label}|{col_label}) must be inf, "
                            f"got {format_scalar(e)}"
                        )
        self.base = base
        self.I = I
        self.J = J

    def at(self, row_label, col_label) -> Scalar:
        return self.base.at(row_label, col_label)

    def pair_rows(self, i):
        """The two concrete rows of abstract row ``i``, as entry tuples."""
        return (
            self.base.entries[self.base.row_index(f"{i}#1")],
            self.base.entries[self.base.row_index(f"{i}#2")],
        )

    def __eq__(self, other):
        if not isinstance(other, SymmetrizedMatrix):
            return NotImplemented
        return self.base == other.base and self.I == other.I and self.J == other.J

    def __repr__(self):
        return f"SymmetrizedMatrix(I={list(self.I)}, J={list(self.J)})"


def sigma(t: SymmetrizedMatrix) -> Matrix:
    """Collapse row pairs by supertropical addition, dropping anchor columns."""
    grid = []
    for i in t.I:
        top, bottom = t.pair_rows(i)
        offset = len(t.I)
        grid.append([
            st_add(top[offset + j], bottom[offset + j]) for j in range(len(t.J))
        ])
    return Matrix(t.I, t.J, grid)


def symmetrize(s: Matrix, I=None, J=None) -> SymmetrizedMatrix:
    """The canonical paired-row preimage of ``s`` under :func:`sigma`.

    A tangible entry becomes (itself, inf); a ghost becomes the exact tie
    (value, value); inf stays (inf, inf).  ``I``/``J`` relabel the rows and
    columns positionally, defaulting to the labels of ``s``.
    """
    I = tuple(str(x) for x in (I if I is not None else s.rows))
    J = tuple(str(x) for x in (J if J is not None else s.cols))
    if len(I) != s.nrows or len(J) != s.ncols:
        raise DimensionMismatch(
            f"need {s.nrows} row labels and {s.ncols} column labels, "
            f"got {len(I)} and {len(J)}"
        )
    n = len(I)
    zero = tangible(0)
    top_rows = []
    bottom_rows = []
    for r in range(n):
        anchors = [zero if k == r else INF for k in range(n)]
        top = []
        bottom = []
        for e in s.entries[r]:
            if e.is_inf:
                top.append(INF)
                bottom.append(INF)
            elif e.is_ghost:
                top.append(tangible(e.value))
                bottom.append(tangible(e.value))
            else:
                top.append(e)
                bottom.append(INF)
        top_rows.append(anchors + top)
        bottom_rows.append(anchors + bottom)
    base = Matrix(
        [f"{i}#1" for i in I] + [f"{i}#2" for i in I],
        list(I) + list(J),
        top_rows + bottom_rows,
    )
    return SymmetrizedMatrix(base, I, J)


def verify_rank_additivity(t: SymmetrizedMatrix, threads=None) -> dict:
    """Exactly compute both ranks and check the pair-count additivity."""
    trop_t = tropical_rank(t.base, threads=threads).rank
    trop_sigma = tropical_rank(sigma(t), threads=threads).rank
    return {
        "trop_T": trop_t,
        "trop_sigma": trop_sigma,
        "I": len(t.I),
        "holds": trop_t == trop_sigma + len(t.I),
    }


def symmetrized_to_json(t: SymmetrizedMatrix) -> dict:
    data = matrix_to_json(t.base)
    data["I"] = list(t.I)
    data["J"] = list(t.J)
    return data


def symmetrized_from_json(data: dict) -> SymmetrizedMatrix:
    from .errors import FormatError

    if not isinstance(data, dict) or "I" not in data or "J" not in data:
        raise FormatError("symmetrized matrix payload needs 'I' and 'J' fields")
    base = matrix_from_json(data)
    return SymmetrizedMatrix(base, data["I"], data["J"])
