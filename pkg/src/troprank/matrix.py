"""Supertropical matrices: permanents, non-singularity, tropical rank.

A matrix is non-singular when its permanent (the min-plus analogue of the
determinant, summed over all permutations) is tangible — equivalently, the
assignment problem on its values has a finite optimum attained by exactly
one permutation whose entries are all tangible.  The rank of a rectangular
matrix is the largest size of a non-singular square submatrix.

Two independent routes are kept deliberately separate: :func:`permanent`
evaluates the supertropical sum itself (exponential, size-capped), while
:func:`is_nonsingular_fast` decides tangibility through exact integer
assignment solves.  The test suite checks they agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import (
    DimensionMismatch,
    FormatError,
    LabelClash,
    LemmaViolation,
    NoFiniteAssignment,
    NotSquare,
    PreconditionViolated,
    SizeLimitExceeded,
)
from .semiring import INF, Scalar, format_scalar, parse_scalar, st_add, st_mul, tangible

__all__ = [
    "Matrix",
    "RankResult",
    "tropical_identity",
    "permanent",
    "is_nonsingular",
    "is_nonsingular_fast",
    "tropical_rank",
    "expand_first_column",
    "replace_column_keep_nonsingular",
    "hungarian_normalize",
    "trop_matmul",
    "matrix_to_json",
    "matrix_from_json",
]

BRUTE_FORCE_LIMIT = 10


class Matrix:
    """A rectangular grid of supertropical scalars with labeled axes."""

    __slots__ = ("rows", "cols", "entries", "_row_index", "_col_index")

    def __init__(self, rows, cols, entries):
        rows = tuple(str(r) for r in rows)
        cols = tuple(str(c) for c in cols)
        if len(set(rows)) != len(rows):
            raise LabelClash(f"duplicate row labels in {rows}")
        if len(set(cols)) != len(cols):
            raise LabelClash(f"duplicate column labels in {cols}")
        entries = tuple(tuple(e) for e in entries)
        if len(entries) != len(rows) or any(len(r) != len(cols) for r in entries):
            raise FormatError(
                f"entry grid is not {len(rows)}x{len(cols)} rectangular"
            )
        for r in entries:
            for e in r:
                if not isinstance(e, Scalar):
                    raise FormatError(f"matrix entry {e!r} is not a Scalar")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._row_index = {label: i for i, label in enumerate(rows)}
        self._col_index = {label: j for j, label in enumerate(cols)}

    @classmethod
    def of(cls, entries, rows=None, cols=None):
        """Build from a grid, defaulting labels to "1", "2", ..."""
        entries = [list(r) for r in entries]
        nrows = len(entries)
        ncols = len(entries[0]) if nrows else 0
        if rows is None:
            rows = [str(i + 1) for i in range(nrows)]
        if cols is None:
            cols = [str(j + 1) for j in range(ncols)]
        return cls(rows, cols, entries)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.cols)

    def at(self, row_label, col_label) -> Scalar:
        return self.entries[self._row_index[row_label]][self._col_index[col_label]]

    def row_index(self, label) -> int:
        return self._row_index[label]

    def col_index(self, label) -> int:
        return self._col_index[label]

    def has_ghosts(self) -> bool:
        return any(e.is_ghost for row in self.entries for e in row)

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        """Submatrix by positional indices, keeping the labels."""
        return Matrix(
            [self.rows[i] for i in row_idx],
            [self.cols[j] for j in col_idx],
            [[self.entries[i][j] for j in col_idx] for i in row_idx],
        )

    def with_column(self, col_label, new_entries) -> "Matrix":
        j = self._col_index[col_label]
        if len(new_entries) != self.nrows:
            raise DimensionMismatch("replacement column has wrong length")
        grid = [list(r) for r in self.entries]
        for i, e in enumerate(new_entries):
            grid[i][j] = e
        return Matrix(self.rows, self.cols, grid)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(
            " ".join(format_scalar(e) for e in row) for row in self.entries
        )
        return f"Matrix({self.nrows}x{self.ncols}: {body})"


def tropical_identity(n_or_labels) -> Matrix:
    """The tropical unit matrix: tangible 0 on the diagonal, infinity off it."""
    if isinstance(n_or_labels, int):
        labels = [str(i + 1) for i in range(n_or_labels)]
    else:
        labels = list(n_or_labels)
    n = len(labels)
    zero = tangible(0)
    return Matrix(
        labels, labels,
        [[zero if i == j else INF for j in range(n)] for i in range(n)],
    )


def _require_square(a: Matrix):
    if a.nrows != a.ncols:
        raise NotSquare(f"matrix is {a.nrows}x{a.ncols}")


def permanent(a: Matrix, limit: int = BRUTE_FORCE_LIMIT) -> Scalar:
    """The supertropical permanent: sum over all permutation products.

    Evaluated by dynamic programming over column subsets, which expands to
    the same n! -term sum by distributivity.  Capped at ``limit`` because the
    result is exponential to certify; beyond that use
    :func:`is_nonsingular_fast`.
    """
    _require_square(a)
    n = a.nrows
    if n > limit:
        raise SizeLimitExceeded(
            f"permanent limited to {limit}x{limit}; use is_nonsingular_fast"
        )
    if n == 0:
        return tangible(0)
    entries = a.entries
    f = [None] * (1 << n)
    f[0] = tangible(0)
    for mask in range(1, 1 << n):
        r = bin(mask).count("1") - 1
        row = entries[r]
        acc = INF
        rest = mask
        while rest:
            low = rest & -rest
            j = low.bit_length() - 1
            acc = st_add(acc, st_mul(f[mask ^ low], row[j]))
            rest ^= low
        f[mask] = acc
    return f[(1 << n) - 1]


def is_nonsingular(a: Matrix, limit: int = BRUTE_FORCE_LIMIT) -> bool:
    """True iff the permanent is tangible (per-evaluation route)."""
    return permanent(a, limit).is_tangible


def is_nonsingular_fast(a: Matrix) -> bool:
    """True iff the permanent is tangible (assignment-problem route).

    Solves the min-assignment problem on the values; the matrix is
    non-singular iff the optimum is finite, attained by exactly one
    permutation, and that permutation uses only tangible entries.
    Uniqueness is decided by re-solving with each matched edge forbidden.
    """
    _require_square(a)
    n = a.nrows
    if n == 0:
        return True
    enc = kernels.encode_matrix(a)
    return kernels.is_nonsingular_enc(enc, tuple(range(n)), tuple(range(n)))


@dataclass(frozen=True)
class RankResult:
    """Outcome of a rank search.

    For the exhaustive mode ``rank`` is exact.  For the randomized mode it is
    only a certified lower bound: ``uncertified_upper`` is the largest size
    at which sampling found nothing non-singular above the witness, and may
    understate the truth.
    """

    rank: int
    witness_rows: tuple
    witness_cols: tuple
    mode: str = "exhaustive"
    uncertified_upper: int | None = None

    def __int__(self):
        return self.rank


def _duplicate_groups(vectors):
    groups = {}
    out = []
    for v in vectors:
        out.append(groups.setdefault(v, len(groups)))
    return out


def _unique_subsets(count, size, group_of):
    """Index combinations avoiding any pair from the same duplicate group."""
    if len(set(group_of)) == count:
        return list(itertools.combinations(range(count), size))
    out = []
    for combo in itertools.combinations(range(count), size):
        seen = set()
        for i in combo:
            g = group_of[i]
            if g in seen:
                break
            seen.add(g)
        else:
            out.append(combo)
    return out


def tropical_rank(a: Matrix, *, randomized: int | None = None, seed: int = 0,
                  threads: int | None = None) -> RankResult:
    """Largest size of a non-singular square submatrix, with a witness.

    Searches sizes from the largest downward and short-circuits on the first
    witness; ties are broken by lexicographic order of the index sets.  Row
    or column subsets containing two identical lines are skipped — a matrix
    with two equal rows is always singular.  With ``randomized=N`` the search
    samples N submatrices per size instead of enumerating (seeded,
    deterministic), returning a certified lower bound only.
    """
    n, m = a.nrows, a.ncols
    if n == 0 or m == 0:
        return RankResult(0, (), ())
    enc = kernels.encode_matrix(a)
    if randomized is not None:
        return _rank_randomized(a, enc, randomized, seed)
    row_groups = _duplicate_groups(a.entries)
    col_groups = _duplicate_groups(tuple(zip(*a.entries)))
    for s in range(min(n, m), 0, -1):
        row_sets = _unique_subsets(n, s, row_groups)
        col_sets = _unique_subsets(m, s, col_groups)
        idx = kernels.first_nonsingular(enc, row_sets, col_sets, threads)
        if idx >= 0:
            ri, ci = divmod(idx, len(col_sets))
            return RankResult(
                s,
                tuple(a.rows[i] for i in row_sets[ri]),
                tuple(a.cols[j] for j in col_sets[ci]),
            )
    return RankResult(0, (), ())


def _rank_randomized(a: Matrix, enc, samples: int, seed: int) -> RankResult:
    from .sampler import SplitMix64

    n, m = a.nrows, a.ncols
    rng = SplitMix64(seed)
    upper = min(n, m)
    for s in range(min(n, m), 0, -1):
        row_sets = []
        col_sets = []
        for _ in range(samples):
            row_sets.append(tuple(sorted(rng.sample(n, s))))
            col_sets.append(tuple(sorted(rng.sample(m, s))))
        for rs, cs in zip(row_sets, col_sets):
            if kernels.is_nonsingular_enc(enc, rs, cs):
                return RankResult(
                    s,
                    tuple(a.rows[i] for i in rs),
                    tuple(a.cols[j] for j in cs),
                    mode="randomized",
                    uncertified_upper=s,
                )
    return RankResult(0, (), (), mode="randomized", uncertified_upper=0)


def expand_first_column(a: Matrix) -> Matrix:
    """Shrink by one: drop column one, merge the top two rows by addition.

    Requires the first column to be (tangible 0, tangible 0, inf, ..., inf);
    the permanent is unchanged by this contraction.
    """
    _require_square(a)
    n = a.nrows
    if n < 2:
        raise PreconditionViolated("need at least 2 rows to expand")
    zero = tangible(0)
    if a.entries[0][0] != zero or a.entries[1][0] != zero:
        raise PreconditionViolated(
            "first column must start with two tangible zeros"
        )
    for i in range(2, n):
        if not a.entries[i][0].is_inf:
            raise PreconditionViolated(
                f"first column must be infinite below row 2 (row {a.rows[i]})"
            )
    merged = [st_add(x, y) for x, y in zip(a.entries[0][1:], a.entries[1][1:])]
    grid = [merged] + [list(row[1:]) for row in a.entries[2:]]
    return Matrix([a.rows[0]] + list(a.rows[2:]), a.cols[1:], grid)


def replace_column_keep_nonsingular(a: Matrix, va, vb):
    """Pick a column whose replacement by (va, vb, inf, ..., inf) keeps
    the matrix non-singular; returns the column label.

    The first candidate follows the normalized-assignment rule: compare the
    two tangible values after row scaling and take the column matched to the
    smaller one's row.  Because ties can defeat that rule, every candidate is
    verified, preferring columns with a tangible entry in the first two rows.
    """
    _require_square(a)
    n = a.nrows
    if n < 2:
        raise PreconditionViolated("need at least 2 rows")
    if not is_nonsingular_fast(a):
        raise PreconditionViolated("matrix must be non-singular")
    row_pot, _col_pot, perm = hungarian_normalize(a)
    va = Fraction(va)
    vb = Fraction(vb)
    # Candidate order: the rule's pick, its mirror, then remaining columns
    # carrying a tangible entry in the first two rows, then everything else.
    if va + row_pot[0] < vb + row_pot[1]:
        primary = [perm[0], perm[1]]
    else:
        primary = [perm[1], perm[0]]
    preferred = [
        j for j in range(n)
        if a.entries[0][j].is_tangible or a.entries[1][j].is_tangible
    ]
    order = []
    for j in primary + preferred + list(range(n)):
        if j not in order:
            order.append(j)
    column = [tangible(va), tangible(vb)] + [INF] * (n - 2)
    for j in order:
        candidate = a.with_column(a.cols[j], column)
        if is_nonsingular_fast(candidate):
            return a.cols[j]
    raise LemmaViolation("no column keeps the matrix non-singular")


def hungarian_normalize(a: Matrix):
    """Exact potentials and matching normalizing the optimal assignment.

    Returns ``(row_potentials, col_potentials, perm)`` such that adding
    ``row_potentials[i] + col_potentials[j]`` to entry (i, j) makes every
    value non-negative and puts value 0 on the matched entries
    ``(i, perm[i])``.  Scaling touches values only, never tangibility flags.
    The gauge is fixed row-first: the column matched to the first row gets
    potential 0.
    """
    _require_square(a)
    n = a.nrows
    if n == 0:
        return [], [], ()
    enc = kernels.encode_matrix(a)
    feasible, _value, match, u, v = kernels.assignment_duals(
        enc, range(n), range(n)
    )
    if not feasible:
        raise NoFiniteAssignment("no finite assignment exists")
    row_pot = [-x for x in u]
    col_pot = [-x for x in v]
    shift = col_pot[match[0]]
    row_pot = [x + shift for x in row_pot]
    col_pot = [x - shift for x in col_pot]
    return row_pot, col_pot, tuple(match)


def trop_matmul(a: Matrix, b: Matrix) -> Matrix:
    """Min-plus matrix product of two ghost-free matrices."""
    if a.has_ghosts() or b.has_ghosts():
        raise PreconditionViolated("matrix product is defined on ghost-free matrices")
    if a.ncols != b.nrows:
        raise DimensionMismatch(f"inner dimensions {a.ncols} != {b.nrows}")
    bt = list(zip(*b.entries))
    grid = []
    for arow in a.entries:
        out = []
        for bcol in bt:
            best = None
            for x, y in zip(arow, bcol):
                if x.value is None or y.value is None:
                    continue
                s = x.value + y.value
                if best is None or s < best:
                    best = s
            out.append(INF if best is None else tangible(best))
        grid.append(out)
    return Matrix(a.rows, b.cols, grid)


def matrix_to_json(a: Matrix) -> dict:
    return {
        "rows": list(a.rows),
        "cols": list(a.cols),
        "entries": [[format_scalar(e) for e in row] for row in a.entries],
    }


def matrix_from_json(data: dict) -> Matrix:
    if not isinstance(data, dict):
        raise FormatError("matrix payload must be a JSON object")
    try:
        rows = data["rows"]
        cols = data["cols"]
        raw = data["entries"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"matrix payload missing field: {exc}") from None
    if not isinstance(rows, list) or not isinstance(cols, list) or not isinstance(raw, list):
        raise FormatError("matrix fields 'rows', 'cols', 'entries' must be lists")
    if len(raw) != len(rows):
        raise FormatError(f"expected {len(rows)} entry rows, got {len(raw)}")
    grid = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != len(cols):
            raise FormatError(f"entry row {i} is not a list of {len(cols)} scalars")
        grid.append([parse_scalar(e) for e in row])
    return Matrix(rows, cols, grid)
