"""Finite Puiseux series, exact series-matrix rank, and the lifting transforms.

A series here is a finite normalized list of (coefficient, exponent) terms
with rational exponents and coefficients in a configurable field — an exact
object, not a truncated stream.  Every lifting we construct has finitely
many terms per entry, so rank over the fraction field of the series ring is
exactly computable: substitute t = s^D for a common exponent denominator D,
clear any negative powers (a global monomial factor does not change rank),
and run fraction-free elimination over the polynomial ring.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from .errors import (
    FieldTooSmall,
    FormatError,
    LabelClash,
    NotALifting,
    ShapeMismatch,
    SizeLimitExceeded,
)
from .fields import field_from_name
from .matrix import Matrix
from .semiring import INF, Scalar, ghost_surpasses, tangible

__all__ = [
    "Series",
    "SeriesMatrix",
    "deg",
    "poly_add",
    "poly_mul",
    "poly_neg",
    "series_rank",
    "series_rank_minors",
    "lifting_check",
    "lift_transform",
    "row_reduce_symmetrized",
    "series_matrix_to_json",
    "series_matrix_from_json",
]

MINOR_ORACLE_LIMIT = 4


class Series:
    """A finite sum of coeff·t^exp terms, exponents strictly increasing."""

    __slots__ = ("field", "terms")

    def __init__(self, field, terms=()):
        self.field = field
        self.terms = tuple(terms)

    @classmethod
    def from_terms(cls, field, pairs) -> "Series":
        """Normalize arbitrary (coeff, exp) pairs: merge exponents, drop zeros."""
        acc: dict[Fraction, object] = {}
        for coeff, exp in pairs:
            e = Fraction(exp)
            c = field.coerce(coeff)
            if e in acc:
                acc[e] = field.add(acc[e], c)
            else:
                acc[e] = c
        terms = tuple(
            (acc[e], e) for e in sorted(acc) if not field.is_zero(acc[e])
        )
        return cls(field, terms)

    @classmethod
    def zero(cls, field) -> "Series":
        return cls(field, ())

    @classmethod
    def one(cls, field) -> "Series":
        return cls(field, ((field.one, Fraction(0)),))

    @classmethod
    def monomial(cls, field, coeff, exp) -> "Series":
        c = field.coerce(coeff)
        if field.is_zero(c):
            return cls(field, ())
        return cls(field, ((c, Fraction(exp)),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def deg(self):
        """Minimum exponent with nonzero coefficient; None for the zero series."""
        return self.terms[0][1] if self.terms else None

    def coeff_at(self, exp):
        e = Fraction(exp)
        for c, te in self.terms:
            if te == e:
                return c
            if te > e:
                break
        return self.field.zero

    def _binop(self, other, op):
        if not isinstance(other, Series):
            return NotImplemented
        if self.field != other.field:
            raise FormatError("series over different coefficient fields")
        return Series.from_terms(
            self.field,
            [(c, e) for c, e in self.terms]
            + [(op(c), e) for c, e in other.terms],
        )

    def __add__(self, other):
        return self._binop(other, lambda c: c)

    def __sub__(self, other):
        return self._binop(other, self.field.neg)

    def __neg__(self):
        return Series(self.field, tuple((self.field.neg(c), e) for c, e in self.terms))

    def __mul__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        if self.field != other.field:
            raise FormatError("series over different coefficient fields")
        return Series.from_terms(
            self.field,
            (
                (self.field.mul(c1, c2), e1 + e2)
                for c1, e1 in self.terms
                for c2, e2 in other.terms
            ),
        )

    def scale(self, coeff) -> "Series":
        c = self.field.coerce(coeff)
        return Series.from_terms(self.field, ((self.field.mul(c, tc), e) for tc, e in self.terms))

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, self.terms))

    def __repr__(self):
        if not self.terms:
            return "Series(0)"
        bits = " + ".join(f"{self.field.format(c)}*t^{e}" for c, e in self.terms)
        return f"Series({bits})"


def deg(s: Series):
    return s.deg


def poly_add(a: Series, b: Series) -> Series:
    return a + b


def poly_mul(a: Series, b: Series) -> Series:
    return a * b


def poly_neg(a: Series) -> Series:
    return -a


class SeriesMatrix:
    """A labeled matrix of series over one coefficient field."""

    __slots__ = ("rows", "cols", "field", "entries")

    def __init__(self, rows, cols, field, entries):
        rows = tuple(str(r) for r in rows)
        cols = tuple(str(c) for c in cols)
        if len(set(rows)) != len(rows):
            raise LabelClash(f"duplicate row labels in {list(rows)}")
        if len(set(cols)) != len(cols):
            raise LabelClash(f"duplicate column labels in {list(cols)}")
        grid = tuple(tuple(row) for row in entries)
        if len(grid) != len(rows) or any(len(r) != len(cols) for r in grid):
            raise FormatError(
                f"entry grid does not match {len(rows)}x{len(cols)} labels"
            )
        for row in grid:
            for s in row:
                if not isinstance(s, Series) or s.field != field:
                    raise FormatError("every entry must be a Series over the matrix field")
        self.rows = rows
        self.cols = cols
        self.field = field
        self.entries = grid

    @classmethod
    def of(cls, field, entries, rows=None, cols=None) -> "SeriesMatrix":
        grid = [list(r) for r in entries]
        nrows = len(grid)
        ncols = len(grid[0]) if grid else 0
        if rows is None:
            rows = [str(i + 1) for i in range(nrows)]
        if cols is None:
            cols = [str(j + 1) for j in range(ncols)]
        return cls(rows, cols, field, grid)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.cols)

    def row_index(self, label) -> int:
        try:
            return self.rows.index(str(label))
        except ValueError:
            raise FormatError(f"no row labeled {label!r}") from None

    def col_index(self, label) -> int:
        try:
            return self.cols.index(str(label))
        except ValueError:
            raise FormatError(f"no column labeled {label!r}") from None

    def at(self, row_label, col_label) -> Series:
        return self.entries[self.row_index(row_label)][self.col_index(col_label)]

    def submatrix(self, row_idx, col_idx) -> "SeriesMatrix":
        return SeriesMatrix(
            [self.rows[i] for i in row_idx],
            [self.cols[j] for j in col_idx],
            self.field,
            [[self.entries[i][j] for j in col_idx] for i in row_idx],
        )

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.field == other.field
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SeriesMatrix({self.nrows}x{self.ncols} over {self.field.name})"


# ---------------------------------------------------------------------------
# Rank over the fraction field of the series ring.
# ---------------------------------------------------------------------------

def _ptrim(field, f):
    while f and field.is_zero(f[-1]):
        f.pop()
    return f

def _padd(field, a, b):
    n = max(len(a), len(b))
    out = [field.zero] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = field.add(out[i], c)
    return _ptrim(field, out)

def _psub(field, a, b):
    n = max(len(a), len(b))
    out = [field.zero] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = field.sub(out[i], c)
    return _ptrim(field, out)

def _pmul(field, a, b):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if field.is_zero(ca):
            continue
        for j, cb in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(ca, cb))
    return _ptrim(field, out)

def _pdiv_exact(field, a, b):
    """Exact division in F[s]; the elimination identity guarantees remainder 0."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quot = [field.zero] * max(len(a) - len(b) + 1, 0)
    inv_lead = field.inv(b[-1])
    while len(rem) >= len(b):
        c = field.mul(rem[-1], inv_lead)
        k = len(rem) - len(b)
        quot[k] = c
        for i, cb in enumerate(b):
            rem[k + i] = field.sub(rem[k + i], field.mul(c, cb))
        _ptrim(field, rem)
        if not rem:
            break
    assert not rem, "inexact polynomial division during elimination"
    return _ptrim(field, quot)


def _to_polynomial_grid(l: SeriesMatrix):
    """Substitute t = s^D and clear the global minimum exponent."""
    field = l.field
    denom_lcm = 1
    min_exp = None
    for row in l.entries:
        for s in row:
            for _, e in s.terms:
                denom_lcm = denom_lcm * e.denominator // gcd(denom_lcm, e.denominator)
                if min_exp is None or e < min_exp:
                    min_exp = e
    if min_exp is None:
        return [[[] for _ in l.cols] for _ in l.rows]
    shift = -min_exp if min_exp < 0 else Fraction(0)
    grid = []
    for row in l.entries:
        prow = []
        for s in row:
            poly = []
            for c, e in s.terms:
                k = (e + shift) * denom_lcm
                assert k.denominator == 1 and k >= 0
                k = int(k)
                if k >= len(poly):
                    poly.extend([field.zero] * (k + 1 - len(poly)))
                poly[k] = field.add(poly[k], c)
            prow.append(_ptrim(field, poly))
        grid.append(prow)
    return grid


def series_rank(l: SeriesMatrix) -> int:
    """Exact rank of ``l`` over the fraction field of the series ring.

    Fraction-free (division-exact) elimination on the polynomial grid
    obtained by the t = s^D substitution; no series division ever happens.
    """
    field = l.field
    b = _to_polynomial_grid(l)
    n, m = l.nrows, l.ncols
    rank = 0
    prev = [field.one]
    for k in range(min(n, m)):
        pivot = None
        for i in range(k, n):
            for j in range(k, m):
                if b[i][j]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            b[k], b[pi] = b[pi], b[k]
        if pj != k:
            for row in b:
                row[k], row[pj] = row[pj], row[k]
        rank += 1
        for i in range(k + 1, n):
            for j in range(k + 1, m):
                num = _psub(
                    field,
                    _pmul(field, b[i][j], b[k][k]),
                    _pmul(field, b[i][k], b[k][j]),
                )
                b[i][j] = _pdiv_exact(field, num, prev)
            b[i][k] = []
        prev = b[k][k]
    return rank


def series_rank_minors(l: SeriesMatrix, limit: int = MINOR_ORACLE_LIMIT) -> int:
    """Brute-force rank via exact determinants of all square submatrices."""
    n, m = l.nrows, l.ncols
    if min(n, m) > limit:
        raise SizeLimitExceeded(
            f"minor-expansion rank limited to size {limit}, got {n}x{m}"
        )
    field = l.field
    for k in range(min(n, m), 0, -1):
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(m), k):
                det = Series.zero(field)
                for perm in itertools.permutations(range(k)):
                    prod = Series.one(field)
                    for a in range(k):
                        prod = prod * l.entries[rows[a]][cols[perm[a]]]
                        if prod.is_zero:
                            break
                    inversions = sum(
                        1
                        for a in range(k)
                        for c in range(a + 1, k)
                        if perm[a] > perm[c]
                    )
                    det = det - prod if inversions % 2 else det + prod
                if not det.is_zero:
                    return k
    return 0


# ---------------------------------------------------------------------------
# Liftings.
# ---------------------------------------------------------------------------

def _deg_scalar(s: Series) -> Scalar:
    return INF if s.is_zero else tangible(s.deg)


def lifting_check(a: Matrix, l: SeriesMatrix) -> bool:
    """True iff every entry of ``a`` ghost-surpasses the degree of ``l``'s entry.

    Consequences of the closed form: a tangible entry pins the degree
    exactly, a ghost entry only bounds it below, and infinity forces the
    zero series.
    """
    if a.rows != l.rows or a.cols != l.cols:
        raise ShapeMismatch(
            f"labels differ: {list(a.rows)}x{list(a.cols)} vs "
            f"{list(l.rows)}x{list(l.cols)}"
        )
    for i in range(a.nrows):
        for j in range(a.ncols):
            if not ghost_surpasses(a.entries[i][j], _deg_scalar(l.entries[i][j])):
                return False
    return True


def _pick_zeta(field, clash_coeff):
    """First nonzero field element whose sum with ``clash_coeff`` is nonzero."""
    for zeta in field.nonzero_iter():
        if not field.is_zero(field.add(clash_coeff, zeta)):
            return zeta
    return None


def lift_transform(t, l: SeriesMatrix) -> SeriesMatrix:
    """Extend a lifting of the collapsed matrix to the full paired-row matrix.

    Anchor entries lift to the constant 1 (own column) and 0 (other anchor
    columns).  Over each non-anchor column the pair is filled so that row
    (i#2) minus row (i#1) recovers the input entry while each row's leading
    exponent matches its tropical value; ties need a constant that keeps the
    shared leading coefficient alive, which is why GF(2) is rejected.
    """
    from .symmetrize import SymmetrizedMatrix, sigma

    if not isinstance(t, SymmetrizedMatrix):
        raise ShapeMismatch("first argument must be a symmetrized matrix")
    field = l.field
    if getattr(field, "size", None) == 2:
        raise FieldTooSmall(
            "lift_transform needs a field with at least 3 elements; GF(2) is too small"
        )
    if l.rows != t.I or l.cols != t.J:
        raise ShapeMismatch(
            f"lifting labels {list(l.rows)}x{list(l.cols)} do not match "
            f"index sets {list(t.I)}x{list(t.J)}"
        )
    if not lifting_check(sigma(t), l):
        raise NotALifting("the series matrix does not lift the collapsed matrix")

    n = len(t.I)
    one = Series.one(field)
    zero = Series.zero(field)
    top_rows = []
    bottom_rows = []
    for a, i in enumerate(t.I):
        anchors = [one if b == a else zero for b in range(n)]
        top = list(anchors)
        bottom = list(anchors)
        for b, j in enumerate(t.J):
            s1 = t.at(f"{i}#1", j)
            s2 = t.at(f"{i}#2", j)
            lij = l.entries[a][b]
            if s1 == s2:
                if s1.is_inf:
                    top.append(zero)
                    bottom.append(lij)
                else:
                    zeta = _pick_zeta(field, lij.coeff_at(s1.value))
                    if zeta is None:
                        raise FieldTooSmall(
                            f"no usable constant over {field.name} at ({i}#1|{j})"
                        )
                    spike = Series.monomial(field, zeta, s1.value)
                    top.append(spike)
                    bottom.append(lij + spike)
            elif s1.is_inf or (not s2.is_inf and s1.value > s2.value):
                spike = (
                    zero if s1.is_inf else Series.monomial(field, field.one, s1.value)
                )
                top.append(spike)
                bottom.append(lij + spike)
            else:
                spike = (
                    zero if s2.is_inf else Series.monomial(field, field.one, s2.value)
                )
                top.append(spike - lij)
                bottom.append(spike)
        top_rows.append(top)
        bottom_rows.append(bottom)
    out = SeriesMatrix(t.base.rows, t.base.cols, field, top_rows + bottom_rows)
    assert lifting_check(t.base, out), "constructed matrix fails its own lifting check"
    return out


def row_reduce_symmetrized(l: SeriesMatrix, t) -> SeriesMatrix:
    """Cancel the anchor block of a paired-row lifting, entirely without division.

    For each pair, scales by the (degree-0, hence nonzero) anchor entries and
    subtracts: anchor(i#1)·row(i#2) − anchor(i#2)·row(i#1).  The result over
    the non-anchor columns lifts the collapsed matrix and its rank is lower
    by exactly the pair count.
    """
    from .symmetrize import SymmetrizedMatrix, sigma

    if not isinstance(t, SymmetrizedMatrix):
        raise ShapeMismatch("second argument must be a symmetrized matrix")
    if l.rows != t.base.rows or l.cols != t.base.cols:
        raise ShapeMismatch(
            f"series labels {list(l.rows)}x{list(l.cols)} do not match the "
            f"symmetrized layout {list(t.base.rows)}x{list(t.base.cols)}"
        )
    if not lifting_check(t.base, l):
        raise NotALifting("the series matrix does not lift the paired-row matrix")
    n = len(t.I)
    grid = []
    for a, i in enumerate(t.I):
        f = l.entries[a][a]  # anchor of row i#1; degree 0 by the lifting check
        g = l.entries[n + a][a]  # anchor of row i#2
        reduced = [
            f * l.entries[n + a][n + b] - g * l.entries[a][n + b]
            for b in range(len(t.J))
        ]
        grid.append(reduced)
    out = SeriesMatrix(t.I, t.J, l.field, grid)
    assert lifting_check(sigma(t), out), "reduced block fails its lifting check"
    return out


# ---------------------------------------------------------------------------
# JSON format: entries are lists of [coefficient, exponent] pairs.
# ---------------------------------------------------------------------------

def series_matrix_to_json(l: SeriesMatrix) -> dict:
    return {
        "rows": list(l.rows),
        "cols": list(l.cols),
        "field": l.field.name,
        "entries": [
            [[[l.field.format(c), str(e)] for c, e in s.terms] for s in row]
            for row in l.entries
        ],
    }


def series_matrix_from_json(data: dict) -> SeriesMatrix:
    if not isinstance(data, dict):
        raise FormatError("series matrix payload must be a JSON object")
    for key in ("rows", "cols", "field", "entries"):
        if key not in data:
            raise FormatError(f"series matrix payload is missing {key!r}")
    field = field_from_name(data["field"])
    rows, cols = data["rows"], data["cols"]
    raw = data["entries"]
    if not isinstance(raw, list) or len(raw) != len(rows):
        raise FormatError(f"expected {len(rows)} entry rows, got {len(raw)}")
    grid = []
    for r, raw_row in enumerate(raw):
        if not isinstance(raw_row, list) or len(raw_row) != len(cols):
            raise FormatError(f"entry row {r} does not have {len(cols)} entries")
        out_row = []
        for c, raw_entry in enumerate(raw_row):
            if not isinstance(raw_entry, list):
                raise FormatError(
                    f"entry ({rows[r]}|{cols[c]}) must be a list of [coefficient, exponent] pairs"
                )
            pairs = []
            for term in raw_entry:
                if not isinstance(term, list) or len(term) != 2:
                    raise FormatError(
                        f"bad term {term!r} at ({rows[r]}|{cols[c]}); "
                        "expected [coefficient, exponent]"
                    )
                coeff = field.parse(term[0])
                try:
                    exp = Fraction(str(term[1]))
                except (ValueError, ZeroDivisionError):
                    raise FormatError(
                        f"bad exponent {term[1]!r} at ({rows[r]}|{cols[c]})"
                    ) from None
                pairs.append((coeff, exp))
            out_row.append(Series.from_terms(field, pairs))
        grid.append(out_row)
    return SeriesMatrix(rows, cols, field, grid)
