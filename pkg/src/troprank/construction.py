"""Good tuples, the block tropical matrix built from a 0-1 pattern, and its
two rank bounds.

``build_phi`` stacks k copies of an anchor-plus-pattern row group: row
(α,i) carries a tangible 0 in anchor column i, infinity in the other anchor
columns, and over pattern column j either 0 (pattern bit 0) or a dedicated
coefficient slightly above 1 (pattern bit 1).  The coefficients are
generated deterministically, pairwise distinct inside [1, 1+1/(kd)], so
builds are reproducible and exact.

The tropical upper bound d + k·r and the conditional Kapranov lower bound
n − √(n² − ku) are computed with conservative integer/directed rounding:
reported values never overstate what the formulas actually give.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb, floor, isqrt

from . import kernels
from .enclosure import Interval
from .errors import (
    DimensionMismatch,
    FormatError,
    NegativeRadicand,
    PreconditionViolated,
    SizeLimitExceeded,
)
from .matrix import Matrix, tropical_rank, trop_matmul
from .semiring import INF, tangible

__all__ = [
    "ZeroOneMatrix",
    "GoodTuple",
    "PhiMatrix",
    "build_phi",
    "phi_matches",
    "kapranov_lower_bound",
    "tropical_upper_bound",
    "finite_entries",
    "verify_phi_bounds",
    "zeroone_to_json",
    "zeroone_from_json",
    "good_tuple_to_json",
    "good_tuple_from_json",
    "phi_to_json",
    "phi_from_json",
]

EXHAUSTIVE_SWEEP_LIMIT = 6_000_000


@dataclass(frozen=True)
class ZeroOneMatrix:
    """A d×width grid of {0,1} bits; pattern rows 1..d, columns d+1..d+width."""

    d: int
    width: int
    bits: tuple

    def __post_init__(self):
        if self.d < 1 or self.width < 1:
            raise DimensionMismatch(
                f"need positive dimensions, got {self.d}x{self.width}"
            )
        grid = tuple(tuple(int(b) for b in row) for row in self.bits)
        if len(grid) != self.d or any(len(row) != self.width for row in grid):
            raise DimensionMismatch(
                f"bit grid does not match declared shape {self.d}x{self.width}"
            )
        for row in grid:
            for b in row:
                if b not in (0, 1):
                    raise FormatError(f"bits must be 0 or 1, got {b}")
        object.__setattr__(self, "bits", grid)

    def ones_count(self) -> int:
        return sum(sum(row) for row in self.bits)

    def __str__(self):
        return "\n".join("".join(str(b) for b in row) for row in self.bits)


@dataclass(frozen=True)
class GoodTuple:
    """Parameters (d, k, r, u) with their verified pattern matrix.

    r and u are stored as rational enclosures; condition checks use the
    conservative ends (the ceiling of r's lower end, u's upper end).
    """

    d: int
    k: int
    r: Interval
    u: Interval
    matrix: ZeroOneMatrix

    def cond2_size(self) -> int:
        return ceil(self.r.lo)

    def validate(self) -> dict:
        from .sampler import verify_good

        return verify_good(self.matrix, self.k, self.r.lo, self.u.hi)


class PhiMatrix:
    """The constructed block matrix plus its coefficient table."""

    __slots__ = ("base", "d", "k", "coeffs")

    def __init__(self, base: Matrix, d: int, k: int, coeffs: dict):
        self.base = base
        self.d = d
        self.k = k
        self.coeffs = dict(coeffs)

    @property
    def n(self) -> int:
        return self.d * self.k

    def __eq__(self, other):
        if not isinstance(other, PhiMatrix):
            return NotImplemented
        return (
            self.base == other.base
            and self.d == other.d
            and self.k == other.k
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"PhiMatrix(n={self.n}, d={self.d}, k={self.k})"


def build_phi(m: ZeroOneMatrix, k: int) -> PhiMatrix:
    """Build the n×n block matrix (n = kd) from a d×(kd−d) pattern."""
    if k < 2:
        raise PreconditionViolated(f"need k >= 2, got {k}")
    d = m.d
    if m.width != k * d - d:
        raise DimensionMismatch(
            f"pattern width must be kd-d = {k * d - d}, got {m.width}"
        )
    n = k * d
    ones = [
        (i, j)
        for i in range(d)
        for j in range(m.width)
        if m.bits[i][j] == 1
    ]
    total = len(ones) * k
    coeffs = {}
    counter = 0
    for i, j in ones:
        for alpha in range(1, k + 1):
            counter += 1
            coeffs[(i + 1, d + j + 1, alpha)] = 1 + Fraction(counter, (total + 1) * n)
    # enumeration is lexicographic in (i, j, alpha), values strictly increasing
    assert len(set(coeffs.values())) == len(coeffs)
    assert all(1 < v < 1 + Fraction(1, n) for v in coeffs.values())

    zero = tangible(0)
    grid = []
    row_labels = []
    for alpha in range(1, k + 1):
        for i in range(1, d + 1):
            row_labels.append(f"{alpha},{i}")
            anchors = [zero if c == i else INF for c in range(1, d + 1)]
            body = []
            for j in range(m.width):
                if m.bits[i - 1][j] == 0:
                    body.append(zero)
                else:
                    body.append(tangible(coeffs[(i, d + j + 1, alpha)]))
            grid.append(anchors + body)
    col_labels = [str(c) for c in range(1, n + 1)]
    return PhiMatrix(Matrix(row_labels, col_labels, grid), d, k, coeffs)


def phi_matches(phi: PhiMatrix, m: ZeroOneMatrix, k: int) -> bool:
    """True iff ``phi`` is exactly what build_phi produces from (m, k)."""
    try:
        return build_phi(m, k) == phi
    except (DimensionMismatch, PreconditionViolated):
        return False


def kapranov_lower_bound(n: int, k: int, u) -> int:
    """n − s for the least integer s with s² ≥ n² − ku.

    Since s² is an integer, that threshold is ⌈n² − ku⌉ = n² − ⌊ku⌋; the
    ceiling integer square root then guarantees the result never exceeds
    the exact n − √(n²−ku).  The bound is conditional on coefficients
    linearly independent over the rationals (unattainable here — reported,
    not asserted).
    """
    u = Fraction(u)
    ku = k * u
    if ku < 0:
        raise PreconditionViolated(f"need ku >= 0, got {ku}")
    if ku > n * n:
        raise NegativeRadicand(f"ku = {ku} exceeds n² = {n * n}")
    radicand = n * n - floor(ku)
    s = isqrt(radicand)
    if s * s < radicand:
        s += 1
    return n - s


def tropical_upper_bound(d: int, k: int, r) -> Fraction:
    """d + k·r, exactly."""
    return d + k * Fraction(r)


def finite_entries(phi: PhiMatrix) -> Matrix:
    """Replace every infinity by a tangible 2.

    The same matrix is obtainable by min-plus multiplying on the left with
    the all-2 matrix carrying a 0 diagonal; that identity is asserted on
    every call.
    """
    base = phi.base
    grid = [
        [tangible(2) if e.is_inf else e for e in row]
        for row in base.entries
    ]
    out = Matrix(base.rows, base.cols, grid)
    two = tangible(2)
    zero = tangible(0)
    d_grid = [
        [zero if a == b else two for b in range(base.nrows)]
        for a in range(base.nrows)
    ]
    d_mat = Matrix(base.rows, base.rows, d_grid)
    product = trop_matmul(d_mat, base)
    assert product.entries == out.entries, "finite-entry identity failed"
    return out


def _sweep_size(enc, n, size, batch=4096, threads=None):
    """Scan all size×size submatrices; return a non-singular witness or None."""
    found = None
    rows_batch = []
    cols_batch = []
    for rows in itertools.combinations(range(n), size):
        for cols in itertools.combinations(range(n), size):
            rows_batch.append(rows)
            cols_batch.append(cols)
            if len(rows_batch) >= batch:
                hit = kernels.first_nonsingular(enc, rows_batch, cols_batch, threads=threads)
                if hit >= 0:
                    return (rows_batch[hit], cols_batch[hit])
                rows_batch = []
                cols_batch = []
    if rows_batch:
        hit = kernels.first_nonsingular(enc, rows_batch, cols_batch, threads=threads)
        if hit >= 0:
            return (rows_batch[hit], cols_batch[hit])
    return found


def verify_phi_bounds(
    phi: PhiMatrix,
    good: GoodTuple,
    *,
    randomized: int | None = None,
    seed: int = 0,
    exact_rank_limit: int = 12,
    threads=None,
) -> dict:
    """Check that every square submatrix larger than the claimed tropical
    bound is singular, and compute the exact rank when feasible.

    The claimed bound is d + k·r taken at r's upper end; sizes from
    ⌊bound⌋+1 up to n are swept.  Exhaustive mode refuses absurdly large
    sweeps; randomized mode samples ``randomized`` submatrices per size and
    reports evidence, not proof.
    """
    bound = tropical_upper_bound(good.d, good.k, good.r.hi)
    n = phi.n
    threshold = floor(bound) + 1
    enc = kernels.encode_matrix(phi.base)
    sizes = list(range(threshold, n + 1))
    report = {
        "bound": bound,
        "threshold": threshold,
        "sizes_checked": sizes,
        "mode": "randomized" if randomized else "exhaustive",
        "tests": 0,
        "all_singular": True,
        "witness": None,
        "exact_rank": None,
        "within_bound": None,
    }
    if randomized:
        from .sampler import SplitMix64

        rng = SplitMix64(seed)
        for size in sizes:
            for _ in range(randomized):
                rows = tuple(rng.sample(n, size))
                cols = tuple(rng.sample(n, size))
                report["tests"] += 1
                if kernels.is_nonsingular_enc(enc, rows, cols):
                    report["all_singular"] = False
                    report["witness"] = {"rows": list(rows), "cols": list(cols)}
                    return report
    else:
        total = sum(comb(n, size) ** 2 for size in sizes)
        if total > EXHAUSTIVE_SWEEP_LIMIT:
            raise SizeLimitExceeded(
                f"exhaustive sweep needs {total} submatrix tests "
                f"(limit {EXHAUSTIVE_SWEEP_LIMIT}); use randomized mode"
            )
        report["tests"] = total
        for size in sizes:
            witness = _sweep_size(enc, n, size, threads=threads)
            if witness is not None:
                report["all_singular"] = False
                report["witness"] = {
                    "rows": list(witness[0]),
                    "cols": list(witness[1]),
                }
                return report
    if n <= exact_rank_limit:
        rank = tropical_rank(phi.base, threads=threads).rank
        report["exact_rank"] = rank
        report["within_bound"] = rank <= floor(bound)
    return report


# ---------------------------------------------------------------------------
# JSON formats.
# ---------------------------------------------------------------------------

def zeroone_to_json(m: ZeroOneMatrix) -> dict:
    return {"d": m.d, "width": m.width, "bits": [list(row) for row in m.bits]}


def zeroone_from_json(data: dict) -> ZeroOneMatrix:
    if not isinstance(data, dict):
        raise FormatError("0-1 matrix payload must be a JSON object")
    for key in ("d", "width", "bits"):
        if key not in data:
            raise FormatError(f"0-1 matrix payload is missing {key!r}")
    try:
        return ZeroOneMatrix(int(data["d"]), int(data["width"]), data["bits"])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad 0-1 matrix payload: {exc}") from None


def _interval_to_pair(iv: Interval):
    return [str(iv.lo), str(iv.hi)]


def _interval_from_pair(pair) -> Interval:
    if not isinstance(pair, list) or len(pair) != 2:
        raise FormatError(f"expected [lo, hi] rational pair, got {pair!r}")
    try:
        return Interval(Fraction(str(pair[0])), Fraction(str(pair[1])))
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational pair {pair!r}") from None


def good_tuple_to_json(g: GoodTuple) -> dict:
    return {
        "d": g.d,
        "k": g.k,
        "r": _interval_to_pair(g.r),
        "u": _interval_to_pair(g.u),
        "matrix": zeroone_to_json(g.matrix),
    }


def good_tuple_from_json(data: dict) -> GoodTuple:
    if not isinstance(data, dict):
        raise FormatError("good-tuple payload must be a JSON object")
    for key in ("d", "k", "r", "u", "matrix"):
        if key not in data:
            raise FormatError(f"good-tuple payload is missing {key!r}")
    return GoodTuple(
        int(data["d"]),
        int(data["k"]),
        _interval_from_pair(data["r"]),
        _interval_from_pair(data["u"]),
        zeroone_from_json(data["matrix"]),
    )


def phi_to_json(phi: PhiMatrix) -> dict:
    from .matrix import matrix_to_json

    data = matrix_to_json(phi.base)
    data["d"] = phi.d
    data["k"] = phi.k
    data["coeffs"] = {
        f"{i},{j},{alpha}": str(v) for (i, j, alpha), v in sorted(phi.coeffs.items())
    }
    return data


def phi_from_json(data: dict) -> PhiMatrix:
    from .matrix import matrix_from_json

    if not isinstance(data, dict):
        raise FormatError("phi payload must be a JSON object")
    for key in ("d", "k", "coeffs"):
        if key not in data:
            raise FormatError(f"phi payload is missing {key!r}")
    base = matrix_from_json(data)
    coeffs = {}
    for key, raw in data["coeffs"].items():
        parts = str(key).split(",")
        if len(parts) != 3:
            raise FormatError(f"bad coefficient key {key!r}; expected 'i,j,alpha'")
        try:
            i, j, alpha = (int(p) for p in parts)
            coeffs[(i, j, alpha)] = Fraction(str(raw))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad coefficient entry {key!r}: {raw!r}") from None
    phi = PhiMatrix(base, int(data["d"]), int(data["k"]), coeffs)
    rebuilt_entry_check(phi)
    return phi


def rebuilt_entry_check(phi: PhiMatrix) -> None:
    """Cheap structural validation of a loaded phi payload."""
    n = phi.d * phi.k
    if phi.base.nrows != n or phi.base.ncols != n:
        raise FormatError(f"phi must be {n}x{n}, got {phi.base.nrows}x{phi.base.ncols}")
    for (i, j, alpha), v in phi.coeffs.items():
        if not (1 <= i <= phi.d and phi.d < j <= n and 1 <= alpha <= phi.k):
            raise FormatError(f"coefficient key ({i},{j},{alpha}) out of range")
        e = phi.base.at(f"{alpha},{i}", str(j))
        if e.is_inf or e.is_ghost or e.value != v:
            raise FormatError(
                f"entry ({alpha},{i}|{j}) does not match coefficient {v}"
            )
