"""Random pattern sampling, good-tuple verification, probability bounds, and
the full size-n separation pipeline.

Randomness comes from SplitMix64, a tiny, fully specified 64-bit generator:
fixed seeds reproduce bit-identical matrices on every platform.  Bernoulli
draws are exact — a rational probability p/q is realized by rejection
sampling an integer below q — so sampled patterns depend on nothing but the
seed and the exact parameters.

All transcendental inequality checks go through rational interval
enclosures with per-use rounding directions, documented at each call.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import ceil, floor, isqrt

from .construction import (
    GoodTuple,
    ZeroOneMatrix,
    build_phi,
    kapranov_lower_bound,
)
from .enclosure import (
    DEFAULT_PREC,
    Interval,
    exp_interval,
    format_interval,
    interval_mul,
    interval_square,
    ln_fraction,
    sqrt_fraction,
    sqrt_interval,
)
from .errors import (
    AttemptsExhausted,
    DimensionMismatch,
    FormatError,
    InvalidAlpha,
    PreconditionViolated,
)
from .matrix import Matrix, tropical_rank

__all__ = [
    "SplitMix64",
    "SamplerParams",
    "sample_candidate",
    "verify_good",
    "lemma_params",
    "hoeffding_bound",
    "union_bound",
    "sample_good_tuple",
    "SeparationReport",
    "separate",
    "pad_cyclic",
    "report_to_json",
    "validate_report",
    "EXACT_RANK_LIMIT",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

EXACT_RANK_LIMIT = 12


class SplitMix64:
    """The SplitMix64 generator: one 64-bit state, fixed mixing constants."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection; bound may exceed 2^64."""
        if bound <= 0:
            raise PreconditionViolated(f"bound must be positive, got {bound}")
        chunks = max(1, -(-((bound - 1).bit_length()) // 64))
        span = 1 << (64 * chunks)
        limit = span - span % bound
        while True:
            value = 0
            for _ in range(chunks):
                value = (value << 64) | self.next64()
            if value < limit:
                return value % bound

    def bernoulli(self, p: Fraction) -> bool:
        """True with probability exactly p."""
        p = Fraction(p)
        if not 0 <= p <= 1:
            raise PreconditionViolated(f"probability must be in [0,1], got {p}")
        if p == 0:
            return False
        if p == 1:
            return True
        return self.below(p.denominator) < p.numerator

    def sample(self, n: int, k: int) -> list:
        """k distinct indices from range(n), sorted, by partial shuffle."""
        if not 0 <= k <= n:
            raise PreconditionViolated(f"cannot sample {k} of {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])


@dataclass(frozen=True)
class SamplerParams:
    """Pattern-sampling parameters; q is the probability of a zero bit."""

    d: int
    q: Fraction
    seed: int
    allow_out_of_range: bool = False

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        if self.d < 2:
            raise PreconditionViolated(f"need d >= 2, got {self.d}")
        if not 0 < self.q < 1:
            raise PreconditionViolated(f"need q in (0, 1), got {self.q}")
        if self.q >= Fraction(1, 10) and not self.allow_out_of_range:
            raise PreconditionViolated(
                f"q = {self.q} is outside the guaranteed range (0, 1/10); "
                "pass the out-of-range flag to sample anyway"
            )


def sample_candidate(p: SamplerParams) -> ZeroOneMatrix:
    """A d×(d²−d) pattern with i.i.d. bits, P(0) = q, driven only by the seed."""
    rng = SplitMix64(p.seed)
    width = p.d * p.d - p.d
    bits = [
        [0 if rng.bernoulli(p.q) else 1 for _ in range(width)]
        for _ in range(p.d)
    ]
    return ZeroOneMatrix(p.d, width, bits)


def _has_all_ones_block(bits, rho: int) -> bool:
    """Exact search for a rho×rho all-ones submatrix via mask intersection."""
    nrows = len(bits)
    width = len(bits[0]) if bits else 0
    if rho > nrows or rho > width:
        return False
    masks = []
    for row in bits:
        m = 0
        for j, b in enumerate(row):
            if b:
                m |= 1 << j
        masks.append(m)
    masks.sort(key=lambda m: -bin(m).count("1"))

    def descend(start: int, chosen: int, mask: int) -> bool:
        if chosen == rho:
            return True
        for idx in range(start, nrows - (rho - chosen) + 1):
            merged = mask & masks[idx]
            if bin(merged).count("1") >= rho and descend(idx + 1, chosen + 1, merged):
                return True
        return False

    return descend(0, 0, (1 << width) - 1)


def verify_good(m: ZeroOneMatrix, k: int, r, u) -> dict:
    """Exact check of the two good-tuple conditions.

    cond1: the pattern has at least u ones.  cond2: no ⌈r⌉×⌈r⌉ all-ones
    submatrix — vacuously true (and flagged) when ⌈r⌉ exceeds a dimension.
    Callers pass conservative ends: r rounded down, u rounded up.
    """
    if m.width != k * m.d - m.d:
        raise DimensionMismatch(
            f"pattern width must be kd-d = {k * m.d - m.d}, got {m.width}"
        )
    r = Fraction(r)
    u = Fraction(u)
    ones = m.ones_count()
    rho = ceil(r)
    vacuous = rho > min(m.d, m.width)
    if rho <= 0:
        cond2 = False  # degenerate threshold: an empty all-ones block always exists
        vacuous = False
    else:
        cond2 = not _has_all_ones_block(m.bits, rho)
    return {
        "ones_count": ones,
        "cond1": ones >= u,
        "cond2": cond2,
        "cond2_vacuous": vacuous,
        "rho": rho,
    }


def lemma_params(d: int, q, prec: int = DEFAULT_PREC):
    """The derived parameters (k, r, u) as exact value plus two enclosures.

    k = d exactly.  r encloses 4·ln(d)/q; condition 2 must use the LOWER
    end's ceiling (smaller r ⇒ stricter check), reporting may quote the
    upper end.  u encloses (1−q)(d³−d²) − √d·(d³−d²)/d²; condition 1 must
    use the UPPER end (larger u ⇒ stricter check).
    """
    if d < 2:
        raise PreconditionViolated(f"need d >= 2, got {d}")
    q = Fraction(q)
    if not 0 < q < 1:
        raise PreconditionViolated(f"need q in (0, 1), got {q}")
    r = ln_fraction(d, prec).scale(Fraction(4) / q)
    c = d**3 - d**2
    root = sqrt_fraction(d, prec)
    u = Interval.point((1 - q) * c) - root.scale(Fraction(c, d * d))
    return d, r, u


def hoeffding_bound(d: int, prec: int = DEFAULT_PREC) -> Interval:
    """Enclosure of exp(−2(1−1/d)), the too-few-ones failure bound; < 1/2."""
    if d < 2:
        raise PreconditionViolated(f"need d >= 2, got {d}")
    out = exp_interval(Interval.point(Fraction(-2) + Fraction(2, d)), prec)
    assert out.hi < Fraction(1, 2), "concentration bound must stay below 1/2"
    return out


_LOG2E = Interval(Fraction(14426, 10000), Fraction(14427, 10000))
_LOOSE_EXP_CUTOFF = 512


def _exp_enclosure_loose(x: Interval, prec: int) -> Interval:
    """exp over an interval, falling back to dyadic bounds for huge arguments.

    The fallback writes e^x = 2^(x·log2 e) and rounds the base-2 exponent
    outward to integers, keeping endpoints representable.
    """
    if abs(x.lo) <= _LOOSE_EXP_CUTOFF and abs(x.hi) <= _LOOSE_EXP_CUTOFF:
        return exp_interval(x, prec)
    e2 = interval_mul(x, _LOG2E)
    return Interval(Fraction(2) ** floor(e2.lo), Fraction(2) ** ceil(e2.hi))


def _pow_enclosure(base: Fraction, exponent: Fraction, prec: int) -> Interval:
    """base^exponent for base > 0 via exp(exponent·ln base)."""
    if exponent == 0:
        return Interval.point(1)
    arg = ln_fraction(base, prec).scale(exponent)
    return _exp_enclosure_loose(arg, prec)


def union_bound(d: int, q, r, prec: int = DEFAULT_PREC) -> dict:
    """Enclosure of d^(3r+3)·(1−q)^(r²), the all-ones-block failure bound.

    Also reports the proof's intermediate form
    exp((ln d)²/q·(15 + 16·ln(1−q)/q)) and whether ln(1−q)/q < −1 holds.
    """
    if d < 2:
        raise PreconditionViolated(f"need d >= 2, got {d}")
    q = Fraction(q)
    if not 0 < q < 1:
        raise PreconditionViolated(f"need q in (0, 1), got {q}")
    r = Fraction(r)
    if r < 0:
        raise PreconditionViolated(f"need r >= 0, got {r}")
    bound = interval_mul(
        _pow_enclosure(Fraction(d), 3 * r + 3, prec),
        _pow_enclosure(1 - q, r * r, prec),
    )
    ln_one_minus_q = ln_fraction(1 - q, prec)
    ratio = ln_one_minus_q.scale(Fraction(1) / q)
    ln_d_sq = interval_square(ln_fraction(d, prec))
    inner = Interval.point(15) + ratio.scale(16)
    exponent = interval_mul(ln_d_sq.scale(Fraction(1) / q), inner)
    intermediate = _exp_enclosure_loose(exponent, prec)
    return {
        "bound": bound,
        "intermediate": intermediate,
        "log_ratio_lt_minus1": ratio.hi < -1,
        "degenerate_r": r == 0,
    }


def sample_good_tuple(
    p: SamplerParams, max_attempts: int = 64, prec: int = DEFAULT_PREC
):
    """Rejection-sample patterns until both conditions verify.

    Attempt t uses the derived sub-seed seed + t·golden (mod 2^64), so runs
    are deterministic and attempts are independent — a parallel driver may
    race attempts as long as the lowest successful index wins.

    Returns (tuple, stats); raises with empirical failure rates when the
    attempt budget runs out.
    """
    if max_attempts < 1:
        raise PreconditionViolated(f"need max_attempts >= 1, got {max_attempts}")
    k, r, u = lemma_params(p.d, p.q, prec)
    cond1_failures = 0
    cond2_failures = 0
    vacuous = False
    for attempt in range(max_attempts):
        sub_seed = (p.seed + attempt * _GOLDEN) & _MASK64
        candidate = sample_candidate(replace(p, seed=sub_seed))
        report = verify_good(candidate, k, r.lo, u.hi)
        vacuous = report["cond2_vacuous"]
        if report["cond1"] and report["cond2"]:
            stats = {
                "attempts": attempt + 1,
                "cond1_failures": cond1_failures,
                "cond2_failures": cond2_failures,
                "cond2_vacuous": vacuous,
                "ones_count": report["ones_count"],
            }
            return GoodTuple(p.d, k, r, u, candidate), stats
        if not report["cond1"]:
            cond1_failures += 1
        if not report["cond2"]:
            cond2_failures += 1
    hoeff = hoeffding_bound(p.d, prec)
    union = union_bound(p.d, p.q, r.lo, prec)
    stats = {
        "attempts": max_attempts,
        "cond1_failures": cond1_failures,
        "cond2_failures": cond2_failures,
        "cond1_failure_rate": str(Fraction(cond1_failures, max_attempts)),
        "cond2_failure_rate": str(Fraction(cond2_failures, max_attempts)),
        "hoeffding": format_interval(hoeff),
        "union": format_interval(union["bound"]),
        "cond2_vacuous": vacuous,
    }
    raise AttemptsExhausted(
        f"no good tuple in {max_attempts} attempts at d={p.d}, q={p.q}; "
        f"cond1 failed {cond1_failures}x, cond2 failed {cond2_failures}x",
        stats=stats,
    )


# ---------------------------------------------------------------------------
# The full separation pipeline.
# ---------------------------------------------------------------------------

def pad_cyclic(mat: Matrix, n: int) -> Matrix:
    """Grow a matrix to n×n by repeating rows, then columns, cyclically from
    index 0; copies get fresh labels so the result stays well-formed."""
    if mat.nrows > n or mat.ncols > n:
        raise DimensionMismatch(
            f"cannot pad {mat.nrows}x{mat.ncols} down to {n}x{n}"
        )
    rows = list(mat.rows)
    grid = [list(row) for row in mat.entries]
    base_rows = mat.nrows
    for t in range(n - base_rows):
        src = t % base_rows
        rows.append(f"{mat.rows[src]}~{t // base_rows + 1}")
        grid.append(list(grid[src]))
    cols = list(mat.cols)
    base_cols = mat.ncols
    for t in range(n - base_cols):
        src = t % base_cols
        cols.append(f"{mat.cols[src]}~{t // base_cols + 1}")
        for row in grid:
            row.append(row[src])
    return Matrix(rows, cols, grid)


@dataclass
class SeparationReport:
    n: int
    alpha: Fraction
    seed: int
    d: int
    k: int
    q: Interval
    q_used: Fraction
    r: Interval
    u: Interval
    attempts: int
    ones_count: int
    cond1: bool
    cond2: bool
    cond2_vacuous: bool
    matrix: ZeroOneMatrix
    good: GoodTuple
    phi: object  # PhiMatrix
    phi_padded: Matrix
    trop_rank_bound: Interval
    phi_trop_rank_bound: Interval
    kapranov_bound: Fraction
    phi_kapranov_lower_bound: int
    exact_trop_rank: int | None
    exact_trop_rank_phi: int | None
    rows_added: int
    cols_added: int
    bounds_guaranteed: bool
    hypothesis_caveats: list


def _alpha_gap_enclosure(n: int, alpha: Fraction, prec: int) -> Interval:
    """Enclosure of alpha − 2·n^(−1/4), tightened until its sign is decided."""
    while True:
        fourth_root = sqrt_interval(sqrt_fraction(n, prec), prec)
        inv = Interval(2 / fourth_root.hi, 2 / fourth_root.lo)
        gap = Interval(alpha - inv.hi, alpha - inv.lo)
        if gap.lo > 0 or gap.hi < 0:
            return gap
        prec *= 2
        if prec > 1 << 16:  # unreachable: the exactly-zero case is excluded upfront
            raise InvalidAlpha(
                f"alpha = {alpha} is numerically indistinguishable from 2·n^(-1/4)"
            )


def separate(
    n: int,
    alpha,
    seed: int,
    *,
    max_attempts: int = 64,
    exact_rank_limit: int = EXACT_RANK_LIMIT,
    threads=None,
    prec: int = DEFAULT_PREC,
) -> SeparationReport:
    """Run the whole pipeline at size n: derive (d, q), sample a good tuple,
    build the block matrix, pad it to n×n, and report every bound.

    q is the lower enclosure end of (alpha − 2n^(−1/4))² — a smaller q
    weakens no verified condition, since the conditions are re-checked
    explicitly on the sampled pattern.
    """
    if n < 4:
        raise PreconditionViolated(f"need n >= 4, got {n}")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise InvalidAlpha(f"alpha must be positive, got {alpha}")
    if n * alpha**4 == 16:
        raise InvalidAlpha(
            f"alpha = {alpha} equals 2·n^(-1/4) exactly, making q = 0; "
            "the proof implicitly needs alpha > 2·n^(-1/4)·sqrt(ln n)"
        )
    d = isqrt(n)
    gap = _alpha_gap_enclosure(n, alpha, prec)
    q_enc = interval_square(gap)
    q_used = q_enc.lo
    assert q_used > 0
    if q_used >= 1:
        raise PreconditionViolated(
            f"alpha = {alpha} gives q = {q_enc} >= 1; no Bernoulli sampling possible"
        )
    params = SamplerParams(d, q_used, seed, allow_out_of_range=True)
    good, stats = sample_good_tuple(params, max_attempts, prec)
    k = good.k
    phi = build_phi(good.matrix, k)
    phi_padded = pad_cyclic(phi.base, n)

    ln_n = ln_fraction(n, prec)
    sqrt_n = sqrt_fraction(n, prec)
    trop_bound = interval_mul(sqrt_n, ln_n).scale(Fraction(4) / alpha**2)
    phi_trop_bound = Interval(d + k * good.r.lo, d + k * good.r.hi)
    kap_bound = n * (1 - alpha)
    phi_kap = kapranov_lower_bound(phi.n, k, max(good.u.lo, 0))

    exact_rank = None
    exact_rank_phi = None
    if n <= exact_rank_limit:
        exact_rank = tropical_rank(phi_padded, threads=threads).rank
    if phi.n <= exact_rank_limit:
        exact_rank_phi = tropical_rank(phi.base, threads=threads).rank

    bounds_guaranteed = n > 1000 and 0 < alpha < Fraction(1, 10)
    caveats = [
        "kapranov lower bounds are conditional: they assume coefficients "
        "linearly independent over the rationals, which exact rational "
        "coefficients cannot satisfy"
    ]
    if not bounds_guaranteed:
        caveats.append(
            "hypothesis requires n > 1000 and alpha in (0, 1/10); "
            "bounds are not guaranteed at these parameters"
        )
    if gap.hi < 0:
        caveats.append(
            "alpha is below 2*n^(-1/4): q is the square of a negative gap, "
            "so the Kapranov chain of the proof does not apply"
        )
    if not trop_bound.hi < n:
        caveats.append(
            "the tropical-rank bound 4*sqrt(n)*ln(n)/alpha^2 is not certified "
            "below n at these parameters (alpha <= 2*n^(-1/4)*sqrt(ln n)): vacuous"
        )
    if q_used >= Fraction(1, 10):
        caveats.append(
            f"q = {q_used} lies outside the lemma range (0, 1/10); "
            "sampled anyway for desk-scale exploration"
        )
    if stats["cond2_vacuous"]:
        caveats.append(
            "condition 2 is vacuous at this scale: ceil(r) exceeds the "
            "pattern dimensions"
        )

    return SeparationReport(
        n=n,
        alpha=alpha,
        seed=int(seed) & _MASK64,
        d=d,
        k=k,
        q=q_enc,
        q_used=q_used,
        r=good.r,
        u=good.u,
        attempts=stats["attempts"],
        ones_count=stats["ones_count"],
        cond1=True,
        cond2=True,
        cond2_vacuous=stats["cond2_vacuous"],
        matrix=good.matrix,
        good=good,
        phi=phi,
        phi_padded=phi_padded,
        trop_rank_bound=trop_bound,
        phi_trop_rank_bound=phi_trop_bound,
        kapranov_bound=kap_bound,
        phi_kapranov_lower_bound=phi_kap,
        exact_trop_rank=exact_rank,
        exact_trop_rank_phi=exact_rank_phi,
        rows_added=n - phi.n,
        cols_added=n - phi.n,
        bounds_guaranteed=bounds_guaranteed,
        hypothesis_caveats=caveats,
    )


def _pair(iv: Interval):
    return [str(iv.lo), str(iv.hi)]


def report_to_json(rep: SeparationReport, files: dict | None = None) -> dict:
    out = {
        "n": rep.n,
        "alpha": str(rep.alpha),
        "seed": rep.seed,
        "d": rep.d,
        "k": rep.k,
        "q": _pair(rep.q),
        "q_used": str(rep.q_used),
        "r": _pair(rep.r),
        "u": _pair(rep.u),
        "attempts": rep.attempts,
        "ones_count": rep.ones_count,
        "cond1": rep.cond1,
        "cond2": rep.cond2,
        "cond2_vacuous": rep.cond2_vacuous,
        "trop_rank_bound": _pair(rep.trop_rank_bound),
        "phi_trop_rank_bound": _pair(rep.phi_trop_rank_bound),
        "kapranov_bound": str(rep.kapranov_bound),
        "phi_kapranov_lower_bound": rep.phi_kapranov_lower_bound,
        "kapranov_note": "theoretical (hypothesis not realizable in exact rational mode)",
        "exact_trop_rank": rep.exact_trop_rank,
        "exact_trop_rank_phi": rep.exact_trop_rank_phi,
        "padding": {"rows_added": rep.rows_added, "cols_added": rep.cols_added},
        "bounds_guaranteed": rep.bounds_guaranteed,
        "hypothesis_caveats": list(rep.hypothesis_caveats),
    }
    if files is not None:
        out["files"] = dict(files)
    return out


_REPORT_SCHEMA = {
    "n": int,
    "alpha": str,
    "seed": int,
    "d": int,
    "k": int,
    "q": list,
    "q_used": str,
    "r": list,
    "u": list,
    "attempts": int,
    "ones_count": int,
    "cond1": bool,
    "cond2": bool,
    "cond2_vacuous": bool,
    "trop_rank_bound": list,
    "phi_trop_rank_bound": list,
    "kapranov_bound": str,
    "phi_kapranov_lower_bound": int,
    "kapranov_note": str,
    "padding": dict,
    "bounds_guaranteed": bool,
    "hypothesis_caveats": list,
}


def validate_report(data: dict) -> None:
    """Schema-check a serialized report; raises FormatError on any violation."""
    if not isinstance(data, dict):
        raise FormatError("report must be a JSON object")
    for key, typ in _REPORT_SCHEMA.items():
        if key not in data:
            raise FormatError(f"report is missing {key!r}")
        if not isinstance(data[key], typ) or (typ is int and isinstance(data[key], bool)):
            raise FormatError(f"report field {key!r} must be {typ.__name__}")
    for key in ("exact_trop_rank", "exact_trop_rank_phi"):
        if key not in data:
            raise FormatError(f"report is missing {key!r}")
        if data[key] is not None and not isinstance(data[key], int):
            raise FormatError(f"report field {key!r} must be an integer or null")
    for key in ("q", "r", "u", "trop_rank_bound", "phi_trop_rank_bound"):
        pair = data[key]
        if len(pair) != 2:
            raise FormatError(f"enclosure {key!r} must be a [lo, hi] pair")
        try:
            lo, hi = Fraction(str(pair[0])), Fraction(str(pair[1]))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"enclosure {key!r} endpoints must be rationals") from None
        if lo > hi:
            raise FormatError(f"enclosure {key!r} endpoints out of order")
    for key in ("rows_added", "cols_added"):
        if not isinstance(data["padding"].get(key), int):
            raise FormatError(f"padding field {key!r} must be an integer")
    for item in data["hypothesis_caveats"]:
        if not isinstance(item, str):
            raise FormatError("hypothesis_caveats must be a list of strings")
    # recomputable invariants
    n = data["n"]
    alpha = Fraction(data["alpha"])
    if Fraction(data["kapranov_bound"]) != n * (1 - alpha):
        raise FormatError("kapranov_bound does not equal n*(1-alpha)")
    r_lo, r_hi = (Fraction(str(x)) for x in data["r"])
    expect = [str(data["d"] + data["k"] * r_lo), str(data["d"] + data["k"] * r_hi)]
    if [str(Fraction(str(x))) for x in data["phi_trop_rank_bound"]] != expect:
        raise FormatError("phi_trop_rank_bound does not equal d + k*r")
