"""Independent brute-force reference implementations used by the test suite.

Everything here recomputes results from first principles (permutation sums,
existential searches, exhaustive enumeration) so that the package's faster
algorithms are checked against genuinely separate code paths.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from troprank import INF, Matrix, ghost, st_add, st_mul, tangible


def brute_permanent(m: Matrix):
    """Permanent as the literal sum over all n! permutation products."""
    n = m.nrows
    assert n == m.ncols
    grid = m.entries
    acc = INF
    for perm in permutations(range(n)):
        prod = tangible(0)
        for i, j in enumerate(perm):
            prod = st_mul(prod, grid[i][j])
        acc = st_add(acc, prod)
    return acc


def brute_is_nonsingular(m: Matrix) -> bool:
    p = brute_permanent(m)
    return not p.is_inf and not p.is_ghost


def brute_tropical_rank(m: Matrix) -> int:
    """Largest s with a non-singular s-by-s submatrix, by full enumeration."""
    for s in range(min(m.nrows, m.ncols), 0, -1):
        for rs in combinations(range(m.nrows), s):
            for cs in combinations(range(m.ncols), s):
                sub = Matrix(
                    tuple(str(i) for i in range(s)),
                    tuple(str(j) for j in range(s)),
                    tuple(tuple(m.entries[i][j] for j in cs) for i in rs),
                )
                if brute_is_nonsingular(sub):
                    return s
    return 0


def existential_ghost_surpasses(c, d) -> bool:
    """The relation by its defining existential: c equals d, or d plus some
    ghost.  Ghost candidates range over a grid around the values involved."""
    if c == d:
        return True
    grid = {Fraction(0)}
    for x in (c, d):
        if not x.is_inf:
            grid.update({x.value, x.value - 1, x.value + 1})
    return any(c == st_add(d, ghost(v)) for v in grid)


def brute_min_assignment(m: Matrix):
    """All optimal assignments of the value-projection, found by enumeration.

    Returns (best, optima) where best is the minimal assignment cost as a
    Fraction (None if every permutation hits an infinite entry) and optima
    lists the permutations attaining it.
    """
    n = m.nrows
    assert n == m.ncols
    grid = m.entries
    best = None
    optima = []
    for perm in permutations(range(n)):
        total = Fraction(0)
        feasible = True
        for i, j in enumerate(perm):
            e = grid[i][j]
            if e.is_inf:
                feasible = False
                break
            total += e.value
        if not feasible:
            continue
        if best is None or total < best:
            best, optima = total, [perm]
        elif total == best:
            optima.append(perm)
    return best, optima


def naive_has_all_ones_block(bits, rho: int) -> bool:
    """Exhaustive search for a rho-by-rho all-ones submatrix."""
    nrows = len(bits)
    ncols = len(bits[0]) if nrows else 0
    if rho <= 0:
        return True
    if rho > nrows or rho > ncols:
        return False
    for rs in combinations(range(nrows), rho):
        for cs in combinations(range(ncols), rho):
            if all(bits[i][j] == 1 for i in rs for j in cs):
                return True
    return False


def sympy_series_rank(l) -> int:
    """Rank of a rational-coefficient series matrix via sympy, after scaling
    exponents to integers exactly as the contract describes."""
    import sympy

    exps = [e for row in l.entries for s in row for _, e in s.terms]
    if not exps:
        return 0
    lcm = 1
    for e in exps:
        lcm = lcm * e.denominator // _gcd(lcm, e.denominator)
    shift = min(e * lcm for e in exps)
    if shift > 0:
        shift = Fraction(0)
    s = sympy.Symbol("s")
    rows = []
    for row in l.entries:
        out = []
        for ser in row:
            expr = sympy.Integer(0)
            for coeff, e in ser.terms:
                expr += sympy.Rational(coeff) * s ** int(e * lcm - shift)
            out.append(sympy.expand(expr))
        rows.append(out)
    return sympy.Matrix(rows).rank()


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
