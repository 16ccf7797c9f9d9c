from __future__ import annotations

import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from troprank import (
    INF,
    Matrix,
    SymmetrizedMatrix,
    ghost,
    matrix_from_json,
    symmetrized_from_json,
    tangible,
)

FIXTURES = Path(__file__).parent / "fixtures"


def load_json(name: str):
    with open(FIXTURES / name) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def example_a():
    """The 6x6 symmetrized golden matrix (rows i#1/i#2, columns 1..6)."""
    return symmetrized_from_json(load_json("example33_A.json"))


@pytest.fixture(scope="session")
def example_sigma():
    """Its 3x3 collapsed counterpart with the ghost diagonal."""
    return matrix_from_json(load_json("example33_sigma.json"))


# ---------------------------------------------------------------------------
# Random instance generators (plain functions so tests control their seeds).
# ---------------------------------------------------------------------------

SMALL_GRID = (Fraction(0), Fraction(1), Fraction(2), Fraction(3))


def rand_scalar(rng: random.Random, grid=SMALL_GRID, inf_weight=2):
    """A random scalar: tangible/ghost over `grid`, or infinity."""
    roll = rng.randrange(len(grid) * 2 + inf_weight)
    if roll >= len(grid) * 2:
        return INF
    v = grid[roll % len(grid)]
    return tangible(v) if roll < len(grid) else ghost(v)


def rand_matrix(rng: random.Random, nrows: int, ncols: int, grid=SMALL_GRID,
                inf_weight=2) -> Matrix:
    return Matrix(
        tuple(str(i + 1) for i in range(nrows)),
        tuple(str(j + 1) for j in range(ncols)),
        tuple(
            tuple(rand_scalar(rng, grid, inf_weight) for _ in range(ncols))
            for _ in range(nrows)
        ),
    )


def rand_tropical_matrix(rng: random.Random, nrows: int, ncols: int,
                         grid=SMALL_GRID, inf_weight=2) -> Matrix:
    """Ghost-free random matrix (tangible entries and infinities only)."""

    def entry():
        if rng.randrange(len(grid) + inf_weight) >= len(grid):
            return INF
        return tangible(rng.choice(grid))

    return Matrix(
        tuple(str(i + 1) for i in range(nrows)),
        tuple(str(j + 1) for j in range(ncols)),
        tuple(tuple(entry() for _ in range(ncols)) for _ in range(nrows)),
    )


def rand_tangible_matrix(rng: random.Random, n: int, span: int = 1000) -> Matrix:
    """Square matrix of distinct random tangible rationals (generic: no ties)."""
    vals = rng.sample(range(span * 4), n * n)
    return Matrix(
        tuple(str(i + 1) for i in range(n)),
        tuple(str(j + 1) for j in range(n)),
        tuple(
            tuple(tangible(Fraction(vals[i * n + j], span)) for j in range(n))
            for i in range(n)
        ),
    )


def rand_symmetrized(rng: random.Random, max_i=3, max_j=4,
                     grid=SMALL_GRID) -> SymmetrizedMatrix:
    """A random well-formed symmetrized matrix: anchor block per the layout
    rules, with each paired row drawing its own tangible/infinite entries."""
    ni = rng.randint(1, max_i)
    nj = rng.randint(1, max_j)
    I = tuple(str(i + 1) for i in range(ni))
    J = tuple(f"c{j + 1}" for j in range(nj))
    rows = tuple(f"{i}#1" for i in I) + tuple(f"{i}#2" for i in I)
    entries = []
    for half in (1, 2):
        for i, ilabel in enumerate(I):
            anchor = tuple(
                tangible(0) if k == i else INF for k in range(ni)
            )
            free = tuple(
                INF if rng.randrange(5) == 0 else tangible(rng.choice(grid))
                for _ in range(nj)
            )
            entries.append(anchor + free)
    return SymmetrizedMatrix(
        Matrix(rows, I + J, tuple(entries)), I=I, J=J
    )


def banded_pattern(d: int, width: int):
    """A d-by-width 0-1 grid with two cyclic ones per row.

    Distinct rows share at most one common 1-column whenever width >= 3, so
    the grid has no 2x2 all-ones block at those sizes.
    """
    from troprank.construction import ZeroOneMatrix

    return ZeroOneMatrix(
        d,
        width,
        [[1 if (j - i) % width in (0, 1) else 0 for j in range(width)]
         for i in range(d)],
    )
