"""Pure-Python assignment kernels (fallback for the compiled module).

Costs arrive as pre-scaled integers (arbitrary precision is fine here), with
separate 0/1 grids marking which entries are finite and which are tangible.
The compiled module in ``_kernels.pyx`` implements exactly the same contract
on int64 arrays; ``troprank.kernels`` picks one at import time.

The solver is the Jonker-Volgenant shortest-augmenting-path method with
potentials.  Infinite entries are never relaxed; a column that no visited row
can reach stays unreached, and if Dijkstra runs out of reached columns the
submatrix admits no finite perfect matching and is reported infeasible.
"""

from __future__ import annotations

BACKEND = "pure"


def solve_assignment(cost, fin, sub_rows, sub_cols, forbid_r=-1, forbid_c=-1):
    """Min-cost perfect matching on the square submatrix ``sub_rows x sub_cols``.

    ``forbid_r``/``forbid_c`` (positions *within the submatrix*) exclude one
    edge, which is how the uniqueness re-solves are driven.  Returns
    ``(feasible, value, match)`` with ``match[i]`` the submatrix column
    assigned to submatrix row ``i``.
    """
    feasible, value, match, _, _ = _jv(cost, fin, sub_rows, sub_cols, forbid_r, forbid_c)
    return feasible, value, match


def solve_assignment_duals(cost, fin, sub_rows, sub_cols):
    """Like :func:`solve_assignment` but also returns the dual potentials.

    The duals satisfy ``cost[i][j] - u[i] - v[j] >= 0`` on finite entries,
    with equality on the matched edges.
    """
    return _jv(cost, fin, sub_rows, sub_cols, -1, -1)


def _jv(cost, fin, sub_rows, sub_cols, forbid_r, forbid_c):
    n = len(sub_rows)
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [-1] * (n + 1)  # p[j]: row matched to column j; column n is virtual
    way = [0] * (n + 1)
    for i in range(n):
        p[n] = i
        j0 = n
        minv = [0] * n
        reached = [False] * n
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            ci0 = cost[sub_rows[i0]]
            fi0 = fin[sub_rows[i0]]
            ui0 = u[i0]
            delta = 0
            j1 = -1
            for j in range(n):
                if used[j]:
                    continue
                if fi0[sub_cols[j]] and not (i0 == forbid_r and j == forbid_c):
                    cur = ci0[sub_cols[j]] - ui0 - v[j]
                    if not reached[j] or cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                        reached[j] = True
                if reached[j] and (j1 < 0 or minv[j] < delta):
                    delta = minv[j]
                    j1 = j
            if j1 < 0:
                return False, 0, [], [], []
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                elif reached[j]:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == -1:
                break
        while j0 != n:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    match = [-1] * n
    value = 0
    for j in range(n):
        match[p[j]] = j
        value += cost[sub_rows[p[j]]][sub_cols[j]]
    return True, value, match, u[:n], v[:n]


def is_nonsingular(cost, fin, tang, sub_rows, sub_cols):
    """Tangible-permanent test: finite optimum, unique, all entries tangible."""
    n = len(sub_rows)
    feasible, value, match = solve_assignment(cost, fin, sub_rows, sub_cols)
    if not feasible:
        return False
    for i in range(n):
        if not tang[sub_rows[i]][sub_cols[match[i]]]:
            return False
    for i in range(n):
        feasible2, value2, _ = solve_assignment(
            cost, fin, sub_rows, sub_cols, forbid_r=i, forbid_c=match[i]
        )
        if feasible2 and value2 == value:
            return False
    return True


def first_nonsingular(cost, fin, tang, row_sets, col_sets, start, stop):
    """Index of the first non-singular (row set, column set) pair, or -1.

    Pairs are ordered lexicographically: row sets ``start..stop-1`` (outer),
    all column sets (inner); the returned index is ``ri * len(col_sets) + ci``.
    """
    width = len(col_sets)
    for ri in range(start, stop):
        rs = row_sets[ri]
        for ci in range(width):
            if is_nonsingular(cost, fin, tang, rs, col_sets[ci]):
                return ri * width + ci
    return -1
