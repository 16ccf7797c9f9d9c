# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled assignment kernels; same contract as ``_kernels_py``.

Costs are int64 (the encoder guarantees they fit); matrices up to 64x64.
"""

import numpy as np

cimport numpy as cnp

BACKEND = "compiled"

cdef enum:
    MAXN = 64

ctypedef cnp.int64_t i64
ctypedef cnp.uint8_t u8
ctypedef cnp.int32_t i32


cdef struct JVState:
    i64 u[MAXN + 1]
    i64 v[MAXN + 1]
    i64 minv[MAXN]
    int p[MAXN + 1]
    int way[MAXN]
    u8 reached[MAXN]
    u8 used[MAXN + 1]
    int match[MAXN]


cdef bint _jv(const i64[:, ::1] cost, const u8[:, ::1] fin,
              const i32* sub_rows, const i32* sub_cols, int n,
              int forbid_r, int forbid_c, JVState* w, i64* out_value) noexcept nogil:
    cdef int i, j, i0, j0, j1, rr
    cdef i64 delta, cur, value, ui0
    for j in range(n + 1):
        w.p[j] = -1
        w.u[j] = 0
        w.v[j] = 0
    for i in range(n):
        w.p[n] = i
        j0 = n
        for j in range(n):
            w.reached[j] = 0
            w.used[j] = 0
        w.used[n] = 0
        while True:
            w.used[j0] = 1
            i0 = w.p[j0]
            rr = sub_rows[i0]
            ui0 = w.u[i0]
            delta = 0
            j1 = -1
            for j in range(n):
                if w.used[j]:
                    continue
                if fin[rr, sub_cols[j]] and not (i0 == forbid_r and j == forbid_c):
                    cur = cost[rr, sub_cols[j]] - ui0 - w.v[j]
                    if not w.reached[j] or cur < w.minv[j]:
                        w.minv[j] = cur
                        w.way[j] = j0
                        w.reached[j] = 1
                if w.reached[j] and (j1 < 0 or w.minv[j] < delta):
                    delta = w.minv[j]
                    j1 = j
            if j1 < 0:
                return 0
            for j in range(n):
                if w.used[j]:
                    w.u[w.p[j]] += delta
                    w.v[j] -= delta
                elif w.reached[j]:
                    w.minv[j] -= delta
            if w.used[n]:
                w.u[w.p[n]] += delta
                w.v[n] -= delta
            j0 = j1
            if w.p[j0] == -1:
                break
        while j0 != n:
            j1 = w.way[j0]
            w.p[j0] = w.p[j1]
            j0 = j1

    value = 0
    for j in range(n):
        w.match[w.p[j]] = j
        value += cost[sub_rows[w.p[j]], sub_cols[j]]
    out_value[0] = value
    return 1


cdef bint _nonsingular(const i64[:, ::1] cost, const u8[:, ::1] fin,
                       const u8[:, ::1] tang, const i32* sub_rows,
                       const i32* sub_cols, int n, JVState* w) noexcept nogil:
    cdef i64 value, value2
    cdef int i
    cdef int match[MAXN]
    if not _jv(cost, fin, sub_rows, sub_cols, n, -1, -1, w, &value):
        return 0
    for i in range(n):
        match[i] = w.match[i]
        if not tang[sub_rows[i], sub_cols[w.match[i]]]:
            return 0
    for i in range(n):
        if _jv(cost, fin, sub_rows, sub_cols, n, i, match[i], w, &value2):
            if value2 == value:
                return 0
    return 1


def solve_assignment(const i64[:, ::1] cost, const u8[:, ::1] fin,
                     const i32[::1] sub_rows, const i32[::1] sub_cols,
                     int forbid_r=-1, int forbid_c=-1):
    cdef JVState w
    cdef i64 value = 0
    cdef int n = sub_rows.shape[0]
    cdef bint ok
    with nogil:
        ok = _jv(cost, fin, &sub_rows[0], &sub_cols[0], n, forbid_r, forbid_c, &w, &value)
    if not ok:
        return False, 0, []
    return True, int(value), [w.match[i] for i in range(n)]


def solve_assignment_duals(const i64[:, ::1] cost, const u8[:, ::1] fin,
                           const i32[::1] sub_rows, const i32[::1] sub_cols):
    cdef JVState w
    cdef i64 value = 0
    cdef int n = sub_rows.shape[0]
    cdef bint ok
    with nogil:
        ok = _jv(cost, fin, &sub_rows[0], &sub_cols[0], n, -1, -1, &w, &value)
    if not ok:
        return False, 0, [], [], []
    return (True, int(value), [w.match[i] for i in range(n)],
            [int(w.u[i]) for i in range(n)], [int(w.v[j]) for j in range(n)])


def is_nonsingular(const i64[:, ::1] cost, const u8[:, ::1] fin,
                   const u8[:, ::1] tang, const i32[::1] sub_rows,
                   const i32[::1] sub_cols):
    cdef JVState w
    cdef int n = sub_rows.shape[0]
    cdef bint ok
    with nogil:
        ok = _nonsingular(cost, fin, tang, &sub_rows[0], &sub_cols[0], n, &w)
    return bool(ok)


def first_nonsingular(const i64[:, ::1] cost, const u8[:, ::1] fin,
                      const u8[:, ::1] tang, const i32[:, ::1] row_sets,
                      const i32[:, ::1] col_sets, Py_ssize_t start, Py_ssize_t stop):
    """Index of the first non-singular (row set, column set) pair, or -1."""
    cdef JVState w
    cdef int n = row_sets.shape[1]
    cdef Py_ssize_t width = col_sets.shape[0]
    cdef Py_ssize_t ri, ci
    cdef Py_ssize_t found = -1
    with nogil:
        for ri in range(start, stop):
            for ci in range(width):
                if _nonsingular(cost, fin, tang, &row_sets[ri, 0], &col_sets[ci, 0], n, &w):
                    found = ri * width + ci
                    break
            if found >= 0:
                break
    return found
