"""Smith normal form over the integers and modular linear solving.

``smith_form(X)`` returns unimodular U, V and the diagonal d with
``U @ X @ V == diag(d)``; reducing those identities modulo m solves
``X x = b (mod m)`` for any modulus m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .perm import symmetric_group


@dataclass(frozen=True)
class SmithForm:
    U: list
    V: list
    diag: list
    rows: int
    cols: int

    @property
    def rank(self):
        return len(self.diag)


def smith_form(X) -> SmithForm:
    A = [list(map(int, r)) for r in X]
    m = len(A)
    k = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(k)] for i in range(k)]

    def swap_rows(a, b):
        A[a], A[b] = A[b], A[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for r in A:
            r[a], r[b] = r[b], r[a]
        for r in V:
            r[a], r[b] = r[b], r[a]

    def add_row(dst, src, c):
        if c:
            A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        if c:
            for r in A:
                r[dst] += c * r[src]
            for r in V:
                r[dst] += c * r[src]

    diag = []
    t = 0
    while t < min(m, k):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, k):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, k):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder appeared; move it to the pivot and retry
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, t)
                for j in range(t, k):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), t, j)
                _, i, j = best
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, k) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    return SmithForm(U, V, diag, m, k)


def incidence_matrix(n: int):
    """Row s has a 1 at variable (s(k), k) for each k; variables (a, b) -> (a-1)*n + (b-1)."""
    rows = []
    for s in symmetric_group(n):
        r = [0] * (n * n)
        for k, x in enumerate(s.images):
            r[(x - 1) * n + k] = 1
        rows.append(r)
    return rows


@lru_cache(maxsize=None)
def incidence_snf(n: int) -> SmithForm:
    return smith_form(incidence_matrix(n))


def _congruence(d, c, m):
    g = math.gcd(d, m)
    if c % g:
        return None
    m2 = m // g
    if m2 == 1:
        return 0
    return (c // g) * pow(d // g, -1, m2) % m2


def solve_mod(S: SmithForm, b, m: int):
    """One x with X x = b (mod m), or None."""
    if m == 1:
        return [0] * S.cols
    c = [sum(u * v for u, v in zip(row, b)) % m for row in S.U]
    y = [0] * S.cols
    for i, d in enumerate(S.diag):
        yi = _congruence(d % m, c[i], m)
        if yi is None:
            return None
        y[i] = yi
    if any(c[i] for i in range(S.rank, S.rows)):
        return None
    return [sum(v * yy for v, yy in zip(row, y)) % m for row in S.V]


def _mulmod(Umod: np.ndarray, B: np.ndarray, m: int) -> np.ndarray:
    """(Umod @ B) mod m with entries < m < 2**31, avoiding int64 overflow."""
    lo = Umod & 0xFFFF
    hi = Umod >> 16
    r_lo = (lo @ B) % m
    r_hi = (hi @ B) % m
    return (r_lo + (r_hi * 65536) % m) % m


def feasible_mod(S: SmithForm, B: np.ndarray, m: int) -> np.ndarray:
    """For each column b of B, whether X x = b (mod m) is solvable."""
    if m == 1:
        return np.ones(B.shape[1], dtype=bool)
    Umod = np.array([[u % m for u in row] for row in S.U], dtype=np.int64)
    C = _mulmod(Umod, B.astype(np.int64) % m, m)
    ok = np.ones(B.shape[1], dtype=bool)
    for i, d in enumerate(S.diag):
        g = math.gcd(d % m, m)
        if g > 1:
            ok &= C[i] % g == 0
    if S.rank < S.rows:
        ok &= ~np.any(C[S.rank:], axis=0)
    return ok
