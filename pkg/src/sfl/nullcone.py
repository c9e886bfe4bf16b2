"""Subspaces of Mat_n(F) inside the null cone of a Schur functional.

Matrices are handled as column-stacked vectors (see :mod:`sfl.linmap`).
The exhaustive oracle enumerates subspaces by their reduced row-echelon
form: a pivot pattern plus the free entries to the right of each pivot.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .equivalence import is_normalized, normalize, partitions
from .errors import BudgetExceeded, InfiniteField, NotNormalized, ScaleTooLarge, SflError, ZeroVector
from .field import Field
from .groupmap import GroupMap
from .linmap import unvec, vec
from .matrix import SquareMatrix, hadamard, hadamard_inverse, nullspace, rank_of, rref
from .perm import symmetric_group

COLUMN = "column"
ROW = "row"
DEFAULT_BUDGET = 1 << 26
CHUNK = 4096


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("SFL_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class MatrixSubspace:
    """Subspace of Mat_n(F) stored by the RREF of its vectorized basis."""

    field: Field
    n: int
    rref_rows: tuple

    @classmethod
    def span(cls, field: Field, n: int, vectors) -> "MatrixSubspace":
        vectors = [list(v) for v in vectors]
        red, _ = rref(field, vectors) if vectors else ([], [])
        return cls(field, n, tuple(tuple(r) for r in red))

    @classmethod
    def from_matrices(cls, field, n, matrices):
        return cls.span(field, n, [vec(M) for M in matrices])

    @property
    def dim(self) -> int:
        return len(self.rref_rows)

    @property
    def codim(self) -> int:
        return self.n * self.n - self.dim

    @property
    def basis(self):
        return [unvec(self.field, r, self.n) for r in self.rref_rows]

    def annihilator(self):
        """Rows c with sum c_k v_k = 0 for every v in the subspace."""
        if not self.rref_rows:
            N = self.n * self.n
            return [[self.field.one if i == j else self.field.zero for j in range(N)] for i in range(N)]
        return nullspace(self.field, [list(r) for r in self.rref_rows], self.n * self.n)

    def hadamard(self, A: SquareMatrix) -> "MatrixSubspace":
        """A * S = {A * M : M in S}."""
        return MatrixSubspace.from_matrices(self.field, self.n, [hadamard(A, M) for M in self.basis])

    def contains(self, M: SquareMatrix) -> bool:
        rows = [list(r) for r in self.rref_rows]
        return rank_of(self.field, rows + [vec(M)]) == len(rows)

    def to_json(self):
        return {"n": self.n, "basis": [B.to_json() for B in self.basis]}


def _check_vector(X):
    if all(x == 0 for x in X):
        raise ZeroVector("X must be nonzero")


def annihilator_rows(X, side: str, field: Field):
    """Linear equations cutting out V_X (column side) or V^X (row side)."""
    n = len(X)
    rows = []
    for t in range(n):
        r = [field.zero] * (n * n)
        for s in range(n):
            if side == COLUMN:
                # (M X)_t = sum_s m_{t,s} x_s
                r[s * n + t] = X[s]
            else:
                # (X^T M)_t = sum_s x_s m_{s,t}
                r[t * n + s] = X[s]
        rows.append(r)
    return rows


def v_x_basis(X, side: str, field: Field) -> MatrixSubspace:
    X = [field(x) for x in X]
    _check_vector(X)
    if side not in (COLUMN, ROW):
        raise SflError(f"side must be 'column' or 'row', got {side!r}")
    n = len(X)
    return MatrixSubspace.span(field, n, nullspace(field, annihilator_rows(X, side, field), n * n))


def intersection_codim(field: Field, specs) -> int:
    """Codimension of the intersection of V_X / V^X spaces given as (X, side) pairs."""
    rows = []
    for X, side in specs:
        rows.extend(annihilator_rows([field(x) for x in X], side, field))
    return rank_of(field, rows)


def is_adapted_vector(f_norm: GroupMap, X, side: str) -> bool:
    if not is_normalized(f_norm):
        raise NotNormalized("map is not normalized")
    X = [f_norm.field(x) for x in X]
    _check_vector(X)
    p = partitions(f_norm)
    classes = p.column_classes if side == COLUMN else p.row_classes
    supp = {k for k, x in enumerate(X, 1) if x != 0}
    return any(supp <= set(c) for c in classes)


# -- vectorized evaluation ----------------------------------------------------------------


def _eval_batch(f: GroupMap, vecs: np.ndarray) -> np.ndarray:
    """f~ at each row of ``vecs`` (column-stacked matrices, entries in [0, p))."""
    p = f.field.p
    n = f.n
    out = np.zeros(vecs.shape[0], dtype=np.int64)
    for s, v in f.items():
        term = np.full(vecs.shape[0], v, dtype=np.int64)
        for j, x in enumerate(s.images):
            term = term * vecs[:, j * n + x - 1] % p
        out = (out + term) % p
    return out


def subspace_in_cone(f: GroupMap, S: MatrixSubspace, budget: int = DEFAULT_BUDGET) -> bool:
    F = f.field
    if not F.is_finite:
        raise InfiniteField("cone inclusion is decided by enumeration over finite fields")
    q = F.p
    d = S.dim
    if d == 0:
        return True
    if q**d > budget:
        raise BudgetExceeded(f"{q}^{d} elements exceed the budget {budget}")
    basis = np.array(S.rref_rows, dtype=np.int64)
    total = q**d
    for start in range(0, total, CHUNK):
        ids = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        coeffs = (ids[:, None] // (q ** np.arange(d, dtype=np.int64))[None, :]) % q
        elems = coeffs @ basis % q
        if np.any(_eval_batch(f, elems)):
            return False
    return True


def find_noncone_element(f: GroupMap, S: MatrixSubspace):
    """Some M in S with f~(M) != 0, or None (finite fields, small S)."""
    F = f.field
    q = F.p
    d = S.dim
    basis = np.array(S.rref_rows, dtype=np.int64)
    for start in range(0, q**d, CHUNK):
        ids = np.arange(start, min(q**d, start + CHUNK), dtype=np.int64)
        coeffs = (ids[:, None] // (q ** np.arange(d, dtype=np.int64))[None, :]) % q
        elems = coeffs @ basis % q
        hit = np.nonzero(_eval_batch(f, elems))[0]
        if len(hit):
            return unvec(F, [int(x) for x in elems[hit[0]]], f.n)
    return None


# -- exhaustive oracle ------------------------------------------------------------------

ORACLE_LIMITS = {2: 3, 3: 2}


def _cone_table(f: GroupMap) -> np.ndarray:
    q = f.field.p
    N = f.n * f.n
    ids = np.arange(q**N, dtype=np.int64)
    vecs = (ids[:, None] // (q ** np.arange(N, dtype=np.int64))[None, :]) % q
    return _eval_batch(f, vecs) == 0


def _pattern_hits(q, N, d, pivots, table, combos, weights):
    """RREF bases with the given pivot columns whose span lies inside the cone."""
    free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, N) if c not in pivots]
    k = len(free)
    base = np.zeros((d, N), dtype=np.int64)
    for r, pc in enumerate(pivots):
        base[r, pc] = 1
    rows_idx = np.array([r for r, _ in free], dtype=np.int64)
    cols_idx = np.array([c for _, c in free], dtype=np.int64)
    hits = []
    total = q**k
    for start in range(0, total, CHUNK):
        ids = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        bases = np.broadcast_to(base, (len(ids), d, N)).copy()
        if k:
            digits = (ids[:, None] // (q ** np.arange(k, dtype=np.int64))[None, :]) % q
            bases[:, rows_idx, cols_idx] = digits
        elems = np.einsum("ed,bdn->ben", combos, bases) % q
        codes = elems @ weights
        inside = table[codes].all(axis=1)
        for b in np.nonzero(inside)[0]:
            hits.append(tuple(tuple(int(x) for x in row) for row in bases[b]))
    return hits


def subspaces_in_cone(f: GroupMap, codim: int):
    """Every subspace of the given codimension contained in the cone, as RREF tuples.

    Returns (hits, number of subspaces scanned).
    """
    F = f.field
    if not F.is_finite:
        raise InfiniteField("oracle needs a finite field")
    q = F.p
    n = f.n
    if q not in ORACLE_LIMITS or n > ORACLE_LIMITS[q]:
        raise ScaleTooLarge("oracle supports GF(2) with n <= 3 and GF(3) with n <= 2")
    N = n * n
    d = N - codim
    if d <= 0:
        return [()], 1
    table = _cone_table(f)
    ids = np.arange(q**d, dtype=np.int64)
    combos = (ids[:, None] // (q ** np.arange(d, dtype=np.int64))[None, :]) % q
    weights = q ** np.arange(N, dtype=np.int64)
    patterns = list(itertools.combinations(range(N), d))
    scanned = sum(q ** sum(N - pc - 1 - (d - r - 1) for r, pc in enumerate(pv)) for pv in patterns)

    def run(pv):
        return _pattern_hits(q, N, d, pv, table, combos, weights)

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, patterns))
    else:
        results = [run(pv) for pv in patterns]
    hits = sorted(h for res in results for h in res)
    return hits, scanned


def projective_points(field: Field, n: int):
    """Nonzero vectors with first nonzero entry 1."""
    out = []
    for v in itertools.product(range(field.p), repeat=n):
        nz = next((x for x in v if x), 0)
        if nz == 1:
            out.append([field(x) for x in v])
    return out


def predicted_spaces(f: GroupMap):
    """{A*V_X, A*V^X : X adapted to the normalized map g = f.A}, keyed by RREF."""
    F = f.field
    w = normalize(f)
    g, A = w.g, w.A
    p = partitions(g)
    out = {}
    for side, classes in ((COLUMN, p.column_classes), (ROW, p.row_classes)):
        for X in projective_points(F, f.n):
            supp = {k for k, x in enumerate(X, 1) if x}
            if any(supp <= set(c) for c in classes):
                S = v_x_basis(X, side, F).hadamard(A)
                out[S.rref_rows] = ("VX" if side == COLUMN else "VXT", X)
    return out, A


def minimal_subspace_oracle(f: GroupMap):
    """All codim-n subspaces inside the cone, each labelled against the prediction.

    Labels are relative to the normalizing Hadamard factor A: kind "VX" with X
    means the space A * V_X.
    """
    F = f.field
    hits, scanned = subspaces_in_cone(f, f.n)
    predicted, A = predicted_spaces(f)
    found = []
    for h in hits:
        label = predicted.get(h)
        if label is None:
            found.append({"kind": "other", "X": None, "space": MatrixSubspace(F, f.n, h)})
        else:
            found.append({"kind": label[0], "X": label[1], "space": MatrixSubspace(F, f.n, h)})
    return {
        "found": found,
        "scanned": scanned,
        "predicted": len(predicted),
        "A": A,
        "matches": set(hits) == set(predicted),
    }


def codim_check(f: GroupMap, codim: int):
    """Count of subspaces of the given codimension inside the cone, and the number scanned."""
    hits, scanned = subspaces_in_cone(f, codim)
    return len(hits), scanned


def gaussian_binomial(N: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (N - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
