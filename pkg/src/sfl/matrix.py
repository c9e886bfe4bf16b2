"""Square matrices over a :class:`Field` and exact Gaussian elimination.

The elimination helpers (`rref`, `rank_of`, `nullspace`, `solve_linear`)
work on plain lists of rows so that the n^2 x n^2 operators and subspace
bases can share them.
"""

from __future__ import annotations

from .errors import DimensionMismatch, FieldMismatch, SflError, ZeroEntry
from .field import Field
from .perm import Permutation


class SquareMatrix:
    """Immutable n x n matrix; ``A[i, j]`` is 1-based."""

    __slots__ = ("field", "n", "rows")

    def __init__(self, field: Field, rows, *, coerce: bool = True):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square and non-empty")
        if coerce:
            rows = [[field(x) for x in r] for r in rows]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("SquareMatrix is immutable")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i - 1][j - 1]

    def __eq__(self, other):
        return (
            isinstance(other, SquareMatrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"SquareMatrix({self.field!r}, {[list(r) for r in self.rows]})"

    # -- constructors ---------------------------------------------------

    @classmethod
    def _raw(cls, field, rows):
        return cls(field, rows, coerce=False)

    @classmethod
    def zeros(cls, field: Field, n: int):
        return cls._raw(field, [[field.zero] * n for _ in range(n)])

    @classmethod
    def ones(cls, field: Field, n: int):
        """The all-ones matrix E, neutral for the Hadamard product."""
        return cls._raw(field, [[field.one] * n for _ in range(n)])

    @classmethod
    def identity(cls, field: Field, n: int):
        return cls._raw(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, field: Field, n: int, i: int, j: int):
        """E_{i,j}, 1-based."""
        rows = [[field.zero] * n for _ in range(n)]
        rows[i - 1][j - 1] = field.one
        return cls._raw(field, rows)

    @classmethod
    def diagonal(cls, field: Field, diag):
        n = len(diag)
        return cls._raw(field, [[diag[i] if i == j else field.zero for j in range(n)] for i in range(n)])

    @classmethod
    def outer(cls, field: Field, x, y):
        """X Y^T."""
        return cls._raw(field, [[field.mul(a, b) for b in y] for a in x])

    @classmethod
    def random(cls, field: Field, n: int, rng, nonzero: bool = False):
        return cls._raw(field, [[field.random_element(rng, nonzero) for _ in range(n)] for _ in range(n)])

    # -- structure ------------------------------------------------------

    def column(self, j: int):
        return [r[j - 1] for r in self.rows]

    def row(self, i: int):
        return list(self.rows[i - 1])

    def transpose(self):
        return SquareMatrix._raw(self.field, list(zip(*self.rows)))

    def is_nowhere_zero(self) -> bool:
        return all(x != 0 for r in self.rows for x in r)

    def to_json(self):
        return [[self.field.to_json(x) for x in r] for r in self.rows]

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")

    def __matmul__(self, other: "SquareMatrix"):
        self._check(other)
        F = self.field
        cols = list(zip(*other.rows))
        return SquareMatrix._raw(F, [[F.sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])

    def __add__(self, other):
        self._check(other)
        F = self.field
        return SquareMatrix._raw(F, [[F.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c):
        F = self.field
        return SquareMatrix._raw(F, [[F.mul(c, a) for a in r] for r in self.rows])

    def det(self):
        return determinant(self.field, [list(r) for r in self.rows])

    def inverse(self):
        F, n = self.field, self.n
        aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(self.rows)]
        red, piv = rref(F, aug)
        if piv != list(range(n)):
            raise SflError("matrix is singular")
        return SquareMatrix._raw(F, [r[n:] for r in red[:n]])

    def rank(self) -> int:
        return matrix_rank(self)


def perm_matrix(s: Permutation, field: Field) -> SquareMatrix:
    """P_s with entry (i, j) equal to 1 iff i = s(j)."""
    n = s.n
    rows = [[field.zero] * n for _ in range(n)]
    for j in range(1, n + 1):
        rows[s(j) - 1][j - 1] = field.one
    return SquareMatrix._raw(field, rows)


def hadamard(A: SquareMatrix, B: SquareMatrix) -> SquareMatrix:
    A._check(B)
    F = A.field
    return SquareMatrix._raw(F, [[F.mul(a, b) for a, b in zip(r, s)] for r, s in zip(A.rows, B.rows)])


def hadamard_inverse(A: SquareMatrix) -> SquareMatrix:
    F = A.field
    out = []
    for i, r in enumerate(A.rows, 1):
        row = []
        for j, a in enumerate(r, 1):
            if a == 0:
                raise ZeroEntry(i, j)
            row.append(F.inv(a))
        out.append(row)
    return SquareMatrix._raw(F, out)


def matrix_rank(A: SquareMatrix) -> int:
    return rank_of(A.field, [list(r) for r in A.rows])


# -- list-based elimination ------------------------------------------------


def rref(F: Field, rows):
    """Reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    finite = F.is_finite
    p = F.p
    for c in range(ncols):
        pr = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = F.inv(m[r][c])
        if finite:
            m[r] = [x * inv % p for x in m[r]]
        else:
            m[r] = [x * inv for x in m[r]]
        pivot_row = m[r]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                if finite:
                    m[k] = [(a - f * b) % p for a, b in zip(m[k], pivot_row)]
                else:
                    m[k] = [a - f * b for a, b in zip(m[k], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_of(F: Field, rows) -> int:
    return len(rref(F, rows)[1])


def nullspace(F: Field, rows, ncols: int | None = None):
    """Basis of {x : rows @ x = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    red, piv = rref(F, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [F.zero] * ncols
        v[fc] = F.one
        for r, pc in zip(red, piv):
            v[pc] = F.neg(r[fc])
        basis.append(v)
    return basis


def solve_linear(F: Field, rows, rhs):
    """One solution x of rows @ x = rhs, or None."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(F, aug)
    if piv and piv[-1] == ncols:
        return None
    x = [F.zero] * ncols
    for r, pc in zip(red, piv):
        x[pc] = r[ncols]
    return x


def determinant(F: Field, rows):
    m = [list(r) for r in rows]
    n = len(m)
    det = F.one
    for c in range(n):
        pr = next((k for k in range(c, n) if m[k][c] != 0), None)
        if pr is None:
            return F.zero
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = F.neg(det)
        det = F.mul(det, m[c][c])
        inv = F.inv(m[c][c])
        for k in range(c + 1, n):
            if m[k][c] != 0:
                f = F.mul(m[k][c], inv)
                m[k] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[k], m[c])]
    return det
