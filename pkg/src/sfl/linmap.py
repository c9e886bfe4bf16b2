"""Linear endomorphisms of Mat_n(F) as n^2 x n^2 matrices.

An n x n matrix M is flattened column by column: the 1-based entry (i, j)
sits at 0-based position ``(j-1)*n + (i-1)``.  Every constructor is built
from the images of the unit matrices E_{i,j}, so the flattening convention
lives in exactly one place.
"""

from __future__ import annotations

from .errors import DimensionMismatch, FieldMismatch, SflError
from .field import Field
from .matrix import SquareMatrix, determinant, perm_matrix, rref
from .perm import Permutation


def vec(M: SquareMatrix) -> list:
    n = M.n
    return [M.rows[i][j] for j in range(n) for i in range(n)]


def unvec(field: Field, v, n: int) -> SquareMatrix:
    return SquareMatrix._raw(field, [[v[j * n + i] for j in range(n)] for i in range(n)])


def vec_index(n: int, i: int, j: int) -> int:
    """0-based flat position of the 1-based entry (i, j)."""
    return (j - 1) * n + (i - 1)


class TransformationMatrix:
    __slots__ = ("field", "n", "entries")

    def __init__(self, field: Field, n: int, entries, *, coerce: bool = True):
        N = n * n
        rows = [list(r) for r in entries]
        if len(rows) != N or any(len(r) != N for r in rows):
            raise DimensionMismatch(f"expected a {N}x{N} array")
        if coerce:
            rows = [[field(x) for x in r] for r in rows]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("TransformationMatrix is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, TransformationMatrix)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"TransformationMatrix(n={self.n}, field={self.field!r})"

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_function(cls, field: Field, n: int, fn) -> "TransformationMatrix":
        """Matrix of the linear map ``fn`` (SquareMatrix -> SquareMatrix)."""
        N = n * n
        cols = []
        for j in range(1, n + 1):
            for i in range(1, n + 1):
                img = fn(SquareMatrix.unit(field, n, i, j))
                if img.n != n or img.field != field:
                    raise DimensionMismatch("image has the wrong shape or field")
                cols.append(vec(img))
        return cls(field, n, [[cols[c][r] for c in range(N)] for r in range(N)], coerce=False)

    @classmethod
    def identity(cls, field: Field, n: int):
        return cls.from_function(field, n, lambda M: M)

    @classmethod
    def scalar(cls, field: Field, n: int, c):
        c = field(c)
        return cls.from_function(field, n, lambda M: M.scale(c))

    @classmethod
    def hadamard(cls, R: SquareMatrix):
        from .matrix import hadamard

        return cls.from_function(R.field, R.n, lambda M: hadamard(R, M))

    @classmethod
    def left_right(cls, P: SquareMatrix, Q: SquareMatrix):
        """M -> P M Q."""
        return cls.from_function(P.field, P.n, lambda M: P @ M @ Q)

    @classmethod
    def left_right_transpose(cls, P: SquareMatrix, Q: SquareMatrix):
        """M -> P M^T Q."""
        return cls.from_function(P.field, P.n, lambda M: P @ M.transpose() @ Q)

    @classmethod
    def perm(cls, field: Field, s: Permutation, t: Permutation):
        """M -> P_s M P_t."""
        return cls.left_right(perm_matrix(s, field), perm_matrix(t, field))

    @classmethod
    def transpose(cls, field: Field, n: int):
        return cls.from_function(field, n, lambda M: M.transpose())

    # -- use --------------------------------------------------------------

    def apply(self, M: SquareMatrix) -> SquareMatrix:
        if M.n != self.n or M.field != self.field:
            raise DimensionMismatch("matrix does not match the operator")
        F = self.field
        v = vec(M)
        return unvec(F, [F.sum(a * b for a, b in zip(r, v) if b) for r in self.entries], self.n)

    __call__ = apply

    def compose(self, other: "TransformationMatrix") -> "TransformationMatrix":
        """self o other (other acts first)."""
        if self.n != other.n:
            raise DimensionMismatch("sizes differ")
        if self.field != other.field:
            raise FieldMismatch("fields differ")
        F = self.field
        cols = list(zip(*other.entries))
        return TransformationMatrix(
            F, self.n, [[F.sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries], coerce=False
        )

    def det(self):
        return determinant(self.field, self.entries)

    def is_invertible(self) -> bool:
        return self.det() != 0

    def inverse(self) -> "TransformationMatrix":
        F = self.field
        N = self.n * self.n
        aug = [list(r) + [F.one if i == j else F.zero for j in range(N)] for i, r in enumerate(self.entries)]
        red, piv = rref(F, aug)
        if piv != list(range(N)):
            raise SflError("operator is singular")
        return TransformationMatrix(F, self.n, [r[N:] for r in red], coerce=False)

    def output_form(self, i: int, j: int) -> dict:
        """Sparse linear form {flat variable index: coefficient} of U(M)_{i,j}."""
        row = self.entries[vec_index(self.n, i, j)]
        return {k: c for k, c in enumerate(row) if c != 0}

    def to_json(self):
        return {"n": self.n, "entries": [[self.field.to_json(x) for x in r] for r in self.entries]}
