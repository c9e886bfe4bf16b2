"""Schur functionals: evaluation and exact polynomial expansion.

Variables are the n^2 entries of M, numbered in column-stacked order
(see :mod:`sfl.linmap`).  A :class:`MultPoly` maps exponent tuples to
nonzero coefficients.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DimensionMismatch, ExactModeTooLarge, FieldMismatch, FieldTooSmall, ZeroPolynomial
from .field import Field
from .groupmap import GroupMap
from .linmap import TransformationMatrix, unvec
from .matrix import SquareMatrix

EXACT_MAX_N = 4


def eval_functional(f: GroupMap, M: SquareMatrix):
    """f~(M) = sum_s f(s) prod_j m_{s(j),j}."""
    if M.n != f.n:
        raise DimensionMismatch(f"matrix size {M.n} vs degree {f.n}")
    if M.field != f.field:
        raise FieldMismatch(f"{M.field!r} vs {f.field!r}")
    F = f.field
    rows = M.rows
    total = F.zero
    for s, v in f.items():
        term = v
        for k, x in enumerate(s.images):
            m = rows[x - 1][k]
            if m == 0:
                break
            term = F.mul(term, m)
        else:
            total = F.add(total, term)
    return total


class MultPoly:
    __slots__ = ("field", "n_vars", "terms")

    def __init__(self, field: Field, n_vars: int, terms: dict):
        self.field = field
        self.n_vars = n_vars
        self.terms = {e: c for e, c in terms.items() if c != 0}

    def __eq__(self, other):
        return (
            isinstance(other, MultPoly)
            and self.field == other.field
            and self.n_vars == other.n_vars
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"MultPoly({len(self.terms)} terms over {self.field!r})"

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c) -> "MultPoly":
        F = self.field
        return MultPoly(F, self.n_vars, {e: F.mul(c, v) for e, v in self.terms.items()})

    def __sub__(self, other: "MultPoly") -> "MultPoly":
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.sub(out.get(e, F.zero), c)
        return MultPoly(F, self.n_vars, out)

    def evaluate(self, point):
        F = self.field
        total = F.zero
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = F.mul(term, F.pow(x, k))
            total = F.add(total, term)
        return total

    def evaluate_matrix(self, M: SquareMatrix):
        n = M.n
        return self.evaluate([M.rows[i][j] for j in range(n) for i in range(n)])

    def to_json(self):
        return {
            "n": self.n_vars,
            "terms": [{"exp": list(e), "coef": self.field.to_json(c)} for e, c in sorted(self.terms.items())],
        }


def _exponent(var_multiset, n_vars):
    e = [0] * n_vars
    for v in var_multiset:
        e[v] += 1
    return tuple(e)


def polynomial_of(f: GroupMap) -> MultPoly:
    n = f.n
    terms = {}
    for s, v in f.items():
        terms[_exponent([(j * n) + (x - 1) for j, x in enumerate(s.images)], n * n)] = v
    return MultPoly(f.field, n * n, terms)


def expand_composed(g: GroupMap, U: TransformationMatrix) -> MultPoly:
    """Exact expansion of M -> g~(U(M))."""
    n = g.n
    if U.n != n:
        raise DimensionMismatch(f"operator size {U.n} vs degree {n}")
    if U.field != g.field:
        raise FieldMismatch(f"{U.field!r} vs {g.field!r}")
    if n > EXACT_MAX_N:
        raise ExactModeTooLarge(f"exact expansion is limited to n <= {EXACT_MAX_N}")
    F = g.field
    forms = {(i, j): sorted(U.output_form(i, j).items()) for i in range(1, n + 1) for j in range(1, n + 1)}
    acc: dict = {}
    for s, v in g.items():
        partial = {(): v}
        for j in range(1, n + 1):
            form = forms[(s(j), j)]
            if not form:
                partial = {}
                break
            nxt: dict = {}
            for mono, c in partial.items():
                for var, a in form:
                    key = tuple(sorted(mono + (var,)))
                    nxt[key] = F.add(nxt.get(key, F.zero), F.mul(c, a))
            partial = nxt
        for mono, c in partial.items():
            acc[mono] = F.add(acc.get(mono, F.zero), c)
    return MultPoly(F, n * n, {_exponent(m, n * n): c for m, c in acc.items()})


def proportional(p: MultPoly, q: MultPoly):
    """alpha with p == alpha * q, or None."""
    if q.is_zero():
        raise ZeroPolynomial("reference polynomial is zero")
    F = q.field
    if p.is_zero():
        return F.zero
    if p.terms.keys() != q.terms.keys():
        return None
    e0 = min(q.terms)
    alpha = F.div(p.terms[e0], q.terms[e0])
    for e, c in q.terms.items():
        if p.terms[e] != F.mul(alpha, c):
            return None
    return alpha


@dataclass(frozen=True)
class RandomCheck:
    equal: bool
    witness: SquareMatrix | None = None
    lhs: object = None
    rhs: object = None


def random_matrix(F: Field, n: int, rng: random.Random) -> SquareMatrix:
    return SquareMatrix._raw(F, [[F.random_element(rng) for _ in range(n)] for _ in range(n)])


def check_sample_field(F: Field, n: int):
    if F.is_finite and F.p <= 4 * n:
        raise FieldTooSmall(f"randomized testing needs p > 4n = {4 * n}, got p = {F.p}")


def probabilistic_equal(g: GroupMap, U: TransformationMatrix, f: GroupMap, trials: int, seed: int) -> RandomCheck:
    """Compare g~(U(M)) with f~(M) at ``trials`` seeded random matrices."""
    F = f.field
    n = f.n
    check_sample_field(F, n)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    for _ in range(trials):
        M = random_matrix(F, n, rng)
        lhs = eval_functional(g, U.apply(M))
        rhs = eval_functional(f, M)
        if lhs != rhs:
            return RandomCheck(False, M, lhs, rhs)
    return RandomCheck(True)


def witness_from_monomial(F: Field, n: int, exp) -> SquareMatrix:
    """0/1 matrix with ones at the variables of a monomial."""
    return unvec(F, [F.one if k else F.zero for k in exp], n)
