"""Nowhere-zero maps f: S_n -> F* stored as dense tables, and their actions."""

from __future__ import annotations

from .errors import DimensionMismatch, FieldMismatch, NotCentral, SflError, ZeroEntry, ZeroValue
from .field import Field
from .matrix import SquareMatrix, hadamard, perm_matrix
from .perm import Permutation, check_degree, compose, symmetric_group


class GroupMap:
    """Values indexed by the lexicographic rank of each permutation."""

    __slots__ = ("n", "field", "values")

    def __init__(self, n: int, field: Field, values):
        check_degree(n)
        values = tuple(values)
        G = symmetric_group(n)
        if len(values) != G.order:
            raise DimensionMismatch(f"expected {G.order} values, got {len(values)}")
        for k, v in enumerate(values):
            if not field.contains(v):
                raise FieldMismatch(f"value {v!r} at rank {k} is not in {field!r}")
            if v == 0:
                raise ZeroValue(f"value at {list(G.elements[k].images)} is zero")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("GroupMap is immutable")

    @classmethod
    def from_function(cls, n: int, field: Field, fn) -> "GroupMap":
        return cls(n, field, [field(fn(s)) for s in symmetric_group(n)])

    def __call__(self, s: Permutation):
        return self.values[symmetric_group(self.n).rank(s)]

    def __eq__(self, other):
        return (
            isinstance(other, GroupMap)
            and self.n == other.n
            and self.field == other.field
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.n, self.values))

    def __repr__(self):
        return f"GroupMap(n={self.n}, field={self.field!r})"

    @property
    def group(self):
        return symmetric_group(self.n)

    def items(self):
        return zip(self.group.elements, self.values)

    def scale(self, c) -> "GroupMap":
        F = self.field
        return GroupMap(self.n, F, [F.mul(c, v) for v in self.values])

    def pointwise(self, other: "GroupMap") -> "GroupMap":
        _check_same(self, other)
        F = self.field
        return GroupMap(self.n, F, [F.mul(a, b) for a, b in zip(self.values, other.values)])

    def ratio(self, other: "GroupMap") -> list:
        """Pointwise other/self, in rank order."""
        _check_same(self, other)
        F = self.field
        return [F.div(b, a) for a, b in zip(self.values, other.values)]


def _check_same(f: GroupMap, g: GroupMap):
    if f.n != g.n:
        raise DimensionMismatch(f"degrees {f.n} and {g.n} differ")
    if f.field != g.field:
        raise FieldMismatch(f"{f.field!r} vs {g.field!r}")


def _check_matrix(f: GroupMap, A: SquareMatrix):
    if A.n != f.n:
        raise DimensionMismatch(f"matrix size {A.n} vs degree {f.n}")
    if A.field != f.field:
        raise FieldMismatch(f"{A.field!r} vs {f.field!r}")
    for i, r in enumerate(A.rows, 1):
        for j, a in enumerate(r, 1):
            if a == 0:
                raise ZeroEntry(i, j)


# -- built-in maps -------------------------------------------------------------


def sgn_map(n: int, field: Field) -> GroupMap:
    G = symmetric_group(n)
    return GroupMap(n, field, [field(s) for s in G.sign_table])


def one_map(n: int, field: Field) -> GroupMap:
    return GroupMap(n, field, [field.one] * symmetric_group(n).order)


def sgn_nfix_map(n: int, field: Field, alpha, beta) -> GroupMap:
    """sigma -> alpha * beta**nfix(sigma) * sgn(sigma)."""
    G = symmetric_group(n)
    F = field
    alpha, beta = F(alpha), F(beta)
    return GroupMap(
        n, F, [F.mul(F.mul(alpha, F.pow(beta, k)), F(s)) for k, s in zip(G.nfix_table, G.sign_table)]
    )


def central_map(n: int, field: Field, class_values: dict) -> GroupMap:
    """Class function from a dict keyed by cycle type (descending tuple)."""
    G = symmetric_group(n)
    try:
        return GroupMap(n, field, [field(class_values[t]) for t in G.cycle_type_table])
    except KeyError as exc:
        raise SflError(f"no value given for cycle type {exc.args[0]}") from None


def _pair_map(n, field, rule):
    G = symmetric_group(n)
    vals = []
    for s, sg in zip(G.elements, G.sign_table):
        x = rule(frozenset((s(1), s(2))))
        vals.append(field.mul(field(sg), x))
    return GroupMap(n, field, vals)


def ex_g_map(n: int, field: Field, x=2) -> GroupMap:
    """sgn(s)*x when {s(1), s(2)} is {2, n} or {1, n}, sgn(s) otherwise (n >= 5)."""
    if n < 5:
        raise SflError("ex-g needs n >= 5")
    x = field(x)
    if x in (0, 1):
        raise SflError("ex-g parameter must avoid 0 and 1")
    targets = {frozenset((2, n)), frozenset((1, n))}
    return _pair_map(n, field, lambda pair: x if pair in targets else field.one)


def ex_h_map(n: int, field: Field, xs) -> GroupMap:
    """sgn(s)*x_i when {s(1), s(2)} = {i, n}, sgn(s) otherwise (n >= 4)."""
    if n < 4:
        raise SflError("ex-h needs n >= 4")
    xs = [field(x) for x in xs]
    if len(xs) != n - 1:
        raise SflError(f"ex-h needs {n - 1} parameters, got {len(xs)}")
    if any(x == 0 for x in xs):
        raise ZeroValue("ex-h parameters must be nonzero")
    table = {frozenset((i, n)): xs[i - 1] for i in range(1, n)}
    return _pair_map(n, field, lambda pair: table.get(pair, field.one))


def ex_f4_map(field: Field, x) -> GroupMap:
    """n = 4: sgn(s)*x when {s(1), s(2)} = {1, 2}, sgn(s) otherwise."""
    x = field(x)
    if x == 0:
        raise ZeroValue("parameter must be nonzero")
    target = frozenset((1, 2))
    return _pair_map(4, field, lambda pair: x if pair == target else field.one)


# -- actions ---------------------------------------------------------------


def transpose_map(f: GroupMap) -> GroupMap:
    inv = f.group.inverse_table
    return GroupMap(f.n, f.field, [f.values[inv[k]] for k in range(len(inv))])


def diagonal_products(A: SquareMatrix) -> list:
    """prod_k a_{s(k),k} for every s, in rank order."""
    F = A.field
    rows = A.rows
    return [F.prod(rows[x - 1][k] for k, x in enumerate(s.images)) for s in symmetric_group(A.n)]


def h_action(f: GroupMap, A: SquareMatrix) -> GroupMap:
    """f.A : s -> f(s) * prod_k a_{s(k),k}."""
    _check_matrix(f, A)
    F = f.field
    return GroupMap(f.n, F, [F.mul(v, d) for v, d in zip(f.values, diagonal_products(A))])


def ph_action(f: GroupMap, A: SquareMatrix, tau: Permutation, tau2: Permutation) -> GroupMap:
    """s -> (f.A)(tau s tau2^-1); its functional is M -> f~(A * (P_tau M P_tau2^-1))."""
    fa = h_action(f, A)
    G = f.group
    t2inv = tau2.inverse()
    return GroupMap(f.n, f.field, [fa.values[G.rank(compose(compose(tau, s), t2inv))] for s in G])


def ph_compose(first, second):
    """Triple equal to acting by ``first`` then by ``second``.

    Each argument is ``(A, tau, tau2)``; the result satisfies
    ``ph_action(ph_action(f, *first), *second) == ph_action(f, *result)``.
    """
    A, t1, t1p = first
    B, t2, t2p = second
    F = A.field
    moved = perm_matrix(t1, F) @ B @ perm_matrix(t1p.inverse(), F)
    return hadamard(A, moved), compose(t1, t2), compose(t1p, t2p)


def is_central(f: GroupMap) -> bool:
    seen = {}
    for t, v in zip(f.group.cycle_type_table, f.values):
        if seen.setdefault(t, v) != v:
            return False
    return True


def class_values(f: GroupMap) -> dict:
    if not is_central(f):
        raise NotCentral("map is not constant on conjugacy classes")
    return dict(zip(f.group.cycle_type_table, f.values))


def fit_sgn_nfix_form(f: GroupMap):
    """(alpha, beta) with f = alpha * beta**nfix * sgn, or None."""
    if f.n < 3:
        raise SflError("fit needs n >= 3")
    if not is_central(f):
        raise NotCentral("map is not constant on conjugacy classes")
    F = f.field
    G = f.group
    h = [F.mul(v, F(s)) for v, s in zip(f.values, G.sign_table)]
    by_nfix = {}
    for k, v in zip(G.nfix_table, h):
        by_nfix.setdefault(k, v)
    alpha = by_nfix[0]
    beta = F.div(by_nfix[1], alpha)
    for k, v in zip(G.nfix_table, h):
        if F.mul(alpha, F.pow(beta, k)) != v:
            return None
    return alpha, beta


def random_map(n: int, field: Field, rng) -> GroupMap:
    return GroupMap(n, field, [field.random_element(rng, nonzero=True) for _ in range(symmetric_group(n).order)])


def random_central_map(n: int, field: Field, rng) -> GroupMap:
    types = sorted(set(symmetric_group(n).cycle_type_table))
    return central_map(n, field, {t: field.random_element(rng, nonzero=True) for t in types})
