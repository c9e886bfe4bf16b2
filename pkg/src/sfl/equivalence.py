"""Column/row equivalence of indices, partitions and normalization."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IndexOutOfRange, IndicesEqual, SflError
from .groupmap import GroupMap, h_action, ph_action, transpose_map
from .matrix import SquareMatrix, hadamard
from .perm import Permutation

COLUMN = "column"
ROW = "row"


@dataclass(frozen=True)
class EquivWitness:
    """Z with f(s t_ij) = -(z_{s(j)}/z_{s(i)}) f(s) (column side) or the row analogue."""

    i: int
    j: int
    side: str
    Z: tuple

    def holds(self, f: GroupMap) -> bool:
        h = transpose_map(f) if self.side == ROW else f
        return _check_identity(h, self.i, self.j, self.Z)

    def to_json(self, field):
        return {"i": self.i, "j": self.j, "side": self.side, "Z": [field.to_json(z) for z in self.Z]}


def _check_indices(n, i, j):
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexOutOfRange(f"({i},{j}) outside 1..{n}")
    if i == j:
        raise IndicesEqual(f"indices must differ, got {i}")


def _check_identity(f, i, j, Z) -> bool:
    F = f.field
    G = f.group
    right = G.right_mult_table(Permutation.transposition(f.n, i, j))
    vals = f.values
    for k, s in enumerate(G.elements):
        expected = F.neg(F.mul(F.div(Z[s(j) - 1], Z[s(i) - 1]), vals[k]))
        if vals[right[k]] != expected:
            return False
    return True


def _column_witness_raw(f: GroupMap, i: int, j: int):
    n = f.n
    _check_indices(n, i, j)
    F = f.field
    G = f.group
    right = G.right_mult_table(Permutation.transposition(n, i, j))
    vals = f.values
    r = {}
    for k, s in enumerate(G.elements):
        rho = F.neg(F.div(vals[right[k]], vals[k]))
        key = (s(i), s(j))
        prev = r.setdefault(key, rho)
        if prev != rho:
            return None
    Z = [F.one] * n
    for l in range(2, n + 1):
        Z[l - 1] = r[(1, l)]
    for (k, l), ratio in r.items():
        if F.div(Z[l - 1], Z[k - 1]) != ratio:
            return None
    return tuple(Z)


def column_witness(f: GroupMap, i: int, j: int):
    Z = _column_witness_raw(f, i, j)
    return None if Z is None else EquivWitness(i, j, COLUMN, Z)


def row_witness(f: GroupMap, i: int, j: int):
    Z = _column_witness_raw(transpose_map(f), i, j)
    return None if Z is None else EquivWitness(i, j, ROW, Z)


@dataclass(frozen=True)
class PartitionPair:
    column_classes: tuple
    row_classes: tuple

    @property
    def c_list(self):
        return tuple(sorted((len(c) for c in self.column_classes), reverse=True))

    @property
    def r_list(self):
        return tuple(sorted((len(c) for c in self.row_classes), reverse=True))

    def column_class_of(self, i):
        return next(c for c in self.column_classes if i in c)

    def row_class_of(self, i):
        return next(c for c in self.row_classes if i in c)

    def to_json(self):
        return {
            "column_classes": [list(c) for c in self.column_classes],
            "row_classes": [list(c) for c in self.row_classes],
            "c_list": list(self.c_list),
            "r_list": list(self.r_list),
        }


def _classes(f: GroupMap, exhaustive: bool):
    n = f.n
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if not exhaustive and find(i) == find(j):
                continue
            if _column_witness_raw(f, i, j) is not None:
                parent[find(j)] = find(i)
    groups = {}
    for x in range(1, n + 1):
        groups.setdefault(find(x), []).append(x)
    return tuple(sorted(tuple(g) for g in groups.values()))


def column_partition(f: GroupMap, exhaustive: bool = False):
    return _classes(f, exhaustive)


def row_partition(f: GroupMap, exhaustive: bool = False):
    return _classes(transpose_map(f), exhaustive)


def partitions(f: GroupMap, exhaustive: bool = False) -> PartitionPair:
    """Column and row classes.

    Pairs already joined are skipped unless ``exhaustive``; transitivity
    makes the skip safe, and the exhaustive scan exists to test that claim.
    """
    return PartitionPair(column_partition(f, exhaustive), row_partition(f, exhaustive))


def is_rigid(f: GroupMap) -> bool:
    p = partitions(f)
    return all(len(c) == 1 for c in p.column_classes) and all(len(c) == 1 for c in p.row_classes)


# -- normalization predicates ---------------------------------------------------


def _antisymmetric(f: GroupMap, table) -> bool:
    F = f.field
    vals = f.values
    return all(vals[table[k]] == F.neg(v) for k, v in enumerate(vals))


def is_column_normalized(f: GroupMap, classes=None) -> bool:
    classes = column_partition(f) if classes is None else classes
    G = f.group
    for c in classes:
        for a in range(len(c)):
            for b in range(a + 1, len(c)):
                if not _antisymmetric(f, G.right_mult_table(Permutation.transposition(f.n, c[a], c[b]))):
                    return False
    return True


def is_row_normalized(f: GroupMap, classes=None) -> bool:
    classes = row_partition(f) if classes is None else classes
    G = f.group
    for c in classes:
        for a in range(len(c)):
            for b in range(a + 1, len(c)):
                if not _antisymmetric(f, G.left_mult_table(Permutation.transposition(f.n, c[a], c[b]))):
                    return False
    return True


def is_normalized(f: GroupMap) -> bool:
    return is_column_normalized(f) and is_row_normalized(f)


def _interval_sorted(classes) -> bool:
    """Classes are consecutive intervals from 1 with non-increasing sizes."""
    ordered = sorted(classes)
    start = 1
    prev = None
    for c in ordered:
        if list(c) != list(range(start, start + len(c))):
            return False
        if prev is not None and len(c) > prev:
            return False
        prev = len(c)
        start += len(c)
    return True


def is_fully_normalized(f: GroupMap) -> bool:
    p = partitions(f)
    return (
        is_column_normalized(f, p.column_classes)
        and is_row_normalized(f, p.row_classes)
        and _interval_sorted(p.column_classes)
        and _interval_sorted(p.row_classes)
    )


# -- normalization ---------------------------------------------------------------


@dataclass(frozen=True)
class NormalizationWitness:
    """Result of normalizing f.

    ``A`` is the Hadamard factor.  The normalized map is
    ``g(M) = f~(A * (P_tau_prime M P_tau))``, i.e.
    ``g == ph_action(f, A, tau_prime, tau.inverse())``; both permutations are
    the identity after plain H-normalization.
    """

    A: SquareMatrix
    tau: Permutation
    tau_prime: Permutation
    g: GroupMap

    @property
    def ph_triple(self):
        return self.A, self.tau_prime, self.tau.inverse()

    def replay(self, f: GroupMap) -> GroupMap:
        return ph_action(f, *self.ph_triple)

    def to_json(self):
        F = self.A.field
        return {
            "A": self.A.to_json(),
            "tau": list(self.tau.images),
            "tau_prime": list(self.tau_prime.images),
            "ph_action": {
                "A": self.A.to_json(),
                "tau": list(self.tau_prime.images),
                "tau_prime": list(self.tau.inverse().images),
            },
            "g": {"n": self.g.n, "field": F.describe(), "values": [F.to_json(v) for v in self.g.values]},
        }


def _step_matrix(f: GroupMap, classes, witness_fn, side):
    """Columns (or rows) outside the class minima take the witness vector."""
    F = f.field
    n = f.n
    rows = [[F.one] * n for _ in range(n)]
    for c in classes:
        lead = c[0]
        for k in c[1:]:
            w = witness_fn(f, lead, k)
            if w is None:
                raise SflError(f"no witness for equivalent pair ({lead},{k})")
            for t in range(n):
                if side == COLUMN:
                    rows[t][k - 1] = w.Z[t]
                else:
                    rows[k - 1][t] = w.Z[t]
    return SquareMatrix._raw(F, rows)


def normalize(f: GroupMap) -> NormalizationWitness:
    p = partitions(f)
    A = _step_matrix(f, p.column_classes, column_witness, COLUMN)
    f1 = h_action(f, A)
    B = _step_matrix(f1, p.row_classes, row_witness, ROW)
    C = hadamard(A, B)
    g = h_action(f, C)
    if not (is_column_normalized(g, p.column_classes) and is_row_normalized(g, p.row_classes)):
        raise SflError("normalization check failed")
    ident = Permutation.identity(f.n)
    return NormalizationWitness(C, ident, ident, g)


def _interval_perm(n, classes) -> Permutation:
    """Permutation sending the classes, largest first, onto consecutive intervals."""
    order = sorted(classes, key=lambda c: (-len(c), c[0]))
    images = [0] * n
    pos = 1
    for c in order:
        for x in c:
            images[x - 1] = pos
            pos += 1
    return Permutation(images)


def fully_normalize(f: GroupMap) -> NormalizationWitness:
    base = normalize(f)
    p = partitions(f)
    tau = _interval_perm(f.n, p.column_classes)
    tau_prime = _interval_perm(f.n, p.row_classes).inverse()
    g = ph_action(f, base.A, tau_prime, tau.inverse())
    if not is_fully_normalized(g):
        raise SflError("full normalization check failed")
    return NormalizationWitness(base.A, tau, tau_prime, g)
