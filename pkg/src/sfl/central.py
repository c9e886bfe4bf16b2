"""Coherent permutations of central maps and the normal subgroup G_f.

A permutation t is f-coherent when some nowhere-zero A satisfies
f(s t) = f(s) * prod_j a_{s(j),j} for every s.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidWitness, NotCentral, RationalsUndecidable, SflError, WrongDegree
from .groupmap import GroupMap, class_values, diagonal_products, is_central, one_map, sgn_map
from .matrix import SquareMatrix, hadamard, hadamard_inverse, perm_matrix
from .perm import Permutation, compose, symmetric_group
from .transform import decide_h_equivalence

FULL = "full"
ALTERNATING = "alternating"
KLEIN = "klein-K4"
TRIVIAL = "trivial"


@dataclass(frozen=True)
class CoherenceWitness:
    tau: Permutation
    A: SquareMatrix

    def holds(self, f: GroupMap) -> bool:
        F = f.field
        G = f.group
        right = G.right_mult_table(self.tau)
        prods = diagonal_products(self.A)
        vals = f.values
        return all(vals[right[k]] == F.mul(vals[k], prods[k]) for k in range(G.order))

    def to_json(self):
        return {"tau": list(self.tau.images), "A": self.A.to_json()}


@dataclass(frozen=True)
class SubgroupDescriptor:
    tag: str
    n: int

    def contains(self, t: Permutation) -> bool:
        if self.tag == FULL:
            return True
        if self.tag == ALTERNATING:
            return t.sign() == 1
        if self.tag == KLEIN:
            return t.cycle_type() in ((1, 1, 1, 1), (2, 2))
        return t == Permutation.identity(self.n)

    def elements(self):
        return [t for t in symmetric_group(self.n) if self.contains(t)]

    def to_json(self):
        return {"tag": self.tag}


def _verified(f, w: CoherenceWitness) -> CoherenceWitness:
    if not w.A.is_nowhere_zero() or not w.holds(f):
        raise InvalidWitness(f"matrix is not adapted to {list(w.tau.images)}")
    return w


def _require_central(f):
    if not is_central(f):
        raise NotCentral("map is not constant on conjugacy classes")


# -- central equivalence ---------------------------------------------------------


def central_equivalence(f: GroupMap, h: GroupMap):
    """(a, b) with f(s) = a**nfix(s) * b * h(s) for all s, or None."""
    F = f.field
    G = f.group
    cf, ch = class_values(f), class_values(h)
    nfix = {}
    for t, k in zip(G.cycle_type_table, G.nfix_table):
        nfix[t] = k
    ratio = {t: F.div(cf[t], ch[t]) for t in cf}
    if f.n == 1:
        return F.one, ratio[(1,)]
    derangement = (f.n,)
    b = ratio[derangement]
    eqs = [(nfix[t], F.div(r, b)) for t, r in ratio.items()]
    a = F.solve_powers(eqs)
    if a is None:
        return None
    return a, b


def two_value_equivalence(f: GroupMap):
    """(a, u, v) with f(s) = a**nfix(s) * (u if s even else v), or None."""
    F = f.field
    G = f.group
    cf = class_values(f)
    info = {}
    for t, k, s in zip(G.cycle_type_table, G.nfix_table, G.sign_table):
        info[t] = (k, s)
    eqs = []
    refs = {}
    for t in sorted(cf):
        k, s = info[t]
        if s not in refs:
            refs[s] = t
            continue
        kr = info[refs[s]][0]
        eqs.append((k - kr, F.div(cf[t], cf[refs[s]])))
    a = F.solve_powers(eqs)
    if a is None:
        return None
    u = v = None
    for t, (k, s) in info.items():
        w = F.div(cf[t], F.pow(a, k))
        if s == 1:
            u = w
        else:
            v = w
    return a, u, v


def fully_coherent_base(f: GroupMap):
    """('one' | 'sgn', (a, b)) when f is centrally equivalent to one or sgn."""
    for name, base in (("one", one_map(f.n, f.field)), ("sgn", sgn_map(f.n, f.field))):
        ab = central_equivalence(f, base)
        if ab is not None:
            return name, ab
    return None


# -- explicit adapted matrices ------------------------------------------------------------


def three_cycle_adapted(f: GroupMap) -> CoherenceWitness:
    if f.n != 3:
        raise WrongDegree("needs n = 3")
    _require_central(f)
    F = f.field
    alpha = F.div(f(Permutation([2, 3, 1])), f(Permutation.identity(3)))
    one = F.one
    A = SquareMatrix._raw(F, [[one, F.inv(alpha), one], [one, one, one], [one, one, alpha]])
    return _verified(f, CoherenceWitness(Permutation([2, 3, 1]), A))


def k4_condition(f: GroupMap):
    """(holds, alpha) for f(id) = alpha^2 f((12)(34)), alpha = f((12))/f((1234))."""
    F = f.field
    alpha = F.div(f(Permutation([2, 1, 3, 4])), f(Permutation([2, 3, 4, 1])))
    lhs = f(Permutation.identity(4))
    rhs = F.mul(F.mul(alpha, alpha), f(Permutation([2, 1, 4, 3])))
    return lhs == rhs, alpha


def k4_adapted(f: GroupMap):
    if f.n != 4:
        raise WrongDegree("needs n = 4")
    _require_central(f)
    F = f.field
    ok, a = k4_condition(f)
    if not ok:
        return None
    one, ai = F.one, F.inv(a)
    A = SquareMatrix._raw(
        F, [[one, a, one, one], [a, one, one, one], [one, one, ai, one], [one, one, one, ai]]
    )
    return _verified(f, CoherenceWitness(Permutation([2, 1, 4, 3]), A))


def compose_adapted(f: GroupMap, w1: CoherenceWitness, w2: CoherenceWitness) -> CoherenceWitness:
    """Witness for w1.tau * w2.tau with matrix A * (B P_s^-1), s = w1.tau."""
    _verified(f, w1)
    _verified(f, w2)
    F = f.field
    moved = w2.A @ perm_matrix(w1.tau.inverse(), F)
    return _verified(f, CoherenceWitness(compose(w1.tau, w2.tau), hadamard(w1.A, moved)))


def conjugate_adapted(f: GroupMap, w: CoherenceWitness, u: Permutation) -> CoherenceWitness:
    """Witness for u t u^-1 with matrix P_u A P_u^-1."""
    _verified(f, w)
    F = f.field
    A = perm_matrix(u, F) @ w.A @ perm_matrix(u.inverse(), F)
    return _verified(f, CoherenceWitness(compose(compose(u, w.tau), u.inverse()), A))


def transport_central_equiv(f: GroupMap, params, w: CoherenceWitness) -> CoherenceWitness:
    """Move a witness from f to g(s) = alpha**nfix(s) * beta * f(s)."""
    _verified(f, w)
    F = f.field
    n = f.n
    alpha, beta = (F(x) for x in params)
    one = F.one
    B = SquareMatrix._raw(F, [[alpha if i == j else one for j in range(n)] for i in range(n)])
    C = SquareMatrix._raw(F, [[beta if i == 0 else one for j in range(n)] for i in range(n)])
    Psi = perm_matrix(w.tau.inverse(), F)
    A = hadamard(hadamard(hadamard_inverse(B), hadamard_inverse(C)), w.A)
    A = hadamard(hadamard(A, B @ Psi), C @ Psi)
    G = f.group
    vals = [F.mul(F.mul(F.pow(alpha, k), beta), v) for k, v in zip(G.nfix_table, f.values)]
    g = GroupMap(n, F, vals)
    return _verified(g, CoherenceWitness(w.tau, A))


# -- classification ------------------------------------------------------------------


def _criteria_tag(f: GroupMap) -> str:
    n = f.n
    if n == 2:
        return FULL
    if fully_coherent_base(f) is not None:
        return FULL
    if n == 3:
        return ALTERNATING
    if two_value_equivalence(f) is not None:
        return ALTERNATING
    if n == 4 and k4_condition(f)[0]:
        return KLEIN
    return TRIVIAL


def _generic_coherent(f: GroupMap, t: Permutation) -> CoherenceWitness | None:
    G = f.group
    right = G.right_mult_table(t)
    shifted = GroupMap(f.n, f.field, [f.values[right[k]] for k in range(G.order)])
    A = decide_h_equivalence(f, shifted)
    return None if A is None else _verified(f, CoherenceWitness(t, A))


def _cross_check(f: GroupMap, tag: str):
    n = f.n
    if n < 3:
        return
    t12 = Permutation.transposition(n, 1, 2)
    c3 = Permutation.cycle(n, 1, 2, 3)
    expect = {t12: tag == FULL, c3: tag in (FULL, ALTERNATING)}
    if n == 4:
        expect[Permutation([2, 1, 4, 3])] = tag in (FULL, ALTERNATING, KLEIN)
    if tag == FULL:
        expect[Permutation.cycle(n, *range(1, n + 1))] = True
    for t, want in expect.items():
        got = _generic_coherent(f, t) is not None
        if got != want:
            raise SflError(f"criteria say {tag} but the solver disagrees on {list(t.images)}")


def compute_Gf(f: GroupMap, cross_check: bool = True) -> SubgroupDescriptor:
    if f.n < 2:
        raise WrongDegree("G_f is classified for n >= 2")
    _require_central(f)
    tag = _criteria_tag(f)
    if cross_check and f.field.is_finite:
        _cross_check(f, tag)
    return SubgroupDescriptor(tag, f.n)


def coherent_set_generic(f: GroupMap):
    """Every coherent permutation according to the GF(p) solver."""
    return [t for t in symmetric_group(f.n) if _generic_coherent(f, t) is not None]


def _central_witness(f: GroupMap, t: Permutation):
    """Explicit witness for central f from the classification, or None."""
    F = f.field
    n = f.n
    ident = Permutation.identity(n)
    E = SquareMatrix.ones(F, n)
    if n == 1 or t == ident:
        return CoherenceWitness(t, E)
    if n == 2:
        # a11 a22 = f(t)/f(id), a21 a12 = f(id)/f(t)
        r = F.div(f(Permutation([2, 1])), f(ident))
        A = SquareMatrix._raw(F, [[r, F.inv(r)], [F.one, F.one]])
        return CoherenceWitness(t, A)
    tag = _criteria_tag(f)
    if not SubgroupDescriptor(tag, n).contains(t):
        return None
    if tag == FULL:
        name, (a, b) = fully_coherent_base(f)
        base = one_map(n, F) if name == "one" else sgn_map(n, F)
        if name == "sgn" and t.sign() == -1:
            A = SquareMatrix._raw(F, [[F.neg(F.one) if j == 0 else F.one for j in range(n)] for _ in range(n)])
        else:
            A = E
        return transport_central_equiv(base, (a, b), CoherenceWitness(t, A))
    if tag == ALTERNATING and n >= 4:
        a, u, v = two_value_equivalence(f)
        G = f.group
        h = GroupMap(n, F, [u if s == 1 else v for s in G.sign_table])
        return transport_central_equiv(h, (a, F.one), CoherenceWitness(t, E))
    if tag == ALTERNATING:
        w = three_cycle_adapted(f)
        return w if w.tau == t else compose_adapted(f, w, w)
    if tag == KLEIN:
        w = k4_adapted(f)
        for u in symmetric_group(4):
            if compose(compose(u, w.tau), u.inverse()) == t:
                return conjugate_adapted(f, w, u)
    raise SflError("unreachable classification branch")


def is_f_coherent(f: GroupMap, t: Permutation):
    """A verified witness that t is f-coherent, or None.

    Over GF(p) any map is decided by the solver.  Over QQ only central maps
    are decided, through the classification; otherwise RationalsUndecidable.
    """
    if t.n != f.n:
        raise SflError("degree mismatch")
    if f.field.is_finite:
        return _generic_coherent(f, t)
    if not is_central(f):
        raise RationalsUndecidable("unknown: coherence over QQ is decided only for central maps")
    w = _central_witness(f, t)
    return None if w is None else _verified(f, w)
