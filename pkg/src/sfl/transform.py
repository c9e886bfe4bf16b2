"""(f,g)-transformations: checking, existence, decomposition, H/PH equivalence."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .equivalence import is_fully_normalized, partitions
from .errors import (
    BlockShapeMismatch,
    DegreeTooLarge,
    DimensionMismatch,
    FieldMismatch,
    NotATransformation,
    NotFullyNormalized,
    RationalsNotDecidable,
    SflError,
    SingularBlock,
)
from .functional import (
    EXACT_MAX_N,
    check_sample_field,
    eval_functional,
    expand_composed,
    polynomial_of,
    proportional,
    random_matrix,
    witness_from_monomial,
)
from .groupmap import GroupMap, h_action, ph_action, transpose_map
from .linmap import TransformationMatrix
from .matrix import SquareMatrix, hadamard, hadamard_inverse, matrix_rank, perm_matrix, rank_of
from .perm import Permutation, compose, symmetric_group
from .snf import feasible_mod, incidence_snf, solve_mod

H_EQUIV_MAX_N = 6
PH_EQUIV_MAX_N = 5


# -- verdicts ---------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """``kind`` is "yes", "yes-up-to-scalar" or "no".

    For "yes-up-to-scalar" U is an (alpha f, g)-transformation.  A "no"
    carries a distinguishing monomial (exact mode) and/or a matrix M with
    g~(U(M)) != f~(M).
    """

    kind: str
    alpha: object = None
    monomial: tuple | None = None
    matrix: SquareMatrix | None = None
    mode: str = "exact"

    @property
    def is_transformation(self) -> bool:
        return self.kind == "yes"

    def to_json(self, field):
        out = {"verdict": self.kind, "mode": self.mode}
        if self.alpha is not None:
            out["alpha"] = field.to_json(self.alpha)
        if self.monomial is not None:
            out["monomial"] = list(self.monomial)
        if self.matrix is not None:
            out["witness"] = self.matrix.to_json()
        return out


def _check_pair(f: GroupMap, g: GroupMap, U: TransformationMatrix | None = None):
    if f.n != g.n:
        raise DimensionMismatch(f"degrees {f.n} and {g.n} differ")
    if f.field != g.field:
        raise FieldMismatch(f"{f.field!r} vs {g.field!r}")
    if U is not None:
        if U.n != f.n:
            raise DimensionMismatch(f"operator size {U.n} vs degree {f.n}")
        if U.field != f.field:
            raise FieldMismatch(f"{U.field!r} vs {f.field!r}")


def _search_witness(f, g, U, first=None, tries=200, seed=0):
    if first is not None and eval_functional(g, U.apply(first)) != eval_functional(f, first):
        return first
    rng = random.Random(seed)
    for _ in range(tries):
        M = random_matrix(f.field, f.n, rng)
        if eval_functional(g, U.apply(M)) != eval_functional(f, M):
            return M
    return None


def is_transformation(f: GroupMap, g: GroupMap, U: TransformationMatrix, mode: str = "exact",
                      trials: int = 20, seed: int = 0) -> Verdict:
    _check_pair(f, g, U)
    F = f.field
    if mode == "exact":
        lhs = expand_composed(g, U)
        ref = polynomial_of(f)
        alpha = proportional(lhs, ref)
        if alpha is not None and alpha != 0:
            return Verdict("yes") if alpha == F.one else Verdict("yes-up-to-scalar", alpha)
        diff = lhs - ref
        mono = min(diff.terms) if alpha is None else min(ref.terms)
        M = _search_witness(f, g, U, witness_from_monomial(F, f.n, mono), seed=seed)
        return Verdict("no", monomial=mono, matrix=M)
    if mode in ("prob", "probabilistic"):
        check_sample_field(F, f.n)
        rng = random.Random(seed)
        pairs = []
        for _ in range(trials):
            M = random_matrix(F, f.n, rng)
            pairs.append((M, eval_functional(g, U.apply(M)), eval_functional(f, M)))
        if all(a == b for _, a, b in pairs):
            return Verdict("yes", mode="probabilistic")
        alpha = next((F.div(a, b) for _, a, b in pairs if b != 0), None)
        if alpha is not None and alpha != 0 and all(a == F.mul(alpha, b) for _, a, b in pairs):
            return Verdict("yes-up-to-scalar", alpha, mode="probabilistic")
        M = next(M for M, a, b in pairs if a != b)
        return Verdict("no", matrix=M, mode="probabilistic")
    raise SflError(f"unknown mode {mode!r}")


def is_normalized_rank1(R: SquareMatrix) -> bool:
    F = R.field
    if matrix_rank(R) != 1:
        return False
    return F.prod(R[k, k] for k in range(1, R.n + 1)) == F.one


# -- standard similarities ---------------------------------------------------------


def block_diag(field, blocks) -> SquareMatrix:
    n = sum(b.n for b in blocks)
    rows = [[field.zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                rows[off + i][off + j] = b.rows[i][j]
        off += b.n
    return SquareMatrix._raw(field, rows)


@dataclass(frozen=True)
class StandardSimilarity:
    P_blocks: tuple
    Q_blocks: tuple
    alpha: object

    @property
    def field(self):
        return self.P_blocks[0].field

    @property
    def P(self) -> SquareMatrix:
        return block_diag(self.field, self.P_blocks)

    @property
    def Q(self) -> SquareMatrix:
        return block_diag(self.field, self.Q_blocks)

    def operator(self) -> TransformationMatrix:
        return TransformationMatrix.left_right(self.P, self.Q)

    def to_json(self):
        F = self.field
        return {
            "P_blocks": [b.to_json() for b in self.P_blocks],
            "Q_blocks": [b.to_json() for b in self.Q_blocks],
            "alpha": F.to_json(self.alpha),
        }


def _make_similarity(field, P_blocks, Q_blocks) -> StandardSimilarity:
    dets = []
    for b in list(P_blocks) + list(Q_blocks):
        d = b.det()
        if d == 0:
            raise SingularBlock("similarity block is singular")
        dets.append(d)
    return StandardSimilarity(tuple(P_blocks), tuple(Q_blocks), field.prod(dets))


def standard_similarity(f_norm: GroupMap, P_blocks, Q_blocks, verify: bool = True):
    """(M -> PMQ, det P det Q) for block-diagonal P, Q along r(f), c(f)."""
    if not is_fully_normalized(f_norm):
        raise NotFullyNormalized("map is not fully normalized")
    p = partitions(f_norm)
    if [b.n for b in P_blocks] != list(p.r_list) or [b.n for b in Q_blocks] != list(p.c_list):
        raise BlockShapeMismatch(
            f"block sizes {[b.n for b in P_blocks]}/{[b.n for b in Q_blocks]} vs {list(p.r_list)}/{list(p.c_list)}"
        )
    sim = _make_similarity(f_norm.field, P_blocks, Q_blocks)
    U = sim.operator()
    if verify and f_norm.n <= EXACT_MAX_N:
        got = proportional(expand_composed(f_norm, U), polynomial_of(f_norm))
        if got != sim.alpha:
            raise SflError("standard similarity failed verification")
    return U, sim.alpha


# -- H- and PH-equivalence -------------------------------------------------------------


def _require_gfp(F):
    if not F.is_finite:
        raise RationalsNotDecidable("H-equivalence is decided only over GF(p); use verify_h_witness over QQ")


def _log_table(f: GroupMap) -> list:
    F = f.field
    return [F.dlog(v) for v in f.values]


def _matrix_from_exponents(F, n, x) -> SquareMatrix:
    if F.p == 2:
        return SquareMatrix.ones(F, n)
    g = F.primitive_root()
    return SquareMatrix._raw(F, [[pow(g, x[a * n + b], F.p) for b in range(n)] for a in range(n)])


def verify_h_witness(f: GroupMap, g: GroupMap, A: SquareMatrix) -> bool:
    return h_action(f, A) == g


def decide_h_equivalence(f: GroupMap, g: GroupMap):
    """A with g == f.A, or None when no such matrix exists."""
    _check_pair(f, g)
    F = f.field
    _require_gfp(F)
    if f.n > H_EQUIV_MAX_N:
        raise DegreeTooLarge(f"H-equivalence is limited to n <= {H_EQUIV_MAX_N}")
    m = F.p - 1
    lf, lg = _log_table(f), _log_table(g)
    x = solve_mod(incidence_snf(f.n), [(b - a) % m for a, b in zip(lf, lg)], m)
    if x is None:
        return None
    A = _matrix_from_exponents(F, f.n, x)
    if h_action(f, A) != g:
        raise SflError("H-equivalence solution failed verification")
    return A


def _pulled_indices(n: int) -> np.ndarray:
    """idx[t, t2, r] = rank of t^-1 r t2, pairs in lexicographic order."""
    G = symmetric_group(n)
    N = G.order
    mult = np.array([G.right_mult_table(t) for t in G.elements], dtype=np.int64).T
    # mult[a, b] = rank(a * b)
    inv = np.array(G.inverse_table, dtype=np.int64)
    left = mult[inv]  # left[t, r] = rank(t^-1 r)
    return mult[left[:, None, :], np.arange(N)[None, :, None]]


def decide_ph_equivalence(f: GroupMap, g: GroupMap, prefilter: bool = True):
    """First (A, tau, tau2) in lexicographic pair order with g == ph_action(f, A, tau, tau2).

    With ``prefilter`` the sweep is skipped when the cardinality lists differ.
    """
    _check_pair(f, g)
    F = f.field
    _require_gfp(F)
    n = f.n
    if n > PH_EQUIV_MAX_N:
        raise DegreeTooLarge(f"PH-equivalence is limited to n <= {PH_EQUIV_MAX_N}")
    if prefilter:
        pf, pg = partitions(f), partitions(g)
        if pf.c_list != pg.c_list or pf.r_list != pg.r_list:
            return None
    G = symmetric_group(n)
    N = G.order
    m = F.p - 1
    lf = np.array(_log_table(f), dtype=np.int64)
    lg = np.array(_log_table(g), dtype=np.int64)
    idx = _pulled_indices(n)
    S = incidence_snf(n)
    for t in range(N):
        B = (lg[idx[t]] - lf[None, :]) % max(m, 1)
        ok = feasible_mod(S, B.T, m)
        hits = np.nonzero(ok)[0]
        if len(hits):
            tau = G.elements[t]
            tau2 = G.elements[int(hits[0])]
            pulled = GroupMap(n, F, [g.values[k] for k in idx[t, hits[0]]])
            A = decide_h_equivalence(f, pulled)
            if A is None or ph_action(f, A, tau, tau2) != g:
                raise SflError("PH-equivalence solution failed verification")
            return A, tau, tau2
    return None


def _undo_ph(A: SquareMatrix, tau: Permutation, tau2: Permutation, transpose: bool) -> TransformationMatrix:
    F = A.field
    Ainv = hadamard_inverse(A)
    Pti = perm_matrix(tau.inverse(), F)
    Pt2 = perm_matrix(tau2, F)

    def U(M):
        if transpose:
            M = M.transpose()
        return Pti @ hadamard(Ainv, M) @ Pt2

    return TransformationMatrix.from_function(F, A.n, U)


def exists_transformation(f: GroupMap, g: GroupMap, prefilter: bool = True):
    """A verified (f,g)-transformation, or None when none exists."""
    _check_pair(f, g)
    if f.n > EXACT_MAX_N:
        raise DegreeTooLarge(f"existence is decided for n <= {EXACT_MAX_N}")
    for transpose, base in ((False, f), (True, transpose_map(f))):
        hit = decide_ph_equivalence(base, g, prefilter)
        if hit is None:
            continue
        U = _undo_ph(*hit, transpose)
        if is_transformation(f, g, U).kind != "yes":
            raise SflError("assembled transformation failed verification")
        return U
    return None


# -- decomposition ---------------------------------------------------------------------

DIRECT = "direct"
TRANSPOSE = "transpose"


@dataclass(frozen=True)
class DecomposedForm:
    """U(M) = K * (P_sigma V(M) P_tau), with M^T in place of M in the transpose case."""

    case: str
    K: SquareMatrix
    sigma: Permutation
    tau: Permutation
    V: StandardSimilarity

    def recompose(self) -> TransformationMatrix:
        F = self.K.field
        Ps, Pt = perm_matrix(self.sigma, F), perm_matrix(self.tau, F)
        P, Q = self.V.P, self.V.Q
        tr = self.case == TRANSPOSE

        def U(M):
            if tr:
                M = M.transpose()
            return hadamard(self.K, Ps @ (P @ M @ Q) @ Pt)

        return TransformationMatrix.from_function(F, self.K.n, U)

    def to_json(self):
        return {
            "case": self.case,
            "K": self.K.to_json(),
            "sigma": list(self.sigma.images),
            "tau": list(self.tau.images),
            "V": self.V.to_json(),
        }


def adapted_permutations(classes, n: int):
    """Permutations mapping classes onto same-size classes, increasing on each class."""
    by_size = {}
    for c in sorted(classes):
        by_size.setdefault(len(c), []).append(c)
    groups = list(by_size.values())
    out = []
    for choice in itertools.product(*(itertools.permutations(gr) for gr in groups)):
        images = [0] * n
        for gr, perm in zip(groups, choice):
            for src, dst in zip(gr, perm):
                for a, b in zip(src, dst):
                    images[a - 1] = b
        out.append(Permutation(images))
    return sorted(out, key=lambda p: p.images)


def is_super_adapted(K: SquareMatrix, row_classes, col_classes) -> bool:
    F = K.field
    if not K.is_nowhere_zero():
        return False
    if any(K[1, j] != F.one for j in range(1, K.n + 1)) or any(K[i, 1] != F.one for i in range(1, K.n + 1)):
        return False
    for R in row_classes:
        for C in col_classes:
            v = K[R[0], C[0]]
            if any(K[a, b] != v for a in R for b in C):
                return False
    return True


def _images_of_units(U: TransformationMatrix):
    n = U.n
    F = U.field
    return {(i, j): U.apply(SquareMatrix.unit(F, n, i, j)) for i in range(1, n + 1) for j in range(1, n + 1)}


def _case_of(U: TransformationMatrix):
    """direct when every functional giving column 1 of U(M) has the form M -> u^T M x."""
    F = U.field
    n = U.n
    forms = []
    for a in range(1, n + 1):
        row = U.entries[(a - 1)]  # output (a, 1) sits at flat index a-1
        forms.append([[row[(j - 1) * n + (i - 1)] for j in range(1, n + 1)] for i in range(1, n + 1)])
    rows = [r for c in forms for r in c]
    cols = [list(col) for c in forms for col in zip(*c)]
    if rank_of(F, rows) == 1:
        return DIRECT
    if rank_of(F, cols) == 1:
        return TRANSPOSE
    return None


def _try_pair(images, n, F, sigma, tau, fref_part, g_part):
    """Solve for (K, P, Q) given sigma, tau; None when the pair does not fit."""
    tinv = tau.inverse()
    rowc = fref_part.row_classes
    colc = fref_part.column_classes
    rclass = {i: R for R in rowc for i in R}
    cclass = {j: C for C in colc for j in C}

    def W(i, j, a, b):
        return images[(i, j)].rows[sigma(a) - 1][tinv(b) - 1]

    for (i, j), img in images.items():
        R, C = rclass[i], cclass[j]
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                if (a not in R or b not in C) and W(i, j, a, b) != 0:
                    return None

    R1, C1 = rclass[1], cclass[1]
    # P_R is read off block (R, C1) and Q_C off block (R1, C), each at a nonzero slice
    P = {}
    for R in rowc:
        slot = next(
            ((j, b) for j in C1 for b in C1 if any(W(i, j, a, b) for a in R for i in R)),
            None,
        )
        if slot is None:
            return None
        P[R] = [[W(i, slot[0], a, slot[1]) for i in R] for a in R]
    Q = {}
    for C in colc:
        slot = next(
            ((a, i) for a in R1 for i in R1 if any(W(i, j, a, b) for j in C for b in C)),
            None,
        )
        if slot is None:
            return None
        Q[C] = [[W(slot[1], j, slot[0], b) for b in C] for j in C]
    kappa = {}
    for R in rowc:
        for C in colc:
            # W = kappa * P_R[a,i] * Q_C[j,b]; read kappa at a nonzero slot
            k = None
            for ai, a in enumerate(R):
                for ii, i in enumerate(R):
                    if P[R][ai][ii] == 0:
                        continue
                    for jj, j in enumerate(C):
                        for bb, b in enumerate(C):
                            q = Q[C][jj][bb]
                            if q != 0:
                                k = F.div(W(i, j, a, b), F.mul(P[R][ai][ii], q))
                                break
                        if k is not None:
                            break
                    if k is not None:
                        break
                if k is not None:
                    break
            if k is None or k == 0:
                return None
            kappa[(R, C)] = k
    # renormalize: the row sigma^-1(1) and column tau(1) of K' become ones
    Rs, Cs = rclass[sigma.inverse()(1)], cclass[tau(1)]
    for C in colc:
        mu = kappa[(Rs, C)]
        Q[C] = [[F.mul(mu, x) for x in r] for r in Q[C]]
        for R in rowc:
            kappa[(R, C)] = F.div(kappa[(R, C)], mu)
    for R in rowc:
        lam = kappa[(R, Cs)]
        P[R] = [[F.mul(lam, x) for x in r] for r in P[R]]
        for C in colc:
            kappa[(R, C)] = F.div(kappa[(R, C)], lam)
    first = next((x for R in sorted(rowc) for r in P[R] for x in r if x != 0), None)
    if first is None:
        return None
    for R in rowc:
        P[R] = [[F.div(x, first) for x in r] for r in P[R]]
    for C in colc:
        Q[C] = [[F.mul(first, x) for x in r] for r in Q[C]]
    Kp = [[kappa[(rclass[a], cclass[b])] for b in range(1, n + 1)] for a in range(1, n + 1)]
    K = SquareMatrix._raw(F, [[Kp[sigma.inverse()(x) - 1][tau(y) - 1] for y in range(1, n + 1)] for x in range(1, n + 1)])
    if not is_super_adapted(K, g_part.row_classes, g_part.column_classes):
        return None
    try:
        V = _make_similarity(
            F,
            [SquareMatrix._raw(F, P[R]) for R in sorted(rowc)],
            [SquareMatrix._raw(F, Q[C]) for C in sorted(colc)],
        )
    except SingularBlock:
        return None
    return K, V


def decompose(U: TransformationMatrix, f: GroupMap, g: GroupMap) -> DecomposedForm:
    _check_pair(f, g, U)
    n = f.n
    if n < 2:
        raise SflError("decomposition needs n >= 2")
    if not is_fully_normalized(f) or not is_fully_normalized(g):
        raise NotFullyNormalized("both maps must be fully normalized")
    if is_transformation(f, g, U).kind == "no":
        raise NotATransformation("U does not map the cone of f onto the cone of g")
    case = _case_of(U)
    if case is None:
        raise NotATransformation("U has neither the direct nor the transpose shape")
    F = f.field
    if case == DIRECT:
        fref, Uref = f, U
    else:
        fref = transpose_map(f)
        Uref = U.compose(TransformationMatrix.transpose(F, n))
    fpart, gpart = partitions(fref), partitions(g)
    images = _images_of_units(Uref)
    hits = []
    for sigma in adapted_permutations(fpart.row_classes, n):
        for tau in adapted_permutations(fpart.column_classes, n):
            res = _try_pair(images, n, F, sigma, tau, fpart, gpart)
            if res is None:
                continue
            form = DecomposedForm(case, res[0], sigma, tau, res[1])
            if form.recompose() == U:
                hits.append(form)
    if len(hits) != 1:
        raise SflError(f"expected exactly one decomposition, found {len(hits)}")
    return hits[0]
