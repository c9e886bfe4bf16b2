"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines are printed even when output is captured) or directly
with ``python3 tests/test_acceptance.py``.
"""

import itertools
import os
import random
import sys
import time

import pytest

from sfl.central import (
    KLEIN,
    SubgroupDescriptor,
    coherent_set_generic,
    compute_Gf,
    is_f_coherent,
    k4_adapted,
    three_cycle_adapted,
    two_value_equivalence,
)
from sfl.equivalence import fully_normalize, is_fully_normalized, is_normalized, is_rigid, partitions
from sfl.field import Field
from sfl.functional import eval_functional
from sfl.groupmap import (
    GroupMap,
    central_map,
    ex_f4_map,
    ex_g_map,
    ex_h_map,
    fit_sgn_nfix_form,
    h_action,
    one_map,
    ph_action,
    random_central_map,
    random_map,
    sgn_map,
    sgn_nfix_map,
)
from sfl.io import dumps, map_to_json
from sfl.linmap import TransformationMatrix
from sfl.matrix import SquareMatrix, hadamard, hadamard_inverse, perm_matrix
from sfl.nullcone import gaussian_binomial, minimal_subspace_oracle, codim_check
from sfl.perm import Permutation, symmetric_group
from sfl.transform import (
    DIRECT,
    TRANSPOSE,
    decide_h_equivalence,
    decompose,
    exists_transformation,
    is_normalized_rank1,
    is_transformation,
)

GF2, GF3, GF5, GF7, GF11 = (Field.gf(p) for p in (2, 3, 5, 7, 11))


def random_perm(n, rng):
    imgs = list(range(1, n + 1))
    rng.shuffle(imgs)
    return Permutation(imgs)


def random_invertible(F, n, rng):
    while True:
        A = SquareMatrix.random(F, n, rng)
        if A.det() != 0:
            return A


def diagonal(F, d):
    n = len(d)
    return SquareMatrix(F, [[d[i] if i == j else 0 for j in range(n)] for i in range(n)])


def intervals_ok(classes):
    """Consecutive intervals from 1 with non-increasing sizes."""
    flat = [x for c in classes for x in c]
    sizes = [len(c) for c in classes]
    return flat == list(range(1, len(flat) + 1)) and sizes == sorted(sizes, reverse=True)


# -- criteria -------------------------------------------------------------------------------


def criterion_1():
    bad = 0
    for n in range(1, 6):
        for f in (sgn_map(n, GF7), one_map(n, GF7), sgn_nfix_map(n, GF7, 2, 3)):
            for s, v in f.items():
                bad += eval_functional(f, perm_matrix(s, GF7)) != v
    return bad == 0, f"{bad} mismatches"


def criterion_2():
    rng = random.Random(2002)
    s = sgn_map(3, GF7)
    fails = 0
    for _ in range(100):
        P, Q = random_invertible(GF7, 3, rng), random_invertible(GF7, 3, rng)
        d = GF7.inv(GF7.mul(P.det(), Q.det()))
        Q = diagonal(GF7, [d, 1, 1]) @ Q
        for U in (TransformationMatrix.left_right(P, Q), TransformationMatrix.left_right_transpose(P, Q)):
            fails += is_transformation(s, s, U).kind != "yes"
    P = random_invertible(GF7, 3, rng)
    Q = diagonal(GF7, [GF7.mul(3, GF7.inv(P.det())), 1, 1])  # det P det Q = 3
    v = is_transformation(s, s, TransformationMatrix.left_right(P, Q))
    perturbed = v.kind == "yes-up-to-scalar" and v.alpha == 3
    return fails == 0 and perturbed, f"{fails} failures, perturbed pair -> {v.kind}"


def criterion_3():
    rng = random.Random(2003)
    f = one_map(3, GF7)
    samples = [SquareMatrix.random(GF7, 3, rng) for _ in range(200)]
    pool = [[rng.randrange(1, 7) for _ in range(3)] for _ in range(10)]
    samples += [SquareMatrix.outer(GF7, x, y) for x, y in itertools.product(pool, repeat=2)]
    disagree = 0
    yes = 0
    for R in samples:
        verdict = is_transformation(f, f, TransformationMatrix.hadamard(R)).kind == "yes"
        yes += verdict
        disagree += verdict != is_normalized_rank1(R)
    return disagree == 0 and yes > 0, f"{len(samples)} matrices, {yes} yes, {disagree} disagreements"


def criterion_4():
    checks = []
    for n in (2, 3, 4, 5):
        p = partitions(sgn_map(n, GF7), exhaustive=True)
        checks.append(p.column_classes == p.row_classes == (tuple(range(1, n + 1)),))
    for n in (3, 4, 5):
        p = partitions(one_map(n, GF7), exhaustive=True)
        single = tuple((k,) for k in range(1, n + 1))
        checks.append(p.column_classes == p.row_classes == single)
    p = partitions(ex_g_map(5, GF7), exhaustive=True)
    checks.append(p.column_classes == ((1, 2), (3, 4, 5)) and p.row_classes == ((1, 2), (3, 4), (5,)))
    p = partitions(ex_h_map(4, GF7, [1, 2, 3]), exhaustive=True)
    checks.append(p.column_classes == ((1, 2), (3, 4)) and p.row_classes == ((1,), (2,), (3,), (4,)))
    return all(checks), f"{sum(checks)}/{len(checks)} reproduced"


def criterion_5():
    rng = random.Random(2005)
    structured = [sgn_map(4, GF11), one_map(4, GF11), ex_f4_map(GF11, 3), ex_h_map(4, GF11, [1, 2, 3]),
                  sgn_nfix_map(4, GF11, 2, 5)]
    maps = [random_map(4, GF11, rng) for _ in range(30)]
    for k in range(20):
        base = structured[k % len(structured)]
        A = SquareMatrix.random(GF11, 4, rng, nonzero=True)
        maps.append(ph_action(base, A, random_perm(4, rng), random_perm(4, rng)))
    bad = 0
    for f in maps:
        w = fully_normalize(f)
        p = partitions(w.g)
        ok = (
            dumps(map_to_json(w.replay(f))) == dumps(map_to_json(w.g))
            and is_normalized(w.g)
            and is_fully_normalized(w.g)
            and intervals_ok(p.column_classes)
            and intervals_ok(p.row_classes)
        )
        bad += not ok
    return bad == 0, f"{len(maps) - bad}/{len(maps)} sound"


def criterion_6():
    found = []
    for F in (GF5, GF7):
        s, o = sgn_map(3, F), one_map(3, F)
        found.append(exists_transformation(s, o, prefilter=False))
        found.append(exists_transformation(o, s, prefilter=False))
    return all(x is None for x in found), f"{sum(x is not None for x in found)} unexpected transformations"


def criterion_7a():
    bad = []
    for vals in itertools.product(range(1, 3), repeat=2):
        f = GroupMap(2, GF3, vals)
        res = minimal_subspace_oracle(f)
        hits, scanned = codim_check(f, 1)
        ok = (
            res["scanned"] == 130
            and res["matches"]
            and len(res["found"]) == res["predicted"] == 8
            and (hits, scanned) == (0, 40)
        )
        if not ok:
            bad.append(vals)
    return not bad, f"4 tables, failing {bad}"


def criterion_7b():
    f = one_map(3, GF2)
    old = os.environ.get("SFL_THREADS")
    os.environ["SFL_THREADS"] = str(os.cpu_count() or 1)
    try:
        res = minimal_subspace_oracle(f)
    finally:
        if old is None:
            os.environ.pop("SFL_THREADS")
        else:
            os.environ["SFL_THREADS"] = old
    ok = (
        res["scanned"] == gaussian_binomial(9, 3, 2) == 788035
        and res["matches"]
        and len(res["found"]) == res["predicted"] == 14
    )
    return ok, f"scanned {res['scanned']}, found {len(res['found'])}, predicted {res['predicted']}"


def criterion_8():
    rng = random.Random(2008)
    f = one_map(3, GF7)
    units = [SquareMatrix.unit(GF7, 3, i, j) for i in range(1, 4) for j in range(1, 4)]
    bad = 0
    for case in [DIRECT] * 50 + [TRANSPOSE] * 50:
        s, t = random_perm(3, rng), random_perm(3, rng)
        d1 = [rng.randrange(1, 7) for _ in range(3)]
        d2 = [rng.randrange(1, 7) for _ in range(3)]
        d2[0] = GF7.mul(d2[0], GF7.inv(GF7.prod(d1 + d2)))
        P = perm_matrix(s, GF7) @ diagonal(GF7, d1)
        Q = diagonal(GF7, d2) @ perm_matrix(t, GF7)
        maker = TransformationMatrix.left_right if case == DIRECT else TransformationMatrix.left_right_transpose
        U = maker(P, Q)
        d = decompose(U, f, f)
        R = d.recompose()
        bad += d.case != case or any(R.apply(B) != U.apply(B) for B in units)
    return bad == 0, f"{100 - bad}/100 round trips"


def criterion_9():
    rng = random.Random(2009)
    a_ok = 0
    for _ in range(20):
        f = random_central_map(3, GF7, rng)
        a_ok += three_cycle_adapted(f).holds(f)
    # alpha = f((12))/f((1234)) = 3 is a non-square mod 7 and f(id) = alpha^2 f((12)(34))
    k4 = central_map(4, GF7, {(1, 1, 1, 1): 2, (2, 1, 1): 3, (2, 2): 1, (3, 1): 1, (4,): 1})
    w = k4_adapted(k4)
    b_ok = (
        GF7.sqrt(3) is None
        and w is not None
        and w.holds(k4)
        and two_value_equivalence(k4) is None
        and compute_Gf(k4).tag == KLEIN
    )
    c_bad = 0
    for n in (3, 4):
        for _ in range(20):
            f = random_central_map(n, GF7, rng)
            G = compute_Gf(f, cross_check=False)
            c_bad += set(G.elements()) != set(coherent_set_generic(f))
    ok = a_ok == 20 and b_ok and c_bad == 0
    return ok, f"(a) {a_ok}/20, (b) {'ok' if b_ok else 'failed'}, (c) {40 - c_bad}/40"


def criterion_10():
    rng = random.Random(2010)
    bad = 0
    for k in range(100):
        n = 2 + k % 3
        f = random_map(n, GF7, rng)
        A0 = SquareMatrix.random(GF7, n, rng, nonzero=True)
        g = h_action(f, A0)
        A = decide_h_equivalence(f, g)
        bad += A is None or h_action(f, A) != g or not is_normalized_rank1(hadamard(A, hadamard_inverse(A0)))
    none = decide_h_equivalence(sgn_map(3, GF7), one_map(3, GF7)) is None
    return bad == 0 and none, f"{100 - bad}/100 round trips, sgn vs one -> {'none' if none else 'found'}"


def criterion_11():
    rng = random.Random(2011)
    bad = 0
    for _ in range(10):
        a, b = rng.randrange(1, 7), rng.randrange(1, 7)
        n = rng.choice((3, 4, 5))
        f = sgn_nfix_map(n, GF7, a, b)
        A = decide_h_equivalence(f, sgn_map(n, GF7).scale(a))
        bad += fit_sgn_nfix_form(f) != (a, b) or A is None or h_action(f, A) != sgn_map(n, GF7).scale(a)
    rigid_bad = 0
    for _ in range(10):
        f = random_central_map(4, GF7, rng)
        rigid_bad += fit_sgn_nfix_form(f) is not None or not is_rigid(f)
    return bad == 0 and rigid_bad == 0, f"{10 - bad}/10 fits, {10 - rigid_bad}/10 rigid"


CRITERIA = [
    ("1", "evaluation on permutation matrices", criterion_1, 1),
    ("2", "determinant preservers", criterion_2, 5),
    ("3", "Hadamard permanent preservers", criterion_3, 5),
    ("4", "partition reproduction", criterion_4, 10),
    ("5", "normalization soundness", criterion_5, 30),
    ("6", "no transformation between sgn and one", criterion_6, 60),
    ("7a", "null cone oracle GF(3), n=2", criterion_7a, 10),
    ("7b", "null cone oracle GF(2), n=3", criterion_7b, 300),
    ("8", "decomposition round trips", criterion_8, 30),
    ("9", "central suite", criterion_9, 60),
    ("10", "H-equivalence solver", criterion_10, 30),
    ("11", "central equivalence dichotomy", criterion_11, 20),
]


def run_criterion(label, title, fn, budget):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < budget
    line = f"{'PASS' if passed else 'FAIL'} criterion {label}: {title} ({detail}; {elapsed:.2f}s of {budget}s)"
    return passed, line


@pytest.mark.parametrize("label,title,fn,budget", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(label, title, fn, budget, capsys):
    passed, line = run_criterion(label, title, fn, budget)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(p for p, _ in results) else 1)
