import random

import pytest

from oracles import column_equivalent
from sfl.equivalence import (
    column_partition,
    column_witness,
    fully_normalize,
    is_column_normalized,
    is_fully_normalized,
    is_normalized,
    is_rigid,
    normalize,
    partitions,
    row_partition,
    row_witness,
)
from sfl.errors import IndexOutOfRange, IndicesEqual
from sfl.field import Field
from sfl.groupmap import (
    GroupMap,
    ex_f4_map,
    ex_g_map,
    ex_h_map,
    h_action,
    one_map,
    ph_action,
    random_central_map,
    random_map,
    sgn_map,
    sgn_nfix_map,
)
from sfl.matrix import SquareMatrix, hadamard_inverse
from sfl.perm import Permutation

GF3, GF5, GF7, GF11 = (Field.gf(p) for p in (3, 5, 7, 11))


def random_perm(n, rng):
    imgs = list(range(1, n + 1))
    rng.shuffle(imgs)
    return Permutation(imgs)


def image_classes(classes, perm):
    return tuple(sorted(tuple(sorted(perm(x) for x in c)) for c in classes))


def structured_maps(F):
    return [
        sgn_map(4, F),
        one_map(4, F),
        ex_f4_map(F, 3),
        ex_h_map(4, F, [1, 2, 3]),
        ex_g_map(5, F),
        sgn_nfix_map(4, F, 2, 3),
    ]


# -- witnesses -------------------------------------------------------------------------------


def test_sgn_witness_all_ones():
    for n in (2, 3, 4):
        w = column_witness(sgn_map(n, GF7), 1, n)
        assert w is not None and w.Z == (1,) * n


def test_permanent_has_no_witness():
    f = one_map(3, GF5)
    for i in range(1, 4):
        for j in range(1, 4):
            if i != j:
                assert column_witness(f, i, j) is None
                assert row_witness(f, i, j) is None


def test_n2_witness_ratio():
    rng = random.Random(0)
    for _ in range(10):
        f = random_map(2, GF7, rng)
        w = column_witness(f, 1, 2)
        t, ident = Permutation([2, 1]), Permutation([1, 2])
        assert GF7.div(w.Z[1], w.Z[0]) == GF7.neg(GF7.div(f(t), f(ident)))


def test_witness_errors():
    with pytest.raises(IndexOutOfRange):
        column_witness(sgn_map(3, GF7), 0, 2)
    with pytest.raises(IndicesEqual):
        column_witness(sgn_map(3, GF7), 2, 2)


def test_witness_validity_symmetry_transitivity():
    rng = random.Random(1)
    F = GF7
    for f in structured_maps(F):
        g = h_action(f, SquareMatrix.random(F, f.n, rng, nonzero=True))
        n = g.n
        for fn in (column_witness, row_witness):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i == j:
                        continue
                    w = fn(g, i, j)
                    back = fn(g, j, i)
                    assert (w is None) == (back is None)
                    if w is None:
                        continue
                    assert w.holds(g)
                    # Z' is proportional to Z^[-1]
                    prods = {F.mul(a, b) for a, b in zip(w.Z, back.Z)}
                    assert len(prods) == 1
                    for k in range(1, n + 1):
                        if k in (i, j):
                            continue
                        w2 = fn(g, j, k)
                        if w2 is not None:
                            w3 = fn(g, i, k)
                            assert w3 is not None
                            composed = [F.mul(a, b) for a, b in zip(w.Z, w2.Z)]
                            ratios = {F.div(a, b) for a, b in zip(composed, w3.Z)}
                            assert len(ratios) == 1


def test_column_relation_against_vanishing_definition():
    """Brute-force the defining vanishing property over GF(3)."""
    rng = random.Random(2)
    maps = [sgn_map(3, GF3), one_map(3, GF3)]
    maps += [random_map(3, GF3, rng) for _ in range(4)]
    maps += [h_action(sgn_map(3, GF3), SquareMatrix.random(GF3, 3, rng, nonzero=True))]
    maps += [GroupMap(2, GF3, v) for v in ((1, 1), (1, 2), (2, 2))]
    for f in maps:
        for i in range(1, f.n + 1):
            for j in range(i + 1, f.n + 1):
                expected = column_equivalent(list(f.values), i, j, f.n, 3)
                assert (column_witness(f, i, j) is not None) == expected


# -- partitions ----------------------------------------------------------------------------------


def test_partition_examples():
    for n in (2, 3, 4, 5):
        p = partitions(sgn_map(n, GF7))
        assert p.column_classes == p.row_classes == (tuple(range(1, n + 1)),)
        assert p.c_list == p.r_list == (n,)
    for n in (3, 4, 5):
        p = partitions(one_map(n, GF7))
        assert p.column_classes == p.row_classes == tuple((k,) for k in range(1, n + 1))
    p = partitions(ex_h_map(4, GF7, [1, 2, 3]))
    assert p.column_classes == ((1, 2), (3, 4))
    assert p.row_classes == ((1,), (2,), (3,), (4,))


def test_exhaustive_scan_agrees():
    rng = random.Random(3)
    for f in structured_maps(GF7) + [random_map(4, GF7, rng)]:
        assert partitions(f) == partitions(f, exhaustive=True)


def test_h_invariance():
    rng = random.Random(4)
    for f in structured_maps(GF7):
        A = SquareMatrix.random(GF7, f.n, rng, nonzero=True)
        assert partitions(h_action(f, A)) == partitions(f)


def test_ph_covariance():
    rng = random.Random(5)
    for f in structured_maps(GF7):
        n = f.n
        A = SquareMatrix.random(GF7, n, rng, nonzero=True)
        t, t2 = random_perm(n, rng), random_perm(n, rng)
        g = ph_action(f, A, t, t2)
        # columns move by t2^-1, rows by t^-1
        assert column_partition(g) == image_classes(column_partition(f), t2.inverse())
        assert row_partition(g) == image_classes(row_partition(f), t.inverse())


def test_no_class_of_size_n_minus_1():
    rng = random.Random(6)
    maps = structured_maps(GF7)
    for n in (3, 4, 5):
        maps += [random_map(n, GF7, rng) for _ in range(3)]
        maps += [random_central_map(n, GF7, rng) for _ in range(3)]
    for f in maps:
        p = partitions(f)
        assert f.n - 1 not in p.c_list and f.n - 1 not in p.r_list


def test_four_by_four_implication():
    rng = random.Random(7)
    hits = 0
    candidates = [ex_f4_map(GF7, x) for x in range(1, 7)] + [ex_h_map(4, GF7, [1, 2, x]) for x in range(1, 7)]
    for base in list(candidates):
        for _ in range(3):
            candidates.append(h_action(base, SquareMatrix.random(GF7, 4, rng, nonzero=True)))
    for f in candidates:
        p = partitions(f)
        if p.column_classes == ((1, 2), (3, 4)) and p.row_class_of(1) == p.row_class_of(2):
            hits += 1
            assert p.row_class_of(3) == p.row_class_of(4)
    assert hits > 0


def test_rigid_examples():
    assert is_rigid(one_map(3, GF5))
    for n in (2, 3, 4):
        assert not is_rigid(sgn_map(n, GF7))
    rng = random.Random(8)
    for _ in range(5):
        assert not is_rigid(random_map(2, GF7, rng))


# -- normalization ----------------------------------------------------------------------------


def test_normalize_sgn_is_trivial():
    w = normalize(sgn_map(4, GF7))
    assert w.A == SquareMatrix.ones(GF7, 4)
    assert w.g == sgn_map(4, GF7)


def test_normalize_sgn_nfix_gives_scalar_sgn():
    for beta in range(2, 7):
        f = sgn_nfix_map(4, GF7, 1, beta)
        g = normalize(f).g
        c = g(Permutation.identity(4))
        assert g == sgn_map(4, GF7).scale(c)
        b_inv = GF7.inv(beta)
        A = SquareMatrix(GF7, [[1 if i == j else b_inv for j in range(4)] for i in range(4)])
        # det(A * M) is a scalar multiple of f~(M), so A^[-1] sends f to a multiple of sgn
        assert h_action(sgn_map(4, GF7), A) == f.scale(GF7.inv(GF7.pow(beta, 4)))
        back = h_action(f, hadamard_inverse(A))
        assert back == sgn_map(4, GF7).scale(back(Permutation.identity(4)))


def test_normalize_n2_random():
    rng = random.Random(9)
    t, ident = Permutation([2, 1]), Permutation([1, 2])
    for _ in range(20):
        g = normalize(random_map(2, GF7, rng)).g
        assert g(t) == GF7.neg(g(ident))


def test_normalize_random_maps():
    rng = random.Random(10)
    for f in structured_maps(GF11):
        f = h_action(f, SquareMatrix.random(GF11, f.n, rng, nonzero=True))
        w = normalize(f)
        assert is_normalized(w.g)
        assert w.replay(f) == w.g
        assert partitions(w.g) == partitions(f)


def test_fully_normalize_examples():
    w = fully_normalize(sgn_map(4, GF7))
    ident = Permutation.identity(4)
    assert w.tau == ident and w.tau_prime == ident and w.g == sgn_map(4, GF7)

    p = partitions(fully_normalize(ex_g_map(5, GF7)).g)
    assert p.column_classes == ((1, 2, 3), (4, 5))
    assert p.row_classes == ((1, 2), (3, 4), (5,))


def test_fully_normalize_interleaved_classes():
    base = ex_f4_map(GF7, 3)
    assert column_partition(base) == ((1, 2), (3, 4))
    # move columns so that the classes become {1,3} and {2,4}
    t2 = Permutation([1, 3, 2, 4])
    f = ph_action(base, SquareMatrix.ones(GF7, 4), Permutation.identity(4), t2)
    assert column_partition(f) == ((1, 3), (2, 4))
    w = fully_normalize(f)
    assert image_classes(column_partition(f), w.tau) == ((1, 2), (3, 4))
    assert is_fully_normalized(w.g)
    assert w.replay(f) == w.g
    assert is_column_normalized(w.g)
