import random
from fractions import Fraction

import pytest
import sympy

from sfl.errors import ExactModeTooLarge, FieldTooSmall, ZeroPolynomial
from sfl.field import Field
from sfl.functional import (
    eval_functional,
    expand_composed,
    polynomial_of,
    probabilistic_equal,
    proportional,
)
from sfl.groupmap import GroupMap, h_action, one_map, random_map, sgn_map
from sfl.linmap import TransformationMatrix, vec_index
from sfl.matrix import SquareMatrix, hadamard, perm_matrix
from sfl.perm import symmetric_group

GF5, GF7, GF11, GF13 = (Field.gf(p) for p in (5, 7, 11, 13))
Q = Field.rationals()


def random_operator(F, n, rng):
    N = n * n
    return TransformationMatrix(F, n, [[F.random_element(rng) for _ in range(N)] for _ in range(N)])


def sympy_composed(g, U):
    """Reference expansion of g~(U(M)) with sympy, returned as {exponent tuple: coef mod p}."""
    n, p = g.n, g.field.p
    xs = sympy.symbols(f"x0:{n * n}")
    image = [[sum(U.entries[vec_index(n, i, j)][k] * xs[k] for k in range(n * n)) for j in range(1, n + 1)]
             for i in range(1, n + 1)]
    total = 0
    for s, v in g.items():
        term = v
        for j in range(n):
            term *= image[s(j + 1) - 1][j]
        total += term
    poly = sympy.Poly(sympy.expand(total), *xs)
    return {e: c % p for e, c in poly.terms() if c % p}


def test_eval_on_permutation_matrices():
    rng = random.Random(0)
    for n in range(1, 6):
        for f in (sgn_map(n, GF7), one_map(n, GF7), random_map(n, GF7, rng)):
            for s, v in f.items():
                assert eval_functional(f, perm_matrix(s, GF7)) == v


def test_eval_examples():
    assert eval_functional(sgn_map(4, GF7), SquareMatrix.identity(GF7, 4)) == 1
    f = GroupMap(2, GF5, [1, 2])
    M = SquareMatrix(GF5, [[1, 2], [3, 4]])
    assert eval_functional(f, M) == 1
    A = SquareMatrix(GF5, [[1, -2], [1, 1]])
    assert eval_functional(f, M) == eval_functional(sgn_map(2, GF5), hadamard(A, M))


def test_column_multilinearity():
    rng = random.Random(1)
    f = random_map(4, GF7, rng)
    for _ in range(10):
        M = SquareMatrix.random(GF7, 4, rng)
        u = [GF7.random_element(rng) for _ in range(4)]
        v = [GF7.random_element(rng) for _ in range(4)]
        lam, mu = GF7.random_element(rng), GF7.random_element(rng)
        j = rng.randint(0, 3)

        def with_col(c):
            rows = [list(r) for r in M.rows]
            for i in range(4):
                rows[i][j] = c[i]
            return SquareMatrix(GF7, rows)

        mixed = [(lam * a + mu * b) % 7 for a, b in zip(u, v)]
        lhs = eval_functional(f, with_col(mixed))
        rhs = (lam * eval_functional(f, with_col(u)) + mu * eval_functional(f, with_col(v))) % 7
        assert lhs == rhs


def test_polynomial_examples():
    p1 = polynomial_of(GroupMap(1, GF7, [3]))
    assert p1.terms == {(1,): 3}
    det2 = polynomial_of(sgn_map(2, GF7))
    assert det2.terms == {(1, 0, 0, 1): 1, (0, 1, 1, 0): 6}
    per3 = polynomial_of(one_map(3, GF7))
    assert len(per3) == 6 and set(per3.terms.values()) == {1}


def test_polynomial_evaluates_like_functional():
    rng = random.Random(2)
    f = random_map(4, GF7, rng)
    P = polynomial_of(f)
    for _ in range(10):
        M = SquareMatrix.random(GF7, 4, rng)
        assert P.evaluate_matrix(M) == eval_functional(f, M)


def test_expand_composed_examples():
    rng = random.Random(3)
    g = random_map(3, GF7, rng)
    assert expand_composed(g, TransformationMatrix.identity(GF7, 3)) == polynomial_of(g)
    R = SquareMatrix.random(GF7, 3, rng, nonzero=True)
    assert expand_composed(g, TransformationMatrix.hadamard(R)) == polynomial_of(h_action(g, R))
    s2 = sgn_map(2, GF7)
    assert expand_composed(s2, TransformationMatrix.scalar(GF7, 2, 2)) == polynomial_of(s2).scale(4)


def test_expand_composed_against_sympy():
    rng = random.Random(4)
    for n in (2, 3):
        for _ in range(3):
            g = random_map(n, GF7, rng)
            U = random_operator(GF7, n, rng)
            assert expand_composed(g, U).terms == sympy_composed(g, U)


def test_expand_composed_composition():
    rng = random.Random(5)
    g = random_map(2, GF7, rng)
    U1, U2 = random_operator(GF7, 2, rng), random_operator(GF7, 2, rng)
    # g~((U1 U2)(M)) is the composite; evaluate both against random points
    both = expand_composed(g, U1.compose(U2))
    for _ in range(10):
        M = SquareMatrix.random(GF7, 2, rng)
        assert both.evaluate_matrix(M) == eval_functional(g, U1.apply(U2.apply(M)))


def test_expand_composed_too_large():
    with pytest.raises(ExactModeTooLarge):
        expand_composed(one_map(5, GF7), TransformationMatrix.identity(GF7, 5))


def test_proportional_examples():
    det3, per3 = polynomial_of(sgn_map(3, GF7)), polynomial_of(one_map(3, GF7))
    assert proportional(det3.scale(2), det3) == 2
    assert proportional(det3, per3) is None
    assert proportional(per3, per3) == 1
    with pytest.raises(ZeroPolynomial):
        proportional(per3, per3.scale(0))


def test_probabilistic_examples():
    s3 = sgn_map(3, GF13)
    ident = TransformationMatrix.identity(GF13, 3)
    assert probabilistic_equal(s3, ident, s3, trials=5, seed=1).equal
    # scaling by 2 multiplies a cubic form by 8; over GF(7) that is the identity
    s7 = sgn_map(3, GF7)
    with pytest.raises(FieldTooSmall):
        probabilistic_equal(s7, TransformationMatrix.scalar(GF7, 3, 2), s7, trials=5, seed=1)
    res = probabilistic_equal(s3, TransformationMatrix.scalar(GF13, 3, 2), s3, trials=5, seed=1)
    assert not res.equal
    assert eval_functional(s3, res.witness.scale(2)) != eval_functional(s3, res.witness)
    R = SquareMatrix.outer(GF13, [1, 2, 3], [1, 7, 9])  # prod x_k y_k = 1*14*27 = 1 mod 13
    o3 = one_map(3, GF13)
    assert probabilistic_equal(o3, TransformationMatrix.hadamard(R), o3, trials=10, seed=2).equal


def test_probabilistic_rationals():
    s = sgn_map(3, Q)
    U = TransformationMatrix.scalar(Q, 3, Fraction(1, 2))
    res = probabilistic_equal(s, U, s.scale(Fraction(1, 8)), trials=4, seed=3)
    assert res.equal


def test_seed_replay():
    s3 = sgn_map(3, GF13)
    U = TransformationMatrix.scalar(GF13, 3, 2)
    a = probabilistic_equal(s3, U, s3, trials=3, seed=9)
    b = probabilistic_equal(s3, U, s3, trials=3, seed=9)
    assert a.witness == b.witness


def test_group_order_sanity():
    assert symmetric_group(5).order == 120
