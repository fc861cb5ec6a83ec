"""Exact linear algebra and abelian-group constructions."""

import random
from itertools import combinations
from math import gcd, prod

import pytest

from chowkit.abgroup import (
    AbelianGroup,
    IntMatrix,
    bezout_gcd,
    direct_sum_invariants,
    element_order,
    member,
    quotient,
    smith_normal_form,
    solve_combination,
    subgroup_quotient,
)
from util import enumerate_subgroup_order


def diag_of(D):
    return [D[i, i] for i in range(min(D.rows, D.cols))]


def minors_gcd(A, k):
    g = 0
    for rows in combinations(range(A.rows), k):
        for cols in combinations(range(A.cols), k):
            sub = IntMatrix([[A[i, j] for j in cols] for i in rows])
            g = gcd(g, abs(sub.det()))
    return g


def check_snf(A):
    D, U, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert abs(U.det()) == 1
    assert abs(V.det()) == 1
    d = diag_of(D)
    for a, b in zip(d, d[1:]):
        if a:
            assert b % a == 0
        else:
            assert b == 0
    # determinant-divisor oracle: d_1*...*d_k = gcd of all k x k minors
    acc = 1
    for k in range(1, min(A.rows, A.cols) + 1):
        acc *= d[k - 1]
        assert abs(acc) == minors_gcd(A, k)
    return d


def test_snf_worked_examples():
    assert diag_of(smith_normal_form([[2, 1], [0, 2]])[0]) == [1, 4]
    assert diag_of(smith_normal_form([[0]])[0]) == [0]
    eye = IntMatrix.identity(4)
    D, U, V = smith_normal_form(eye)
    assert D == eye


def test_snf_empty_matrices():
    D, U, V = smith_normal_form(IntMatrix([], cols=3))
    assert D.rows == 0 and D.cols == 3
    assert V == IntMatrix.identity(3)


def test_snf_random_oracle():
    rng = random.Random(20240811)
    for _ in range(250):
        m = rng.randint(1, 5)
        n = rng.randint(1, 5)
        A = IntMatrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
        check_snf(A)


def test_quotient_worked_examples():
    # generators (p, c), relations 2p + c = 0 and 2c = 0
    assert quotient(2, [[2, 1], [0, 2]]).invariant_factors == (4,)
    assert quotient(1, []).invariant_factors == (0,)
    G = quotient(2, [[2, 0], [0, 3]])
    assert G.invariant_factors == (6,)
    # CRT oracle: all six elements, exactly one of each order dividing 6
    orders = sorted(element_order(G, G.element((k,))) for k in range(6))
    assert orders == [1, 2, 3, 3, 6, 6]


def test_quotient_presentation_invariance():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 4)
        m = rng.randint(1, 5)
        rows = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        base = quotient(n, rows).invariant_factors
        shuffled = rows[:]
        rng.shuffle(shuffled)
        assert quotient(n, shuffled).invariant_factors == base
        if m >= 2:
            added = [r[:] for r in rows]
            i, j = rng.sample(range(m), 2)
            added[i] = [a + b for a, b in zip(added[i], added[j])]
            assert quotient(n, added).invariant_factors == base


def test_member_examples():
    z4 = quotient(1, [[4]])
    assert member(z4, [6]).coords == (2,)
    z = quotient(1, [])
    assert member(z, [-3]).coords == (-3,)
    crt = quotient(2, [[2, 0], [0, 3]])
    assert element_order(crt, member(crt, [1, 1])) == 6
    with pytest.raises(ValueError):
        member(z4, [1, 2])


def test_element_order_examples():
    z4 = quotient(1, [[4]])
    assert element_order(z4, z4.identity()) == 1
    assert element_order(z4, z4.element((1,))) == 4
    mixed = quotient(2, [[0, 2]])
    assert mixed.invariant_factors == (2, 0)
    free_elt = mixed.member([1, 0])
    assert element_order(mixed, free_elt) is None


def test_subgroup_quotient_examples():
    z2 = quotient(1, [[2]])
    assert subgroup_quotient(z2, [z2.element((1,))]).invariant_factors == ()
    assert subgroup_quotient(z2, [z2.identity()]).invariant_factors == (2,)
    G = quotient(2, [[4, 0], [0, 2]])
    assert sorted(G.invariant_factors) == [2, 4]
    # quotient of Z/4 x Z/2 by the order-2 subgroup <2a + b>
    q = subgroup_quotient(G, [member(G, [2, 1])])
    assert q.invariant_factors == (4,)


def test_subgroup_order_product():
    rng = random.Random(99)
    for _ in range(40):
        factors = sorted(rng.choice([2, 2, 3, 4, 6, 8, 12]) for _ in range(rng.randint(1, 3)))
        # force a chain
        chain = []
        for d in factors:
            if chain and d % chain[-1]:
                d *= chain[-1]
            chain.append(d)
        G = AbelianGroup(chain)
        gens = [G.element(tuple(rng.randrange(d) for d in chain))
                for _ in range(rng.randint(1, 2))]
        h = enumerate_subgroup_order(G, gens)
        q = subgroup_quotient(G, gens).cardinality()
        assert h * q == G.cardinality()


def test_bezout_examples():
    assert bezout_gcd([2, 3]) == (1, [-1, 1])
    assert bezout_gcd([2, 2]) == (2, [1, 0])
    assert bezout_gcd([6]) == (6, [1])
    with pytest.raises(ValueError):
        bezout_gcd([0, 0])


def test_bezout_identity_random():
    rng = random.Random(4242)
    for _ in range(1000):
        vals = [rng.randint(-40, 40) for _ in range(rng.randint(1, 5))]
        if all(v == 0 for v in vals):
            vals[0] = 1
        g, lams = bezout_gcd(vals)
        assert g > 0
        assert sum(l * v for l, v in zip(lams, vals)) == g
        assert all(v % g == 0 for v in vals)


def test_solve_combination():
    G = quotient(2, [[4, 0], [0, 6]])
    a = member(G, [1, 0])
    b = member(G, [0, 2])
    target = member(G, [2, 4])
    x = solve_combination(G, [a, b], target)
    assert x is not None
    got = G.identity()
    for c, e in zip(x, [a, b]):
        got = got + c * e
    assert got == target
    # (1, 1) is not in <(2, 0), (0, 2)> inside Z/4 x Z/6
    odd = member(G, [1, 1])
    assert solve_combination(G, [2 * a, b], odd) is None


def test_direct_sum_invariants():
    assert direct_sum_invariants([2], [2]) == (2, 2)
    assert direct_sum_invariants([2], [3]) == (6,)
    assert direct_sum_invariants([], []) == ()


def test_basis_change_and_lifts_are_sections():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(rng.randint(0, 4))]
        G = quotient(n, rows)
        for j in range(G.rank):
            lifted = G.member(G.generator_lifts.row(j))
            expected = tuple(1 if t == j else 0 for t in range(G.rank))
            assert lifted.coords == G.reduce(expected)
