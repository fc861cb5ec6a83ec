"""Orders: conductors, push-forward, kernel generators, Furtwaengler, fix report."""

import random

import pytest

from chowkit.errors import NotConductorIdealError
from chowkit.orders import (
    LEVEL_NORMALIZATION,
    Divisor,
    conductor_test,
    div_over_order,
    divisor_kernel_witness,
    is_conductor_ideal,
    kernel_generators,
    local_chow,
    local_chow_at,
    noninvertible_primes,
    order_from_conductor,
    order_from_ideal,
    prop_fix_report,
    pushforward,
)
from chowkit.quadfield import QElement, make_field, splitting
from util import fundamental_discriminants


def test_order_from_conductor_examples():
    F = make_field(-7)
    O = order_from_conductor(F, 2)
    (prime,) = O.primes
    assert prime.label == "2" and prime.residue_size == 2
    assert [pl.degree for pl in prime.places] == [1, 1]
    assert prime.g == 1 and prime.lambdas == (1, 0)

    O34 = order_from_conductor(make_field(-4), 3)
    (p3,) = O34.primes
    assert [pl.degree for pl in p3.places] == [2]
    assert p3.g == 2

    assert order_from_conductor(F, 1).is_maximal
    assert noninvertible_primes(order_from_conductor(F, 1)) == []


def test_local_chow():
    O1 = order_from_conductor(make_field(-4), 3)
    assert local_chow(O1, 0).invariant_factors == (2,)
    assert local_chow_at(O1, 3).invariant_factors == (2,)
    assert local_chow_at(O1, 5).invariant_factors == ()
    with pytest.raises(IndexError):
        local_chow(O1, 1)


def test_pushforward_examples():
    F = make_field(-7)
    O = order_from_conductor(F, 2)
    D = Divisor(LEVEL_NORMALIZATION, {"2.0": 1, "2.1": -1})
    assert pushforward(O, D).is_zero()

    O34 = order_from_conductor(make_field(-4), 3)
    D3 = Divisor(LEVEL_NORMALIZATION, {"3": 1})
    assert pushforward(O34, D3).support == {"3": 2}

    assert pushforward(O, Divisor(LEVEL_NORMALIZATION, {})).is_zero()
    # invertible places push with degree 1
    D5 = Divisor(LEVEL_NORMALIZATION, {"11.0": 2})
    assert pushforward(O, D5).support == {"11.0": 2}


def test_pushforward_image_is_g_multiples():
    # coker(f_*) = prod Z/g_i: coefficients at p_i are exactly the multiples of g_i
    rng = random.Random(44)
    for d, f in ((-4, 3), (-23, 7), (-3, 6)):
        O = order_from_conductor(make_field(d), f)
        for prime in O.primes:
            seen = set()
            for _ in range(30):
                D = Divisor(LEVEL_NORMALIZATION, {
                    pl.label: rng.randint(-4, 4) for pl in prime.places})
                c = pushforward(O, D).coefficient(prime.label)
                assert c % prime.g == 0, (d, f, prime.label)
                seen.add(c)
            # g itself is attained (lambdas give a divisor pushing to g * p_i)
            q = Divisor(LEVEL_NORMALIZATION, {
                pl.label: lam for pl, lam in zip(prime.places, prime.lambdas) if lam})
            assert pushforward(O, q).coefficient(prime.label) == prime.g


def test_div_over_order_examples():
    F = make_field(-7)
    O = order_from_conductor(F, 2)
    alpha = QElement(F, 1, 1, 1)
    a = alpha / alpha.conj()
    assert div_over_order(O, a).is_zero()
    assert div_over_order(O, alpha).support == {"2": 1}
    # a rational inert prime has a single place; the coefficient stays 1
    q = QElement.from_int(F, 3)
    assert div_over_order(O, q).support == {"3": 1}
    with pytest.raises(ValueError):
        div_over_order(O, QElement.from_int(F, 0))


def test_kernel_generators_examples():
    F = make_field(-7)
    O = order_from_conductor(F, 2)
    gens = kernel_generators(O)
    assert [g.support for g in gens] == [{}, {"2.0": 1, "2.1": -1}]
    for g in gens:
        assert pushforward(O, g).is_zero()

    # r_i = 1: the lone generator collapses to zero (injective push-forward)
    O34 = order_from_conductor(make_field(-4), 3)
    assert [g.support for g in kernel_generators(O34)] == [{}]

    assert kernel_generators(order_from_conductor(F, 1)) == []


def test_kernel_generators_span():
    # any divisor in ker(f_*) reduces to zero against the generators
    rng = random.Random(2)
    for d, f in ((-23, 6), (-7, 10), (-4, 15), (40, 6)):
        O = order_from_conductor(make_field(d), f)
        gens = kernel_generators(O)
        for _ in range(20):
            D = Divisor(LEVEL_NORMALIZATION, {})
            coeffs = []
            for prime in O.primes:
                degs = [pl.degree for pl in prime.places]
                a = [rng.randint(-5, 5) for _ in degs]
                # adjust the last coefficient to land in the kernel, if possible
                s = sum(x * dd for x, dd in zip(a, degs))
                if s % degs[-1]:
                    continue
                a[-1] -= s // degs[-1]
                for x, pl in zip(a, prime.places):
                    if x:
                        D = D + Divisor(LEVEL_NORMALIZATION, {pl.label: x})
                coeffs.append(a)
            if D.is_zero():
                continue
            assert pushforward(O, D).is_zero()
            # eliminate: D + sum a_ij * gen_ij = 0
            acc = D
            idx = 0
            for prime, a in zip(O.primes, coeffs):
                for x, pl in zip(a, prime.places):
                    acc = acc + x * gens[idx]
                    idx += 1
            assert acc.is_zero()


def test_conductor_test_examples():
    F = make_field(-7)
    assert conductor_test(F, {"2.0": 1}) == (False, "2.0")
    assert is_conductor_ideal(F, {"2.0": 1, "2.1": 1})
    assert is_conductor_ideal(F, {"3": 1})
    assert is_conductor_ideal(F, {})
    # ramified places need even exponents
    assert conductor_test(F, {"7": 1})[0] is False
    assert is_conductor_ideal(F, {"7": 2})
    # split places need equal exponents
    assert conductor_test(F, {"2.0": 2, "2.1": 1})[0] is False
    assert is_conductor_ideal(F, {"2.0": 2, "2.1": 2})


def test_conductor_test_multiplicative():
    rng = random.Random(12)
    F = make_field(-23)
    place_pools = {
        2: [pl.label for pl in splitting(F, 2)],
        3: [pl.label for pl in splitting(F, 3)],
        13: [pl.label for pl in splitting(F, 13)],
        23: [pl.label for pl in splitting(F, 23)],
    }
    for _ in range(200):
        pa, pb = rng.sample(list(place_pools), 2)
        ea = {lab: rng.randint(0, 3) for lab in place_pools[pa]}
        eb = {lab: rng.randint(0, 3) for lab in place_pools[pb]}
        combined = dict(ea)
        combined.update(eb)
        assert is_conductor_ideal(F, combined) == (
            is_conductor_ideal(F, ea) and is_conductor_ideal(F, eb)
        )


def test_order_from_ideal():
    F = make_field(-7)
    O = order_from_ideal(F, {"2.0": 1, "2.1": 1})
    assert O.conductor == 2
    with pytest.raises(NotConductorIdealError):
        order_from_ideal(F, {"2.0": 1})
    assert order_from_ideal(F, {}).is_maximal


def test_prop_fix_report_examples():
    F = make_field(-7)
    rep = prop_fix_report(order_from_conductor(F, 2))
    assert rep.cond_squarefree and rep.all_residue_f2 and rep.all_r_geq_2
    assert rep.equivalent_conditions_hold
    assert rep.residue_unit_order == 1

    rep3 = prop_fix_report(order_from_conductor(make_field(-4), 3))
    assert not rep3.all_residue_f2
    assert not rep3.equivalent_conditions_hold
    assert rep3.residue_unit_order == 8

    repm = prop_fix_report(order_from_conductor(F, 1))
    assert repm.maximal and repm.equivalent_conditions_hold


def test_fix_conditions_equivalence_sweep():
    # conditions (4) and (5) agree on all quadratic orders |d| <= 500, f <= 50
    for d in fundamental_discriminants(500):
        F = make_field(d)
        for f in range(1, 51):
            rep = prop_fix_report(order_from_conductor(F, f))
            assert rep.equivalent_conditions_hold == (rep.residue_unit_order == 1), (d, f)


def test_one_noninvertible_prime_per_divisor():
    for d in (-7, -20, -23, 8, 40):
        F = make_field(d)
        for f in (2, 6, 12, 30):
            O = order_from_conductor(F, f)
            ps = sorted(p.p for p in O.primes)
            from chowkit.ntheory import factorize

            assert ps == sorted(factorize(f)), (d, f)


def test_divisor_kernel_witness():
    F = make_field(-7)
    O = order_from_conductor(F, 2)
    w = divisor_kernel_witness(O)
    assert w is not None
    assert div_over_order(O, w).is_zero()
    u, v, den = w.omega_coords()
    assert den != 1 or v % 2 != 0     # outside Z + 2*O~, hence outside O^*

    # inert conductor: the witness is a unit of the normalization
    Oi = order_from_conductor(make_field(-4), 3)
    wi = divisor_kernel_witness(Oi)
    assert wi is not None and abs(wi.norm()) == 1
    assert div_over_order(Oi, wi).is_zero()

    with pytest.raises(ValueError):
        divisor_kernel_witness(order_from_conductor(F, 1))
    # real field: fundamental unit escapes the order
    Or = order_from_conductor(make_field(8), 3)
    wr = divisor_kernel_witness(Or)
    assert wr is not None and div_over_order(Or, wr).is_zero()


def test_witness_yields_nontrivial_invertible_ideal():
    F = make_field(-7)
    O = order_from_conductor(F, 2)
    w = divisor_kernel_witness(O)
    # w*O is invertible (w is a unit times conductor-coprime structure) and != O
    assert not w.is_zero()
    assert div_over_order(O, w).is_zero()
