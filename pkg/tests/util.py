"""Shared helpers for the test suite: disc enumeration, oracles, transcription."""

from chowkit import FieldInputError, make_field
from chowkit.declared import DeclaredField, DeclaredPlace, DeclaredPrime, declared_order
from chowkit.quadfield import class_group


def fundamental_discriminants(bound, sign=None):
    """All fundamental discriminants with |d| <= bound (sign: -1, +1 or None)."""
    out = []
    for mag in range(3, bound + 1):
        for d in (-mag, mag):
            if sign is not None and (d > 0) != (sign > 0):
                continue
            try:
                make_field(d)
            except FieldInputError:
                continue
            out.append(d)
    return out


def enumerate_subgroup_order(G, gens):
    """Order of <gens> in a finite group by closure enumeration."""
    seen = {G.identity()}
    frontier = [G.identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def quotient_ring_kind_mod2(d):
    """Structure of Z[w]/2Z[w] by brute force on its four elements.

    Returns 'split' (F2 x F2), 'inert' (F4) or 'ramified' (F2[t]/t^2);
    used as an independent splitting oracle at p = 2.
    """
    n = ((d * d - d) // 4) % 2
    t = d % 2

    def mul(u, v):
        a, b = u
        c, e = v
        return ((a * c + b * e * n) % 2, (a * e + b * c + b * e * t) % 2)

    elems = [(a, b) for a in (0, 1) for b in (0, 1)]
    if any(u != (0, 0) and mul(u, u) == (0, 0) for u in elems):
        return "ramified"
    if any(u not in ((0, 0), (1, 0)) and mul(u, u) == u for u in elems):
        return "split"
    return "inert"


def transcribe_to_declared(order, reverse_places=False):
    """Hand-transcribe a quadratic order into declared data.

    Copies the class-group invariants and, per conductor prime, the places
    with their degrees, ramification exponents and class images; optionally
    reverses each place list to exercise a different Bezout/Q_i choice.
    """
    assert order.is_quadratic
    cg = class_group(order.field)
    invariants = list(cg.group.invariant_factors)
    recs = []
    for prime in order.primes:
        places = []
        for pl in prime.places:
            img = cg.dlog(pl.place.ideal()).coords
            places.append(DeclaredPlace(pl.label, pl.degree, pl.e, tuple(img)))
        if reverse_places:
            places = list(reversed(places))
        recs.append(DeclaredPrime(prime.label, prime.p, prime.residue_size,
                                  tuple(places)))
    decl = DeclaredField(
        f"transcribed from disc {order.field.d}, conductor {order.conductor}",
        tuple(invariants), tuple(recs))
    return declared_order(decl, decl.prime_labels)
