"""Orders in quadratic fields and orders built from declared splitting data.

An order is either

  * quadratic: Z + f*Z[w] inside a quadratic field, identified by the
    conductor f >= 1 (every order of a quadratic field has this shape), or
  * declared: carved out of a validated data file that lists, per
    non-invertible prime, the places above it with their degrees,
    ramification exponents and ideal-class images.

Either way the order knows its non-invertible primes together with the
splitting fabric the divisor machinery consumes: degrees d_{i,j}, exponents
e_{i,j}, the gcd g_i of the degrees and deterministic Bezout coefficients
lambda_{i,j} with sum(lambda * d) = g.

Divisors live on two levels.  Over the normalization they are supported on
places (labels like ``2.0``, ``3`` or declared labels like ``P1``); over the
order they are supported on maximal ideals of the order, where invertible
primes keep the label of the unique place above them and each non-invertible
prime gets its own label (the rational prime for quadratic orders).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .abgroup import AbelianGroup, GroupElement, bezout_gcd
from .errors import (
    BackendError,
    NotConductorIdealError,
    PlaceResolutionError,
    UnsupportedOrderError,
)
from .ntheory import factorize
from .quadfield import (
    QElement,
    QIdeal,
    QuadField,
    class_group,
    element_divisor,
    fundamental_unit,
    prime_to_ideal,
    splitting,
    torsion_units,
)

LEVEL_ORDER = "order"
LEVEL_NORMALIZATION = "normalization"


class Divisor:
    """Integer formal sum over labeled maximal ideals, finite support."""

    __slots__ = ("level", "support")

    def __init__(self, level, support=None):
        if level not in (LEVEL_ORDER, LEVEL_NORMALIZATION):
            raise ValueError(f"unknown divisor level {level!r}")
        self.level = level
        self.support = {
            label: int(c) for label, c in (support or {}).items() if int(c) != 0
        }

    def is_zero(self):
        return not self.support

    def coefficient(self, label):
        return self.support.get(label, 0)

    def __add__(self, other):
        if not isinstance(other, Divisor) or other.level != self.level:
            raise ValueError("divisors on different levels")
        out = dict(self.support)
        for label, c in other.support.items():
            out[label] = out.get(label, 0) + c
        return Divisor(self.level, out)

    def __neg__(self):
        return Divisor(self.level, {l: -c for l, c in self.support.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n):
        return Divisor(self.level, {l: int(n) * c for l, c in self.support.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        return (isinstance(other, Divisor) and other.level == self.level
                and other.support == self.support)

    def __hash__(self):
        return hash((self.level, tuple(sorted(self.support.items()))))

    def __repr__(self):
        return f"Divisor({self.level!r}, {self.support!r})"


@dataclass(frozen=True)
class PlaceInfo:
    """One place above a non-invertible prime."""

    label: str
    degree: int
    e: int
    place: object = None          # PrimePlace for the quadratic backend
    class_image: tuple = None     # invariant coordinates for declared data


@dataclass(frozen=True)
class NonInvertiblePrime:
    label: str
    p: int
    residue_size: int
    places: tuple
    g: int
    lambdas: tuple


class OrderData:
    """An order together with its non-invertible primes."""

    def __init__(self, kind, primes, field=None, conductor=None,
                 declared=None, selection=()):
        self.kind = kind
        self.primes = tuple(primes)
        self.field = field
        self.conductor = conductor
        self.declared = declared
        self.selection = tuple(selection)
        self._place_to_prime = {}
        for prime in self.primes:
            for pl in prime.places:
                if pl.label in self._place_to_prime:
                    raise PlaceResolutionError(
                        f"place {pl.label} appears under two selected primes")
                self._place_to_prime[pl.label] = (prime, pl)
        self._class_group = None

    @property
    def is_quadratic(self):
        return self.kind == "quadratic"

    @property
    def is_maximal(self):
        return not self.primes

    def class_group(self) -> AbelianGroup:
        """Class group of the normalization."""
        if self._class_group is None:
            if self.is_quadratic:
                self._class_group = class_group(self.field).group
            else:
                self._class_group = AbelianGroup(self.declared.class_invariants)
        return self._class_group

    def place_class(self, place_info) -> GroupElement:
        """Ideal class of a place of the normalization."""
        cl = self.class_group()
        if self.is_quadratic:
            return class_group(self.field).dlog(place_info.place.ideal())
        return cl.member(place_info.class_image)

    def invertible_place_class(self, label) -> GroupElement:
        """Ideal class of the place above an invertible prime of the order."""
        if not self.is_quadratic:
            raise BackendError(
                "declared data carries no class images outside the conductor")
        place = resolve_place(self.field, label)
        return class_group(self.field).dlog(place.ideal())

    def prime_for_place(self, label):
        """(prime, place) pair when the label lies over the conductor."""
        return self._place_to_prime.get(label)

    def sort_key(self, label):
        """Deterministic ordering of order-level labels: (p, branch)."""
        for idx, prime in enumerate(self.primes):
            if prime.label == label:
                return (prime.p, -1, idx)
        if self.is_quadratic:
            p, branch = _parse_quadratic_label(label)
            return (p, branch if branch is not None else -1, 0)
        return (0, -1, 0)

    def describe(self):
        if self.is_quadratic:
            if self.conductor == 1:
                return f"maximal order of {self.field}"
            return f"Z + {self.conductor}*O~ in {self.field}"
        sel = ",".join(self.selection) if self.selection else "(none)"
        return f"declared order [{sel}]"

    def __repr__(self):
        return f"OrderData({self.describe()})"


def _parse_quadratic_label(label):
    parts = str(label).split(".")
    try:
        p = int(parts[0])
        branch = int(parts[1]) if len(parts) > 1 else None
    except (ValueError, IndexError):
        raise PlaceResolutionError(f"malformed place label {label!r}")
    if len(parts) > 2 or p < 2:
        raise PlaceResolutionError(f"malformed place label {label!r}")
    return p, branch


def resolve_place(field: QuadField, label):
    """Place of the maximal order from a textual label like '2.0' or '3'."""
    p, branch = _parse_quadratic_label(label)
    places = splitting(field, p)
    if branch is None:
        if len(places) > 1:
            raise PlaceResolutionError(
                f"{p} is split; specify a branch {p}.0 or {p}.1")
        return places[0]
    for place in places:
        if place.branch == branch:
            return place
    raise PlaceResolutionError(f"no place {label} over {p}")


def order_from_conductor(field: QuadField, f: int) -> OrderData:
    """The order Z + f*Z[w] with its non-invertible primes filled in."""
    f = int(f)
    if f < 1:
        raise ValueError("conductor must be >= 1")
    primes = []
    for p in sorted(factorize(f)):
        places = splitting(field, p)
        infos = tuple(
            PlaceInfo(pl.label, pl.degree, pl.e, place=pl) for pl in places
        )
        g, lambdas = bezout_gcd([pl.degree for pl in infos])
        primes.append(NonInvertiblePrime(str(p), p, p, infos, g, tuple(lambdas)))
    return OrderData("quadratic", primes, field=field, conductor=f)


def noninvertible_primes(order: OrderData):
    """The non-invertible maximal ideals with their derived data."""
    return list(order.primes)


def local_chow(order: OrderData, i: int) -> AbelianGroup:
    """Local Chow group at the i-th non-invertible prime: Z/g_i."""
    prime = order.primes[i]
    return AbelianGroup([prime.g] if prime.g > 1 else [])


def local_chow_at(order: OrderData, p: int) -> AbelianGroup:
    """Local Chow group at the primes over p (trivial when invertible)."""
    for i, prime in enumerate(order.primes):
        if prime.p == p:
            return local_chow(order, i)
    return AbelianGroup([])


def pushforward(order: OrderData, D: Divisor) -> Divisor:
    """Degree-weighted transfer of a normalization divisor down to the order."""
    if D.level != LEVEL_NORMALIZATION:
        raise ValueError("pushforward expects a divisor over the normalization")
    out = {}
    for label, coeff in D.support.items():
        hit = order.prime_for_place(label)
        if hit is not None:
            prime, pl = hit
            out[prime.label] = out.get(prime.label, 0) + coeff * pl.degree
            continue
        if not order.is_quadratic:
            raise PlaceResolutionError(
                f"place {label} is not part of the declared data")
        place = resolve_place(order.field, label)
        out[place.label] = out.get(place.label, 0) + coeff  # invertible: degree 1
    return Divisor(LEVEL_ORDER, out)


def div_over_order(order: OrderData, a: QElement) -> Divisor:
    """Principal divisor of a field element over the order."""
    if not order.is_quadratic:
        raise BackendError("declared backend has no element arithmetic")
    if a.is_zero():
        raise ValueError("zero element has no divisor")
    over_max = Divisor(LEVEL_NORMALIZATION, element_divisor(order.field, a))
    return pushforward(order, over_max)


def kernel_generators(order: OrderData):
    """Generators of ker(pushforward), one divisor per (prime, place) pair.

    For places above the i-th prime the generator is
    (d_{i,j}/g_i) * Q_i - P_{i,j} with Q_i = sum(lambda_{i,k} * P_{i,k});
    each pushes forward to zero.
    """
    out = []
    for prime in order.primes:
        q = {}
        for pl, lam in zip(prime.places, prime.lambdas):
            if lam:
                q[pl.label] = q.get(pl.label, 0) + lam
        q_div = Divisor(LEVEL_NORMALIZATION, q)
        for pl in prime.places:
            gen = (pl.degree // prime.g) * q_div - Divisor(
                LEVEL_NORMALIZATION, {pl.label: 1})
            out.append(gen)
    return out


def divisor_to_ideal(order: OrderData, D: Divisor) -> QIdeal:
    """Product of place ideals given a divisor over the normalization."""
    if not order.is_quadratic:
        raise BackendError("declared backend has no ideal arithmetic")
    if D.level != LEVEL_NORMALIZATION:
        raise ValueError("expected a divisor over the normalization")
    acc = QIdeal.unit_ideal(order.field)
    for label in sorted(D.support):
        place = resolve_place(order.field, label)
        acc = acc * prime_to_ideal(order.field, place) ** D.support[label]
    return acc


def conductor_test(field: QuadField, exponents):
    """Furtwaengler's criterion for a product of place powers.

    ``exponents`` maps place labels to integers k >= 0.  Returns
    (is_conductor, violating_label_or_None); the criterion is checked per
    rational prime and combined multiplicatively.
    """
    by_p = {}
    for label, k in exponents.items():
        k = int(k)
        if k < 0:
            raise ValueError("exponents must be >= 0")
        place = resolve_place(field, label)
        kmap = by_p.setdefault(place.p, {})
        if place.label in kmap:
            raise PlaceResolutionError(f"place {place.label} given twice")
        kmap[place.label] = k
    for p in sorted(by_p):
        places = splitting(field, p)
        kvec = {pl.label: by_p[p].get(pl.label, 0) for pl in places}
        for pl in places:
            if pl.degree != 1:
                continue  # residue field is not F_p
            ki = kvec[pl.label]
            if (ki - 1) % pl.e:
                continue
            threshold = (ki - 1) // pl.e
            ok = any(
                kvec[other.label] > threshold * other.e
                for other in places if other.label != pl.label
            )
            if not ok:
                return False, pl.label
    return True, None


def is_conductor_ideal(field: QuadField, exponents) -> bool:
    """True when the product of place powers occurs as a conductor."""
    ok, _ = conductor_test(field, exponents)
    return ok


def declared_conductor_test(order: OrderData):
    """Furtwaengler verdict for a declared order's conductor.

    The declared conductor is the product of the listed places, each to its
    ramification exponent; the place tables of the selection are taken as
    complete (places left out carry exponent zero and can neither satisfy
    nor trigger the criterion).
    """
    for prime in order.primes:
        p = prime.p
        for pl in prime.places:
            if not (prime.residue_size == p and pl.degree == 1):
                continue
            ki = pl.e
            if (ki - 1) % pl.e:
                continue
            threshold = (ki - 1) // pl.e
            ok = any(
                other.e > threshold * other.e
                for other in prime.places if other.label != pl.label
            )
            if not ok:
                return False, pl.label
    return True, None


def order_from_ideal(field: QuadField, exponents) -> OrderData:
    """Order Z + A for a conductor ideal A given by place exponents.

    Only ideals of the shape f*Z[w] produce quadratic orders; anything else
    is rejected (it cannot occur for valid conductor ideals in a quadratic
    field, but the check keeps the contract honest).
    """
    ok, viol = conductor_test(field, exponents)
    if not ok:
        raise NotConductorIdealError(
            f"not a conductor ideal (violating place {viol})")
    by_p = {}
    for label, k in exponents.items():
        place = resolve_place(field, label)
        by_p.setdefault(place.p, {})[place.label] = int(k)
    f = 1
    for p in sorted(by_p):
        places = splitting(field, p)
        v = None
        for pl in places:
            k = by_p[p].get(pl.label, 0)
            if k % pl.e:
                raise UnsupportedOrderError(
                    "unsupported non-monogenic-conductor order")
            vj = k // pl.e
            if v is None:
                v = vj
            elif v != vj:
                raise UnsupportedOrderError(
                    "unsupported non-monogenic-conductor order")
        f *= p ** (v or 0)
    return order_from_conductor(field, f)


@dataclass
class FixReport:
    """Evaluation of the unit/Picard maximality conditions."""

    maximal: bool
    cond_squarefree: bool
    all_residue_f2: bool
    all_r_geq_2: bool
    equivalent_conditions_hold: bool
    residue_unit_order: int = None       # |(O~/F)^*|, quadratic backend only
    residue_units_trivial: bool = None


def prop_fix_report(order: OrderData) -> FixReport:
    """Report on the equivalent conditions for O^* = O~^* and Pic = Cl."""
    if order.is_maximal:
        report = FixReport(True, True, True, True, True)
        if order.is_quadratic:
            report.residue_unit_order = 1
            report.residue_units_trivial = True
        return report
    squarefree = True
    residue_f2 = True
    r_geq_2 = True
    for prime in order.primes:
        if len(prime.places) < 2:
            r_geq_2 = False
        if order.is_quadratic:
            if factorize(order.conductor)[prime.p] > 1:
                squarefree = False
        for pl in prime.places:
            if pl.e != 1:
                squarefree = False
            if not (prime.residue_size == 2 and pl.degree == 1):
                residue_f2 = False
    hold = squarefree and residue_f2 and r_geq_2
    report = FixReport(False, squarefree, residue_f2, r_geq_2, hold)
    if order.is_quadratic:
        from .quadfield import residue_unit_cardinality

        n = residue_unit_cardinality(order.field, order.conductor)
        report.residue_unit_order = n
        report.residue_units_trivial = n == 1
    return report


def divisor_kernel_witness(order: OrderData, bound: int = 3):
    """Element a with div_O(a) = 0 and a outside O^*, or None.

    Units of the normalization that escape the order are witnesses already;
    otherwise small combinations of the pushforward-kernel generators are
    tried, and any combination whose ideal class is trivial yields a witness
    through its generator.  ``None`` only means the coefficient bound was
    exhausted.
    """
    if not order.is_quadratic:
        raise BackendError("declared backend has no element arithmetic")
    if order.is_maximal:
        raise ValueError("the maximal order admits no witness")
    field = order.field
    f = order.conductor

    def outside(u):
        _, v, den = u.omega_coords()
        return den != 1 or v % f != 0

    for u in torsion_units(field):
        if u.is_rational():
            continue  # +-1 lie in every order
        if outside(u):
            return u
    if field.is_real:
        eps = fundamental_unit(field)
        if outside(eps):
            return eps

    gens = [g for g in kernel_generators(order) if not g.is_zero()]
    if not gens:
        return None
    cg = class_group(field)
    vectors = []
    for vec in _coefficient_box(len(gens), bound):
        vectors.append(vec)
    vectors.sort(key=lambda v: (max(abs(c) for c in v), v))
    for vec in vectors:
        div = Divisor(LEVEL_NORMALIZATION, {})
        for c, g in zip(vec, gens):
            if c:
                div = div + c * g
        if div.is_zero():
            continue
        ideal = divisor_to_ideal(order, div)
        if cg.dlog(ideal).is_identity():
            from .quadfield import is_principal

            alpha = is_principal(field, ideal)
            if alpha is not None:
                return alpha
    return None


def _coefficient_box(n, bound):
    for vec in product(range(-bound, bound + 1), repeat=n):
        if any(vec):
            yield vec
