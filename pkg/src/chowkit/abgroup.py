"""Finitely generated abelian groups in invariant-factor coordinates.

The computational core is an exact Smith normal form over the integers with
both transform matrices tracked.  On top of it sit the group constructions
everything else reduces to: quotients of free groups by relation lattices,
quotients by finitely generated subgroups, canonical coordinates, element
orders, and deterministic Bezout data for gcds of several integers.

Conventions:
  * invariant factors are listed as d_1 | d_2 | ... with every d_i >= 2,
    followed by 0 entries for free summands; factors equal to 1 are dropped;
  * a group remembers the presentation it came from: ``basis_change`` maps
    row vectors in the original generator coordinates to invariant-factor
    coordinates, ``generator_lifts`` goes the other way (one row per factor).

All arithmetic is on Python integers, so nothing overflows.
"""

from __future__ import annotations

from math import gcd, prod

from .ntheory import egcd


class IntMatrix:
    """Immutable arbitrary-precision integer matrix, row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries, cols=None):
        data = tuple(tuple(int(v) for v in row) for row in entries)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("ragged rows")
            if cols is not None and cols != width:
                raise ValueError("cols does not match row length")
        else:
            width = 0 if cols is None else int(cols)
        self._data = data
        self.rows = len(data)
        self.cols = width

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    def __getitem__(self, key):
        i, j = key
        return self._data[i][j]

    def row(self, i):
        return self._data[i]

    def column(self, j):
        return tuple(r[j] for r in self._data)

    def tolists(self):
        return [list(r) for r in self._data]

    def transpose(self):
        return IntMatrix(
            [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose()._data
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self._data],
            cols=other.cols,
        )

    def mul_vec(self, vec):
        """Row vector times matrix: returns tuple of length self.cols."""
        vec = tuple(vec)
        if len(vec) != self.rows:
            raise ValueError("vector length mismatch")
        return tuple(
            sum(vec[i] * self._data[i][j] for i in range(self.rows))
            for j in range(self.cols)
        )

    def det(self):
        """Exact determinant (fraction-free Bareiss)."""
        if self.rows != self.cols:
            raise ValueError("square matrix required")
        n = self.rows
        if n == 0:
            return 1
        m = self.tolists()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self._data == other._data and self.cols == other.cols

    def __hash__(self):
        return hash((self._data, self.cols))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self._data]!r})"


def _as_rows(relations, n_cols):
    if isinstance(relations, IntMatrix):
        rows = relations.tolists()
        width = relations.cols
    else:
        rows = [list(map(int, r)) for r in relations]
        width = len(rows[0]) if rows else n_cols
    if rows and any(len(r) != width for r in rows):
        raise ValueError("ragged relation rows")
    if rows and n_cols is not None and width != n_cols:
        raise ValueError(f"relations have {width} columns, expected {n_cols}")
    return rows


def _snf_inplace(m_rows, n_rows, n_cols):
    """Smith normal form with transforms.

    Returns (diag, U, V, Vinv) as lists; U*A*V = diag(diag) with U, Vinv
    applied as plain row-operation products.  Pivoting picks the entry of
    smallest nonzero absolute value, ties broken by (row, col), which makes
    the transforms reproducible.
    """
    M = m_rows
    U = [[1 if i == j else 0 for j in range(n_rows)] for i in range(n_rows)]
    V = [[1 if i == j else 0 for j in range(n_cols)] for i in range(n_cols)]
    Vinv = [row[:] for row in V]
    t = 0
    limit = min(n_rows, n_cols)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        # col dst += q * col src ; Vinv gets the inverse op on rows
        for row in M:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    while t < limit:
        piv = None
        best = None
        for i in range(t, n_rows):
            row = M[i]
            for j in range(t, n_cols):
                v = row[j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
        if piv is None:
            break
        if piv != (t, t):
            if piv[0] != t:
                swap_rows(t, piv[0])
            if piv[1] != t:
                swap_cols(t, piv[1])
        p = M[t][t]
        dirty = False
        for i in range(t + 1, n_rows):
            if M[i][t]:
                q = M[i][t] // p
                if q:
                    add_row(i, t, -q)
                if M[i][t]:
                    dirty = True
        for j in range(t + 1, n_cols):
            if M[t][j]:
                q = M[t][j] // p
                if q:
                    add_col(j, t, -q)
                if M[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot divides its row and column; force divisibility of the rest
        p = M[t][t]
        viol = None
        for i in range(t + 1, n_rows):
            row = M[i]
            for j in range(t + 1, n_cols):
                if row[j] % p:
                    viol = i
                    break
            if viol is not None:
                break
        if viol is not None:
            add_row(t, viol, 1)
            continue
        t += 1

    for i in range(limit):
        if M[i][i] < 0:
            M[i] = [-v for v in M[i]]
            U[i] = [-v for v in U[i]]
    diag = [M[i][i] for i in range(limit)]
    return diag, U, V, Vinv


def smith_normal_form(A):
    """Smith normal form of an integer matrix.

    Returns (D, U, V) with U*A*V = D, D diagonal with d_1 | d_2 | ... >= 0,
    and U, V unimodular.

    >>> D, U, V = smith_normal_form(IntMatrix([[2, 1], [0, 2]]))
    >>> [D[i, i] for i in range(2)]
    [1, 4]
    """
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    diag, U, V, _ = _snf_inplace(A.tolists(), A.rows, A.cols)
    D = [[0] * A.cols for _ in range(A.rows)]
    for i, d in enumerate(diag):
        D[i][i] = d
    return (
        IntMatrix(D, cols=A.cols),
        IntMatrix(U, cols=A.rows),
        IntMatrix(V, cols=A.cols),
    )


class AbelianGroup:
    """Finitely generated abelian group in invariant-factor form."""

    __slots__ = ("invariant_factors", "generator_labels", "basis_change", "generator_lifts")

    def __init__(self, invariant_factors, generator_labels=None, basis_change=None,
                 generator_lifts=None):
        factors = tuple(int(d) for d in invariant_factors)
        seen_zero = False
        for i, d in enumerate(factors):
            if d < 0 or d == 1:
                raise ValueError(f"invalid invariant factor {d}")
            if d == 0:
                seen_zero = True
            elif seen_zero:
                raise ValueError("free factors must come last")
            if i and factors[i - 1] != 0 and d % factors[i - 1]:
                if d != 0:
                    raise ValueError(f"divisibility chain broken at {factors[i - 1]} | {d}")
        self.invariant_factors = factors
        k = len(factors)
        if generator_labels is None:
            generator_labels = tuple(f"e{i + 1}" for i in range(k))
        else:
            generator_labels = tuple(generator_labels)
            if len(generator_labels) != k:
                raise ValueError("one label per invariant factor")
        self.generator_labels = generator_labels
        self.basis_change = IntMatrix.identity(k) if basis_change is None else basis_change
        self.generator_lifts = IntMatrix.identity(k) if generator_lifts is None else generator_lifts
        if self.basis_change.cols != k or self.generator_lifts.rows != k:
            raise ValueError("transform shape mismatch")

    @property
    def rank(self):
        return len(self.invariant_factors)

    @property
    def user_rank(self):
        """Number of generators of the presentation this group came from."""
        return self.basis_change.rows

    def cardinality(self):
        """Group order, or None when there is a free summand."""
        if any(d == 0 for d in self.invariant_factors):
            return None
        return prod(self.invariant_factors) if self.invariant_factors else 1

    def is_trivial(self):
        return not self.invariant_factors

    def reduce(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise ValueError("coordinate length mismatch")
        return tuple(
            c % d if d else c for c, d in zip(coords, self.invariant_factors)
        )

    def member(self, vector):
        """Canonical element from a vector in presentation-generator coordinates."""
        vector = tuple(int(v) for v in vector)
        if len(vector) != self.user_rank:
            raise ValueError(
                f"vector length {len(vector)} does not match generator count {self.user_rank}"
            )
        return GroupElement(self, self.reduce(self.basis_change.mul_vec(vector)))

    def element(self, coords):
        """Element directly from invariant-factor coordinates."""
        return GroupElement(self, self.reduce(coords))

    def identity(self):
        return GroupElement(self, (0,) * self.rank)

    def describe(self):
        """Human-readable shape, e.g. 'Z/2 x Z/6' or 'trivial'."""
        if not self.invariant_factors:
            return "trivial"
        return " x ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors)

    def __repr__(self):
        return f"AbelianGroup({list(self.invariant_factors)!r})"


class GroupElement:
    """Element of an AbelianGroup in reduced invariant-factor coordinates."""

    __slots__ = ("group", "coords")

    def __init__(self, group, coords):
        self.group = group
        self.coords = group.reduce(coords)

    def is_identity(self):
        return all(c == 0 for c in self.coords)

    def __add__(self, other):
        if other.group is not self.group:
            raise ValueError("elements of different groups")
        return GroupElement(self.group, [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return GroupElement(self.group, [-c for c in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n):
        return GroupElement(self.group, [int(n) * c for c in self.coords])

    __mul__ = __rmul__

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and other.group is self.group
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"GroupElement{self.coords!r}"


def quotient(n_generators, relations, labels=None):
    """Cokernel of a relation matrix: Z^n modulo the row lattice.

    ``relations`` rows are relations among n free generators.  The returned
    group's basis_change maps generator coordinates to invariant-factor
    coordinates; generator_lifts sections it.

    >>> quotient(2, [[2, 1], [0, 2]]).invariant_factors
    (4,)
    """
    n = int(n_generators)
    rows = _as_rows(relations, n)
    m = len(rows)
    diag, _, V, Vinv = _snf_inplace([r[:] for r in rows], m, n)
    moduli = list(diag) + [0] * (n - len(diag))
    kept = [j for j in range(n) if moduli[j] != 1]
    factors = [moduli[j] for j in kept]
    basis = IntMatrix([[V[i][j] for j in kept] for i in range(n)], cols=len(kept))
    lifts = IntMatrix([Vinv[j] for j in kept], cols=n)
    return AbelianGroup(factors, generator_labels=labels, basis_change=basis,
                        generator_lifts=lifts)


def member(G, vector):
    """Canonical representative of a generator-coordinate vector in G."""
    return G.member(vector)


def element_order(G, g):
    """Least n >= 1 with n*g = 0, or None when the order is infinite."""
    if g.group is not G:
        raise ValueError("element of a different group")
    n = 1
    for c, d in zip(g.coords, G.invariant_factors):
        if d == 0:
            if c:
                return None
            continue
        k = d // gcd(d, c) if c else 1
        n = n * k // gcd(n, k)
    return n


def subgroup_quotient(G, subgen):
    """G modulo the subgroup generated by the given elements.

    The result's basis_change projects invariant-factor coordinates of G to
    the quotient; its generator_lifts pick preimages in G.
    """
    k = G.rank
    rows = []
    for j, d in enumerate(G.invariant_factors):
        if d:
            row = [0] * k
            row[j] = d
            rows.append(row)
    for g in subgen:
        if g.group is not G:
            raise ValueError("subgroup generator from a different group")
        rows.append(list(g.coords))
    return quotient(k, rows)


def subgroup_cardinality(G, subgen):
    """Order of the subgroup generated by subgen inside a finite G."""
    total = G.cardinality()
    if total is None:
        raise ValueError("finite group required")
    q = subgroup_quotient(G, subgen).cardinality()
    return total // q


def bezout_gcd(values):
    """gcd of several integers with deterministic Bezout coefficients.

    Left fold: lambdas are produced by folding the extended gcd over the
    list, with the shortcut that a value already divisible by the running
    gcd receives coefficient 0.  Returns (g, lambdas) with g > 0 and
    sum(lambdas[i] * values[i]) == g.

    >>> bezout_gcd([2, 3])
    (1, [-1, 1])
    >>> bezout_gcd([2, 2])
    (2, [1, 0])
    """
    values = [int(v) for v in values]
    if not values or all(v == 0 for v in values):
        raise ValueError("need at least one nonzero value")
    g = 0
    lambdas = [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            lambdas[i] = 1 if v > 0 else -1
            continue
        if v % g == 0:
            continue
        g2, s, t = egcd(g, v)
        for j in range(i):
            lambdas[j] *= s
        lambdas[i] = t
        g = g2
    return g, lambdas


def solve_combination(G, elements, target):
    """Integer coefficients x with sum(x_i * elements_i) == target in G.

    Returns a list of ints, or None when target is outside the subgroup
    generated by the elements.
    """
    if target.group is not G or any(e.group is not G for e in elements):
        raise ValueError("elements of a different group")
    k = G.rank
    m = len(elements)
    # columns: the elements, then the relation moduli per finite factor
    cols = [list(e.coords) for e in elements]
    for j, d in enumerate(G.invariant_factors):
        if d:
            col = [0] * k
            col[j] = d
            cols.append(col)
    width = len(cols)
    if k == 0:
        return [0] * m
    rows = [[cols[c][r] for c in range(width)] for r in range(k)]
    diag, U, V, _ = _snf_inplace(rows, k, width)
    w = [sum(U[i][j] * target.coords[j] for j in range(k)) for i in range(k)]
    s = [0] * width
    for i in range(k):
        d = diag[i] if i < len(diag) else 0
        if d:
            if w[i] % d:
                return None
            s[i] = w[i] // d
        elif w[i]:
            return None
    z = [sum(V[i][j] * s[j] for j in range(width)) for i in range(width)]
    return z[:m]


def direct_sum_invariants(*factor_lists):
    """Invariant factors of a direct sum given by per-summand factor lists."""
    moduli = [d for factors in factor_lists for d in factors]
    n = len(moduli)
    rows = []
    for j, d in enumerate(moduli):
        if d:
            row = [0] * n
            row[j] = d
            rows.append(row)
    return quotient(n, rows).invariant_factors
