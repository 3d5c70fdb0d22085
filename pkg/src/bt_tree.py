#!/usr/bin/env python3
"""
Bruhat-Tits Tree
Navigation of the tree of maximal orders at an unramified prime p. A vertex
is a global order that differs from its neighbours only at p; the p+1
neighbours come from the lines of P^1(F_p) through an explicit splitting
O/pO = M_2(F_p).
"""

import itertools
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

try:
    from .errors import RamificationError, SearchExhaustedError, SplittingError
    from .exact_arith import valuation
    from .orders_ideals import QuatIdeal, QuatLattice, connecting_ideal, right_order
except ImportError:
    sys.path.insert(0, os.path.dirname(__file__))
    from errors import RamificationError, SearchExhaustedError, SplittingError
    from exact_arith import valuation
    from orders_ideals import QuatIdeal, QuatLattice, connecting_ideal, right_order


def lines(p):
    """Lines of P^1(F_p) in lexicographic order: (0, 1), (1, 0), (1, 1), ..., (1, p-1)."""
    return [(0, 1)] + [(1, t) for t in range(p)]


def normalize_line(v, p):
    """Canonical representative of the line spanned by a nonzero vector mod p."""
    x, y = v[0] % p, v[1] % p
    if x == 0:
        if y == 0:
            raise SearchExhaustedError("zero vector spans no line")
        return (0, 1)
    return (1, y * pow(x, -1, p) % p)


def _residue(c, p):
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, p) % p


def _matmul(m, n, p):
    return tuple(tuple(sum(m[i][k] * n[k][j] for k in range(2)) % p for j in range(2)) for i in range(2))


def _inverse_mod(matrix, p):
    """Inverse of a square matrix over F_p, or None when singular."""
    n = len(matrix)
    rows = [[e % p for e in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if rows[r][c]), None)
        if pivot is None:
            return None
        rows[c], rows[pivot] = rows[pivot], rows[c]
        inv = pow(rows[c][c], -1, p)
        rows[c] = [e * inv % p for e in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(e - f * g) % p for e, g in zip(rows[r], rows[c])]
    return [row[n:] for row in rows]


@dataclass(frozen=True)
class ResidueSplitting:
    """
    An explicit isomorphism O/pO -> M_2(F_p).

    `images[k]` is the matrix of the k-th basis vector of the order;
    `idempotent` holds the residue coordinates of the rank one idempotent e.
    """

    order: object
    p: int
    images: tuple
    idempotent: tuple
    lift_matrix: tuple = field(repr=False)

    def residue_coords(self, x):
        """Coordinates mod p of a p-integral element of the order."""
        return tuple(_residue(c, self.p) for c in self.order.lattice.coordinates(x.coords))

    def image(self, x):
        """The matrix of x."""
        c = self.residue_coords(x)
        p = self.p
        return tuple(tuple(sum(c[k] * self.images[k][i][j] for k in range(4)) % p for j in range(2))
                     for i in range(2))

    def lift(self, matrix):
        """Coordinate vector of an element of the order with the given image."""
        flat = [matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]]
        coords = [sum(flat[i] * self.lift_matrix[i][k] for i in range(4)) % self.p for k in range(4)]
        return self.order.lattice.element_from_coords(coords)

    def act(self, x, line):
        """The line image(x) * line."""
        m = self.image(x)
        return normalize_line((m[0][0] * line[0] + m[0][1] * line[1], m[1][0] * line[0] + m[1][1] * line[1]),
                              self.p)


@lru_cache(maxsize=4096)
def split_residue(order, p):
    """
    Split O/pO as a 2x2 matrix ring over F_p.

    A rank one idempotent e is found by exhaustive search over the p^4
    residues (trd = 1, nrd = 0), completed to matrix units e_ij, and every
    basis image is read off from e_1i * x * e_j1 = x_ij * e_11.

    Raises:
        RamificationError: p is ramified
        SplittingError: O is not maximal at p
        SearchExhaustedError: no splitting found although one must exist
    """
    algebra = order.algebra
    if p in algebra.ramified_primes:
        raise RamificationError(f"{p} is ramified in {algebra}")
    if not order.is_maximal_at(p):
        raise SplittingError(f"order is not maximal at {p}")

    lattice = order.lattice
    vectors = lattice.vectors
    mult = algebra.multiply_coords
    table = [[tuple(_residue(c, p) for c in lattice.coordinates(mult(u, v))) for v in vectors] for u in vectors]
    one = tuple(_residue(c, p) for c in lattice.coordinates((1, 0, 0, 0)))

    def mul(x, y):
        out = [0, 0, 0, 0]
        for k in range(4):
            if x[k]:
                for l in range(4):
                    if y[l]:
                        s = x[k] * y[l]
                        for m in range(4):
                            out[m] += s * table[k][l][m]
        return tuple(e % p for e in out)

    def value(x):
        return tuple(sum(x[k] * vectors[k][m] for k in range(4)) for m in range(4))

    idempotent = None
    for x in itertools.product(range(p), repeat=4):
        v = value(x)
        if (2 * v[0]) % p == 1 % p and algebra.norm_coords(v) % p == 0 and mul(x, x) == x:
            idempotent = x
            break
    if idempotent is None:
        raise SearchExhaustedError(f"no idempotent in O/{p}O")

    e11 = idempotent
    e22 = tuple((a - b) % p for a, b in zip(one, e11))
    lead = next(m for m in range(4) if e11[m])
    lead_inv = pow(e11[lead], -1, p)

    def scalar(x):
        """s with x = s * e11."""
        s = x[lead] * lead_inv % p
        if tuple(s * e % p for e in e11) != x:
            raise SearchExhaustedError("residue element is not a multiple of the idempotent")
        return s

    basis_units = [tuple(1 if k == m else 0 for k in range(4)) for m in range(4)]
    e12 = next((g for g in (mul(mul(e11, b), e22) for b in basis_units) if any(g)), None)
    e21 = None
    if e12 is not None:
        for b in basis_units:
            h = mul(mul(e22, b), e11)
            lam = scalar(mul(e12, h))
            if lam:
                inv = pow(lam, -1, p)
                e21 = tuple(inv * c % p for c in h)
                break
    if e12 is None or e21 is None:
        raise SearchExhaustedError(f"no matrix units in O/{p}O")

    left = (e11, e12)
    right = (e11, e21)
    images = tuple(
        tuple(tuple(scalar(mul(mul(left[i], b), right[j])) for j in range(2)) for i in range(2))
        for b in basis_units)

    flat = [[m[0][0], m[0][1], m[1][0], m[1][1]] for m in images]
    inverse = _inverse_mod(flat, p)
    if inverse is None:
        raise SearchExhaustedError("basis images are dependent")
    for k in range(4):
        for l in range(4):
            expected = tuple(tuple(sum(table[k][l][m] * images[m][i][j] for m in range(4)) % p
                                   for j in range(2)) for i in range(2))
            if _matmul(images[k], images[l], p) != expected:
                raise SearchExhaustedError("residue map is not multiplicative")

    return ResidueSplitting(order, p, images, idempotent, tuple(tuple(row) for row in inverse))


def line_ideal(splitting, line):
    """
    The left ideal {x in O : image(x) * line = 0} of reduced norm p.

    It is pO plus lifts of the two matrices whose rows are multiples of the
    vector orthogonal to the line.
    """
    p = splitting.p
    order = splitting.order
    u = (-line[1] % p, line[0] % p)
    lifts = [splitting.lift(((u[0], u[1]), (0, 0))), splitting.lift(((0, 0), (u[0], u[1])))]
    rows = [tuple(p * e for e in v) for v in order.lattice.vectors] + [x.coords for x in lifts]
    lattice = QuatLattice.from_rows(order.algebra, rows)
    return QuatIdeal(lattice, order, right_order(lattice))


@dataclass(frozen=True)
class TreeVertex:
    """A vertex of the tree: a global order, with its BFS depth."""

    order: object
    depth: int = field(default=0, compare=False)

    @property
    def key(self):
        return self.order.key


def neighbors(vertex, p):
    """
    The p+1 neighbours, in the order of the lines of P^1(F_p).

    Raises:
        RamificationError, SplittingError: propagated from split_residue
    """
    splitting = split_residue(vertex.order, p)
    return [TreeVertex(line_ideal(splitting, w).right_order, vertex.depth + 1) for w in lines(p)]


def tree_distance(first, second, p):
    """v_p of the reduced norm of the primitive connecting ideal."""
    first = getattr(first, 'order', first)
    second = getattr(second, 'order', second)
    return valuation(connecting_ideal(first, second).reduced_norm, p)
