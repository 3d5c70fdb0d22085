#!/usr/bin/env python3
"""
Orders and Ideals
Rank-4 lattices in a quaternion algebra, orders, maximalization, Eichler
orders, unit groups and one-sided ideals. Lattices are kept in a canonical
form (minimal denominator, HNF), so structural equality is lattice equality.
"""

import itertools
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt, lcm

from sympy import factorint, primefactors

try:
    from .errors import (DefinitenessError, LevelError, MaximalizationError, NotIntegralError,
                         PreconditionError, RamificationError, RankError, SearchExhaustedError)
    from .exact_arith import (GramForm, determinant, hnf, iter_short_vectors, rational_gcd, short_vectors,
                              triangular_inverse, triangular_solve, valuation)
    from .quat_algebra import QuatElement
    from .settings import get_limits
except ImportError:
    sys.path.insert(0, os.path.dirname(__file__))
    from errors import (DefinitenessError, LevelError, MaximalizationError, NotIntegralError,
                        PreconditionError, RamificationError, RankError, SearchExhaustedError)
    from exact_arith import (GramForm, determinant, hnf, iter_short_vectors, rational_gcd, short_vectors,
                             triangular_inverse, triangular_solve, valuation)
    from quat_algebra import QuatElement
    from settings import get_limits


ONE = (1, 0, 0, 0)


def _integral_coords(x):
    """Split rational coordinates as (integer tuple, common denominator)."""
    d = 1
    for c in x:
        d = lcm(d, Fraction(c).denominator)
    return tuple(int(Fraction(c) * d) for c in x), d


@dataclass(frozen=True)
class QuatLattice:
    """
    A full-rank lattice (1/denom) * span(basis) in a quaternion algebra.

    Rows of `basis` are integer coordinates in (1, i, j, ij), in Hermite
    normal form; `denom` is the smallest denominator that makes them integral.
    """

    algebra: object
    denom: int
    basis: tuple

    @classmethod
    def from_rows(cls, algebra, rows, denom=1):
        """
        Canonical lattice spanned by rows / denom.

        Args:
            algebra: QuaternionAlgebra the lattice lives in
            rows: Spanning coordinate rows (ints or Fractions)
            denom: Common positive integer denominator of the rows

        Raises:
            RankError: the rows do not span a rank 4 lattice
        """
        rows = [tuple(row) for row in rows]
        clear = 1
        for row in rows:
            for e in row:
                if isinstance(e, Fraction):
                    clear = lcm(clear, e.denominator)
        integral = [[int(e * clear) for e in row] for row in rows]
        total = denom * clear
        basis = hnf(integral, 4)
        g = total
        for row in basis:
            for e in row:
                g = gcd(g, e)
        return cls(algebra, total // g, tuple(tuple(e // g for e in row) for row in basis))

    @classmethod
    def from_elements(cls, elements):
        elements = list(elements)
        if not elements:
            raise RankError("no elements")
        algebra = elements[0].algebra
        for x in elements:
            x._check(elements[0])
        return cls.from_rows(algebra, [x.coords for x in elements])

    @property
    def key(self):
        """Denominator followed by the 16 HNF entries; a total order on lattices."""
        return (self.denom,) + tuple(e for row in self.basis for e in row)

    @cached_property
    def vectors(self):
        return tuple(tuple(Fraction(e, self.denom) for e in row) for row in self.basis)

    def elements(self):
        return [QuatElement(self.algebra, v) for v in self.vectors]

    def coordinates(self, v):
        """Rational coordinates of a vector in this lattice's basis."""
        return triangular_solve(self.basis, [Fraction(e) * self.denom for e in v])

    def contains_coords(self, v):
        return all(c.denominator == 1 for c in self.coordinates(v))

    def __contains__(self, x):
        if isinstance(x, QuatElement):
            if x.algebra != self.algebra:
                return False
            return self.contains_coords(x.coords)
        return self.contains_coords((x, 0, 0, 0))

    def contains_lattice(self, other):
        return all(self.contains_coords(v) for v in other.vectors)

    def element_from_coords(self, c):
        """The element sum_k c_k * basis_k / denom."""
        return QuatElement(self.algebra, tuple(
            Fraction(sum(c[k] * self.basis[k][m] for k in range(4)), self.denom) for m in range(4)))

    def __add__(self, other):
        if other.algebra != self.algebra:
            raise PreconditionError("lattices from different algebras")
        return QuatLattice.from_rows(self.algebra, self.vectors + other.vectors)

    def scale(self, q):
        q = Fraction(q)
        return QuatLattice.from_rows(self.algebra, [tuple(q * e for e in row) for row in self.basis], self.denom)

    def left_multiply(self, x):
        """The lattice x * L."""
        xs, dx = _integral_coords(x.coords)
        mult = self.algebra.multiply_coords
        return QuatLattice.from_rows(self.algebra, [mult(xs, row) for row in self.basis], dx * self.denom)

    def right_multiply(self, x):
        """The lattice L * x."""
        xs, dx = _integral_coords(x.coords)
        mult = self.algebra.multiply_coords
        return QuatLattice.from_rows(self.algebra, [mult(row, xs) for row in self.basis], dx * self.denom)

    def conjugate_by(self, x):
        """The lattice x * L * x^-1."""
        return self.left_multiply(x).right_multiply(x.inverse())

    def product(self, other):
        """Span of all products l * m, l in self and m in other."""
        mult = self.algebra.multiply_coords
        rows = [mult(r, s) for r in self.basis for s in other.basis]
        return QuatLattice.from_rows(self.algebra, rows, self.denom * other.denom)

    def dual(self):
        """Dual lattice under the coordinate dot product."""
        inverse = triangular_inverse(self.basis)
        rows = [tuple(self.denom * inverse[i][k] for i in range(4)) for k in range(4)]
        return QuatLattice.from_rows(self.algebra, rows)

    def trace_dual(self):
        """Dual lattice under the pairing trd(x * conj(y))."""
        a, b = self.algebra.a, self.algebra.b
        weights = (Fraction(1, 2), 1 / (-2 * a), 1 / (-2 * b), 1 / (2 * a * b))
        return QuatLattice.from_rows(self.algebra, [
            tuple(e * w for e, w in zip(v, weights)) for v in self.dual().vectors])

    def intersection(self, other):
        return (self.dual() + other.dual()).dual()

    @property
    def covolume(self):
        vol = 1
        for i in range(4):
            vol *= self.basis[i][i]
        return Fraction(vol, self.denom ** 4)

    def index_in(self, other):
        """Index [other : self] for self contained in other."""
        return self.covolume / other.covolume

    @cached_property
    def gram(self):
        """The matrix trd(b_k * conj(b_l)) over the basis."""
        pair = self.algebra.trace_pairing
        d2 = self.denom * self.denom
        return tuple(tuple(Fraction(pair(r, s)) / d2 for s in self.basis) for r in self.basis)

    @cached_property
    def norm_form(self):
        """GramForm with value nrd on basis coordinates."""
        return GramForm.from_rational(self.gram, Fraction(1, 2))

    def elements_of_norm(self, n):
        """
        Elements x of the lattice with nrd(x) = n, one per sign pair.

        Raises:
            DefinitenessError: the algebra is indefinite
        """
        form = self.norm_form
        target = Fraction(n) / form.scale
        if target < 0 or target.denominator != 1:
            return []
        return [self.element_from_coords(c) for c in short_vectors(form, target.numerator)]

    @cached_property
    def reduced_norm(self):
        """Positive generator of the fractional ideal spanned by nrd(x), x in the lattice."""
        values = [self.algebra.norm_coords(v) for v in self.vectors]
        g = self.gram
        values += [g[k][l] for k in range(4) for l in range(k + 1, 4)]
        return rational_gcd(values)

    def is_order(self):
        if not self.contains_coords(ONE):
            return False
        mult = self.algebra.multiply_coords
        return all(self.contains_coords(mult(u, v)) for u in self.vectors for v in self.vectors)


def _is_integral(lattice):
    """Every element has integral trace and norm (checked on basis pairs)."""
    algebra = lattice.algebra
    vectors = lattice.vectors
    for u in vectors:
        if (2 * u[0]).denominator != 1 or algebra.norm_coords(u).denominator != 1:
            return False
    mult = algebra.multiply_coords
    return all((2 * mult(u, v)[0]).denominator == 1 for u in vectors for v in vectors)


def _saturate(lattice, limit):
    """Smallest ring containing the lattice, or None if it is not integral within `limit` steps."""
    for _ in range(limit):
        if not _is_integral(lattice):
            return None
        grown = lattice + lattice.product(lattice)
        if grown == lattice:
            return lattice
        lattice = grown
    return None


def _idealizer(lattice, side):
    """
    The order {x : x L in L} (side 'left') or {x : L x in L} (side 'right').

    Solved as the dual of the lattice spanned by the linear conditions, so no
    basis element has to be invertible.
    """
    algebra = lattice.algebra
    mult = algebra.multiply_coords
    units = [tuple(1 if k == m else 0 for k in range(4)) for m in range(4)]
    columns = []
    for b in lattice.vectors:
        if side == 'left':
            images = [lattice.coordinates(mult(e, b)) for e in units]
        else:
            images = [lattice.coordinates(mult(b, e)) for e in units]
        for j in range(4):
            columns.append(tuple(images[m][j] for m in range(4)))
    return QuatLattice.from_rows(algebra, columns).dual()


@dataclass(frozen=True)
class UnitGroup:
    """The finite group of reduced-norm-one elements of a definite order."""

    elements: tuple

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def is_closed(self):
        members = set(self.elements)
        return all(x * y in members for x in self.elements for y in self.elements)


@dataclass(frozen=True)
class QuatOrder:
    """An order of maximal rank, identified by its canonical lattice."""

    lattice: QuatLattice

    @classmethod
    def standard(cls, algebra):
        """Z<1, alpha i, beta j, alpha beta ij>, with alpha, beta clearing the denominators of a, b."""
        alpha, beta = algebra.a.denominator, algebra.b.denominator
        rows = [(1, 0, 0, 0), (0, alpha, 0, 0), (0, 0, beta, 0), (0, 0, 0, alpha * beta)]
        return cls(QuatLattice.from_rows(algebra, rows))

    @property
    def algebra(self):
        return self.lattice.algebra

    @property
    def key(self):
        return self.lattice.key

    @cached_property
    def reduced_discriminant(self):
        det = abs(determinant(self.lattice.gram))
        d = isqrt(det.numerator)
        if det.denominator != 1 or d * d != det:
            raise NotIntegralError("lattice is not an order")
        return d

    @cached_property
    def units(self):
        return unit_group(self)

    @property
    def unit_count(self):
        return self.units.order

    def __contains__(self, x):
        return x in self.lattice

    def contains_order(self, other):
        return self.lattice.contains_lattice(other.lattice)

    def conjugate(self, x):
        """The order x O x^-1."""
        return QuatOrder(self.lattice.conjugate_by(x))

    def intersection(self, other):
        return QuatOrder(self.lattice.intersection(other.lattice))

    def is_maximal_at(self, p):
        target = 1 if p in self.algebra.ramified_primes else 0
        return valuation(self.reduced_discriminant, p) <= target


@dataclass(frozen=True)
class QuatIdeal:
    """A lattice together with its left and right orders."""

    lattice: QuatLattice
    left_order: QuatOrder
    right_order: QuatOrder

    @classmethod
    def from_lattice(cls, lattice):
        return cls(lattice, QuatOrder(_idealizer(lattice, 'left')), QuatOrder(_idealizer(lattice, 'right')))

    @property
    def reduced_norm(self):
        return self.lattice.reduced_norm

    def product(self, other):
        """I * J, for right_order(I) = left_order(J)."""
        return QuatIdeal(self.lattice.product(other.lattice), self.left_order, other.right_order)


def order_from_generators(gens, limit=None):
    """
    Smallest order containing the generators.

    Args:
        gens: QuatElements of one algebra
        limit: Saturation guard (defaults to the configured limit)

    Returns:
        QuatOrder

    Raises:
        RankError: 1 and the generators do not span a rank 4 lattice
        NotIntegralError: the generated ring contains non-integral elements
    """
    gens = list(gens)
    if not gens:
        raise RankError("no generators")
    one = gens[0].algebra.one()
    letters = [one] + gens
    words = letters + [x * y for x in letters for y in letters]
    lattice = QuatLattice.from_elements(words)
    if limit is None:
        limit = get_limits().saturation_limit
    ring = _saturate(lattice, limit)
    if ring is None:
        raise NotIntegralError("generators do not lie in an order")
    return QuatOrder(ring)


def reduced_discriminant(order):
    return order.reduced_discriminant


def p_radical(order, p):
    """
    The two-sided ideal of O whose quotient is the Jacobson radical of O/pO.

    For odd p this is the kernel of the trace form modulo p; at 2 the kernel
    is cut down further to the elements of even reduced norm.
    """
    lattice = order.lattice
    kernel = lattice.intersection(lattice.trace_dual().scale(p))
    if p != 2:
        return kernel
    vectors = kernel.vectors
    odd = [k for k, v in enumerate(vectors) if kernel.algebra.norm_coords(v) % 2]
    if not odd:
        return kernel
    f = odd[0]
    rows = []
    for k, v in enumerate(vectors):
        if k == f:
            rows.append(tuple(2 * e for e in v))
        elif k in odd:
            rows.append(tuple(e + g for e, g in zip(v, vectors[f])))
        else:
            rows.append(v)
    return QuatLattice.from_rows(kernel.algebra, rows)


def _hereditary_step(order, radical, p):
    """Leave an order with O/J = F_p x F_p through the left order of a maximal two-sided ideal."""
    algebra = order.algebra
    scalars = QuatLattice.from_rows(algebra, radical.vectors + (ONE,))
    for z in order.lattice.elements():
        if z in scalars:
            continue
        t, n = int(z.trd()), int(z.nrd())
        roots = [lam for lam in range(p) if (lam * lam - t * lam + n) % p == 0]
        if len(roots) < 2:
            continue
        for lam in roots:
            ideal = radical + order.lattice.right_multiply(z - lam)
            candidate = QuatOrder(_idealizer(ideal, 'left'))
            if candidate != order and candidate.contains_order(order):
                return candidate
    return None


def _exhaustive_step(order, p, limit):
    """Adjoin some x in (1/p)O with integral trace and norm whose ring stays integral."""
    algebra = order.algebra
    vectors = order.lattice.vectors
    for digits in itertools.product(range(p), repeat=4):
        if not any(digits):
            continue
        x = tuple(sum(Fraction(digits[k], p) * vectors[k][m] for k in range(4)) for m in range(4))
        if (2 * x[0]).denominator != 1 or algebra.norm_coords(x).denominator != 1:
            continue
        ring = _saturate(QuatLattice.from_rows(algebra, list(vectors) + [x]), limit)
        if ring is not None:
            return QuatOrder(ring)
    return None


def p_maximalize(order, p, limit=None):
    """
    Enlarge an order until it is maximal at p.

    Each round tries the left idealizer of the p-radical, then the hereditary
    split, then an exhaustive search over (1/p)O. Nothing changes away from p.

    Args:
        order: QuatOrder
        p: Prime
        limit: Iteration guard (defaults to the configured saturation limit)

    Returns:
        QuatOrder containing `order` with v_p(disc) = 1 if p is ramified, else 0

    Raises:
        MaximalizationError: the guard tripped or no step made progress
    """
    if limit is None:
        limit = get_limits().saturation_limit
    for _ in range(limit):
        if order.is_maximal_at(p):
            return order
        radical = p_radical(order, p)
        bigger = QuatOrder(_idealizer(radical, 'left'))
        if bigger == order:
            bigger = _hereditary_step(order, radical, p)
        if bigger is None:
            bigger = _exhaustive_step(order, p, limit)
        if bigger is None:
            raise MaximalizationError(f"no superorder found at {p}")
        order = bigger
    raise MaximalizationError(f"not maximal at {p} after {limit} rounds")


def maximal_order(algebra):
    """A maximal order of the algebra, grown from the standard order."""
    order = QuatOrder.standard(algebra)
    for q in primefactors(order.reduced_discriminant):
        order = p_maximalize(order, q)
    if order.reduced_discriminant != algebra.discriminant:
        raise MaximalizationError(
            f"maximal order has discriminant {order.reduced_discriminant}, expected {algebra.discriminant}")
    return order


def unit_group(order):
    """
    All x in O with nrd(x) = 1.

    Raises:
        DefinitenessError: the algebra is indefinite
    """
    if not order.algebra.is_definite:
        raise DefinitenessError(f"{order.algebra} is indefinite")
    found = []
    for x in order.lattice.elements_of_norm(1):
        found.extend((x, -x))
    return UnitGroup(tuple(sorted(found, key=lambda x: x.coords)))


def left_ideals_norm_p(order, p):
    """
    The p+1 left ideals of reduced norm p of an order maximal at p.

    Ideals are listed in the order of the lines of P^1(F_p).

    Raises:
        RamificationError: p is ramified
        SplittingError: the order is not maximal at p
    """
    try:
        from .bt_tree import line_ideal, lines, split_residue
    except ImportError:
        from bt_tree import line_ideal, lines, split_residue
    if p in order.algebra.ramified_primes:
        raise RamificationError(f"{p} is ramified in {order.algebra}")
    splitting = split_residue(order, p)
    return [line_ideal(splitting, w) for w in lines(p)]


def eichler_order(order, level):
    """
    Eichler order of the given level inside a maximal order.

    Args:
        order: Maximal QuatOrder
        level: Odd squarefree positive integer coprime to the discriminant

    Raises:
        LevelError: the level is not admissible
    """
    if level < 1 or level % 2 == 0:
        raise LevelError(f"level {level} is not odd and positive")
    factors = factorint(level)
    if any(e > 1 for e in factors.values()):
        raise LevelError(f"level {level} is not squarefree")
    if gcd(level, order.reduced_discriminant) != 1:
        raise LevelError(f"level {level} is not coprime to {order.reduced_discriminant}")
    result = order
    for q in sorted(factors):
        neighbor = left_ideals_norm_p(order, q)[0].right_order
        result = result.intersection(neighbor)
    return result


def right_order(ideal):
    lattice = getattr(ideal, 'lattice', ideal)
    return QuatOrder(_idealizer(lattice, 'right'))


def left_order(ideal):
    lattice = getattr(ideal, 'lattice', ideal)
    return QuatOrder(_idealizer(lattice, 'left'))


def connecting_ideal(first, second):
    """
    The lattice first * second, rescaled to be integral and primitive in `first`.

    Its left order is `first` and its right order is `second`.
    """
    product = first.lattice.product(second.lattice)
    coords = [c for v in product.vectors for c in first.lattice.coordinates(v)]
    g = rational_gcd(coords)
    return QuatIdeal(product.scale(1 / g), first, second)


def is_principal(ideal):
    """
    A generator x with left_order(I) * x = I, or None.

    Candidates are the elements of I whose norm equals nrd(I); each is
    confirmed by lattice equality.
    """
    source = ideal.left_order.lattice
    for x in ideal.lattice.elements_of_norm(ideal.reduced_norm):
        if source.right_multiply(x) == ideal.lattice:
            return x
    return None


def _trace_free_form(order):
    """
    Basis rows and norm form of the rank-3 lattice {x - conj(x) : x in O}.

    Rows are integer coordinates on (i, j, ij) over the order's denominator.
    """
    rows = hnf([tuple(2 * e for e in row[1:]) for row in order.lattice.basis], 3)
    pair = order.algebra.trace_pairing
    d2 = 2 * order.lattice.denom ** 2
    gram = [[Fraction(pair((0,) + r, (0,) + s)) / d2 for s in rows] for r in rows]
    return rows, GramForm.from_rational(gram)


def embed_quadratic(order, t, n):
    """
    An element of O with trace t and norm n, or None.

    For x in O the element w = 2x - t = x - conj(x) lies in the rank-3
    lattice of trace-free differences with nrd(w) = 4n - t^2, and conversely
    (t + w)/2 is a candidate whenever it lies in O. The search walks that
    shell lazily and stops at the first candidate in O.

    Raises:
        PreconditionError: x^2 - t x + n has nonnegative discriminant
    """
    if t * t - 4 * n >= 0:
        raise PreconditionError(f"x^2 - {t}x + {n} does not define an imaginary quadratic order")
    rows, form = _trace_free_form(order)
    target = Fraction(4 * n - t * t) / form.scale
    if target.denominator != 1:
        return None
    denom = 2 * order.lattice.denom
    for c in iter_short_vectors(form, target.numerator):
        w = [sum(c[k] * rows[k][m] for k in range(3)) for m in range(3)]
        x = QuatElement(order.algebra, (Fraction(t, 2),) + tuple(Fraction(e, denom) for e in w))
        if x in order.lattice:
            return x
    return None


def count_maximal_superorders(order, radius=None):
    """
    Number of maximal orders containing O.

    Ramified primes contribute a factor 1; every other prime dividing the
    discriminant contributes the size of the containment locus in its tree.
    O has full rank, so every such locus is finite: the search radius starts
    at `radius` (default 1) and doubles until the locus is certified.

    Raises:
        SearchExhaustedError: a locus is still uncertified at the configured superorder radius
    """
    try:
        from .classifying_graph import containment_locus
    except ImportError:
        from classifying_graph import containment_locus
    start = 1 if radius is None else radius
    limit = max(get_limits().superorder_radius, start)
    ramified = order.algebra.ramified_primes
    gens = order.lattice.elements()
    total = 1
    for q in primefactors(order.reduced_discriminant):
        if q in ramified:
            continue
        base = p_maximalize(order, q)
        r = start
        report = containment_locus(gens, base, q, r)
        while not report.boundary_certified:
            if r >= limit:
                raise SearchExhaustedError(f"locus at {q} not certified within radius {limit}")
            r = min(max(2 * r, 1), limit)
            report = containment_locus(gens, base, q, r)
        total *= len(report.vertices)
    return total
