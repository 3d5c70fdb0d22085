#!/usr/bin/env python3
"""
Quaternion Algebra
The algebra (a, b / Q) with i^2 = a, j^2 = b, ij = -ji, its elements in the
basis (1, i, j, ij), and its ramification data.
"""

import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from sympy import isprime, primefactors

try:
    from .errors import AlgebraMismatchError, PreconditionError, RamificationError, SearchExhaustedError
    from .exact_arith import INFINITY, hilbert_symbol
    from .settings import get_limits
except ImportError:
    sys.path.insert(0, os.path.dirname(__file__))
    from errors import AlgebraMismatchError, PreconditionError, RamificationError, SearchExhaustedError
    from exact_arith import INFINITY, hilbert_symbol
    from settings import get_limits


def _narrow(x):
    """Integers stay Python ints so that integral coordinates multiply without Fraction overhead."""
    return x.numerator if x.denominator == 1 else x


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The quaternion algebra (a, b / Q)."""

    a: Fraction
    b: Fraction
    _a: object = field(init=False, repr=False, compare=False)
    _b: object = field(init=False, repr=False, compare=False)
    _ab: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a, b = Fraction(self.a), Fraction(self.b)
        if a == 0 or b == 0:
            raise PreconditionError("quaternion algebra needs nonzero a and b")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, '_a', _narrow(a))
        object.__setattr__(self, '_b', _narrow(b))
        object.__setattr__(self, '_ab', _narrow(a * b))

    def __str__(self):
        return f"({self.a}, {self.b} / Q)"

    @cached_property
    def ramified_places(self):
        """Places where the Hilbert symbol (a, b) is -1, as a frozenset of primes and possibly INFINITY."""
        candidates = {2}
        for x in (self.a, self.b):
            candidates.update(primefactors(abs(x.numerator)))
            candidates.update(primefactors(x.denominator))
        places = {q for q in candidates if hilbert_symbol(self.a, self.b, q) == -1}
        if hilbert_symbol(self.a, self.b, INFINITY) == -1:
            places.add(INFINITY)
        return frozenset(places)

    @property
    def ramified_primes(self):
        """Finite ramified primes in increasing order."""
        return tuple(sorted(q for q in self.ramified_places if q != INFINITY))

    @property
    def discriminant(self):
        """Product of the finite ramified primes."""
        d = 1
        for q in self.ramified_primes:
            d *= q
        return d

    @property
    def is_definite(self):
        return INFINITY in self.ramified_places

    def element(self, *coords):
        return QuatElement(self, tuple(coords))

    def one(self):
        return QuatElement(self, (1, 0, 0, 0))

    def basis(self):
        """The standard basis 1, i, j, ij."""
        return [QuatElement(self, tuple(1 if k == m else 0 for k in range(4))) for m in range(4)]

    def multiply_coords(self, x, y):
        """Product of two coordinate 4-tuples (ints or Fractions)."""
        a, b, ab = self._a, self._b, self._ab
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - ab * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def norm_coords(self, x):
        x0, x1, x2, x3 = x
        return x0 * x0 - self._a * x1 * x1 - self._b * x2 * x2 + self._ab * x3 * x3

    def trace_pairing(self, x, y):
        """trd(x * conj(y)) on coordinate tuples."""
        return 2 * (x[0] * y[0] - self._a * x[1] * y[1] - self._b * x[2] * y[2] + self._ab * x[3] * y[3])


@dataclass(frozen=True)
class QuatElement:
    """An element of a quaternion algebra, with rational coordinates in the basis (1, i, j, ij)."""

    algebra: QuaternionAlgebra
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 4:
            raise PreconditionError("quaternion needs 4 coordinates")
        object.__setattr__(self, 'coords', tuple(Fraction(c) for c in self.coords))

    def __str__(self):
        names = ('', 'i', 'j', 'ij')
        terms = [f"{c}{n}" if n else f"{c}" for c, n in zip(self.coords, names) if c != 0]
        return ' + '.join(terms) if terms else '0'

    def _check(self, other):
        if self.algebra != other.algebra:
            raise AlgebraMismatchError(f"{self.algebra} vs {other.algebra}")

    def __add__(self, other):
        if not isinstance(other, QuatElement):
            other = QuatElement(self.algebra, (other, 0, 0, 0))
        self._check(other)
        return QuatElement(self.algebra, tuple(x + y for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-x for x in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QuatElement):
            other = Fraction(other)
            return QuatElement(self.algebra, tuple(x * other for x in self.coords))
        self._check(other)
        return QuatElement(self.algebra, self.algebra.multiply_coords(self.coords, other.coords))

    def __rmul__(self, other):
        other = Fraction(other)
        return QuatElement(self.algebra, tuple(other * x for x in self.coords))

    def __truediv__(self, scalar):
        scalar = Fraction(scalar)
        return QuatElement(self.algebra, tuple(x / scalar for x in self.coords))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.algebra.one()
        for _ in range(n):
            result = result * self
        return result

    def trd(self):
        return 2 * self.coords[0]

    def nrd(self):
        return self.algebra.norm_coords(self.coords)

    def conj(self):
        c = self.coords
        return QuatElement(self.algebra, (c[0], -c[1], -c[2], -c[3]))

    def inverse(self):
        n = self.nrd()
        if n == 0:
            raise PreconditionError(f"{self} is not invertible")
        return self.conj() / n

    @property
    def is_scalar(self):
        return self.coords[1] == self.coords[2] == self.coords[3] == 0

    def minimal_polynomial(self):
        """Coefficients (trd, nrd) of x^2 - trd(x) x + nrd(x)."""
        return self.trd(), self.nrd()


def mul(x, y):
    return x * y


def trd(x):
    return x.trd()


def nrd(x):
    return x.nrd()


def conj(x):
    return x.conj()


def ramified_places(algebra):
    return algebra.ramified_places


def is_definite(algebra):
    return algebra.is_definite


def algebra_for_ramification(p, bound=None):
    """
    Find a definite algebra ramified exactly at p and infinity.

    Pairs (a, b) of negative integers are tried in increasing max(|a|, |b|);
    the first hit is returned, so the model is deterministic but arbitrary.

    Args:
        p: Odd prime
        bound: Largest |a|, |b| tried (defaults to the configured search bound)

    Returns:
        QuaternionAlgebra with ramified_places == {p, INFINITY}

    Raises:
        RamificationError: p is not an odd prime
        SearchExhaustedError: no pair within the bound
    """
    if p == 2 or not isprime(p):
        raise RamificationError(f"{p} is not an odd prime")
    if bound is None:
        bound = get_limits().algebra_search_bound
    target = frozenset({p, INFINITY})

    for big in range(1, bound + 1):
        for small in range(1, big + 1):
            pairs = [(-small, -big)] if small == big else [(-small, -big), (-big, -small)]
            for a, b in pairs:
                if hilbert_symbol(a, b, p) != -1:
                    continue
                algebra = QuaternionAlgebra(a, b)
                if algebra.ramified_places == target:
                    return algebra

    raise SearchExhaustedError(f"no algebra ramified at {{{p}, inf}} with |a|, |b| <= {bound}")
