#!/usr/bin/env python3
"""
Exact Arithmetic
Canonical integer lattice bases, Kronecker and Hilbert symbols, and
lattice-point enumeration for small positive definite forms. Nothing here
uses floating point.
"""

import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm

from sympy import Matrix, Rational, jacobi_symbol, legendre_symbol, multiplicity, oo

try:
    from .errors import DefinitenessError, PreconditionError, RankError
except ImportError:
    sys.path.insert(0, os.path.dirname(__file__))
    from errors import DefinitenessError, PreconditionError, RankError


INFINITY = oo


def xgcd(a, b):
    """
    Extended Euclid.

    Returns:
        (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g
    """
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def hnf(rows, cols=None):
    """
    Hermite normal form of the row span of an integer matrix.

    The result is upper triangular with positive pivots and every entry above
    a pivot reduced into [0, pivot). Two bases span the same lattice exactly
    when their HNFs are equal.

    Args:
        rows: Iterable of integer rows (at least `cols` independent ones)
        cols: Number of columns; inferred from the first row if omitted

    Returns:
        Tuple of `cols` integer row tuples

    Raises:
        RankError: the rows do not span a lattice of full rank
    """
    pending = [[int(e) for e in row] for row in rows]
    if cols is None:
        if not pending:
            raise RankError("empty basis")
        cols = len(pending[0])
    pending = [row for row in pending if any(row)]

    result = []
    for c in range(cols):
        pivot = None
        rest = []
        for row in pending:
            if row[c] == 0:
                rest.append(row)
                continue
            if pivot is None:
                pivot = row
                continue
            g, x, y = xgcd(pivot[c], row[c])
            u, v = pivot[c] // g, row[c] // g
            combined = [x * p + y * q for p, q in zip(pivot, row)]
            eliminated = [u * q - v * p for p, q in zip(pivot, row)]
            pivot = combined
            if any(eliminated):
                rest.append(eliminated)
        if pivot is None:
            raise RankError(f"rank deficient at column {c}")
        if pivot[c] < 0:
            pivot = [-e for e in pivot]
        result.append(pivot)
        pending = rest

    for i in range(cols):
        for k in range(i):
            q = result[k][i] // result[i][i]
            if q:
                result[k] = [a - q * b for a, b in zip(result[k], result[i])]
    return tuple(tuple(row) for row in result)


def triangular_solve(basis, vector):
    """Coordinates c (Fractions) with c * basis = vector, for an upper triangular basis."""
    coords = []
    for j in range(len(basis)):
        s = Fraction(vector[j])
        for i in range(j):
            s -= coords[i] * basis[i][j]
        coords.append(s / basis[j][j])
    return coords


def triangular_inverse(basis):
    """Rows of the inverse of an upper triangular matrix."""
    n = len(basis)
    return [triangular_solve(basis, [1 if j == k else 0 for j in range(n)]) for k in range(n)]


def determinant(matrix):
    """Exact determinant of a square matrix of integers or Fractions."""
    det = Matrix([[Rational(e.numerator, e.denominator) for e in map(Fraction, row)] for row in matrix]).det()
    return Fraction(int(det.p), int(det.q))


def rational_gcd(values):
    """Positive generator of the fractional ideal spanned by the given rationals."""
    values = [Fraction(v) for v in values if v != 0]
    if not values:
        return Fraction(0)
    num = 0
    den = 1
    for v in values:
        num = gcd(num, v.numerator)
        den = lcm(den, v.denominator)
    return Fraction(num, den)


def valuation(x, p):
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise PreconditionError("valuation of zero")
    return multiplicity(p, abs(x.numerator)) - multiplicity(p, x.denominator)


def kronecker(a, n):
    """
    Kronecker symbol (a|n).

    Args:
        a: Any integer
        n: Any integer

    Returns:
        -1, 0 or 1
    """
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    twos = multiplicity(2, n)
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 and a % 8 in (3, 5):
            result = -result
        n >>= twos
    if n == 1:
        return result
    return result * jacobi_symbol(a % n, n)


def _square_class(x, p):
    """Split a nonzero rational as p^alpha * u with alpha in {0, 1} and u an integer unit at p."""
    x = Fraction(x)
    n = x.numerator * x.denominator
    v = multiplicity(p, abs(n))
    return v % 2, n // p ** v


# residues mod 32 of squares, mapped to the parities of their roots
_SQUARES_MOD_32 = {}
for _z in range(32):
    _SQUARES_MOD_32.setdefault(_z * _z % 32, set()).add(_z % 2)


@lru_cache(maxsize=None)
def _isotropic_at_two(a, b):
    """Primitive solution of z^2 = a x^2 + b y^2 modulo 32; a, b taken mod 32."""
    for x in range(32):
        for y in range(32):
            roots = _SQUARES_MOD_32.get((a * x * x + b * y * y) % 32)
            if roots is None:
                continue
            if x % 2 or y % 2 or 1 in roots:
                return True
    return False


def hilbert_symbol(a, b, place):
    """
    Hilbert symbol (a, b) at a prime or at INFINITY.

    Odd primes use the valuation and unit formula; the prime 2 is decided by an
    exhaustive search for a primitive solution modulo 32, which is enough for
    Hensel lifting once a and b are reduced to 2^alpha * unit with alpha <= 1.

    Args:
        a: Nonzero rational
        b: Nonzero rational
        place: A prime number or INFINITY

    Returns:
        1 if z^2 = a x^2 + b y^2 has a nontrivial solution over the completion, else -1
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise PreconditionError("Hilbert symbol of zero")
    if place == INFINITY:
        return -1 if a < 0 and b < 0 else 1

    p = int(place)
    alpha, u = _square_class(a, p)
    beta, v = _square_class(b, p)
    if p == 2:
        return 1 if _isotropic_at_two((2 ** alpha * u) % 32, (2 ** beta * v) % 32) else -1

    sign = -1 if alpha * beta * ((p - 1) // 2) % 2 else 1
    return sign * legendre_symbol(u % p, p) ** beta * legendre_symbol(v % p, p) ** alpha


@dataclass(frozen=True)
class GramForm:
    """
    Integral quadratic form v -> v.M.v^T together with a rational scale.

    The value represented by the form is scale * v.M.v^T; enumeration targets
    are stated in units of the integer matrix.
    """

    dim: int
    matrix: tuple
    scale: Fraction = Fraction(1)

    @classmethod
    def from_rational(cls, matrix, scale=Fraction(1)):
        """Clear denominators of a symmetric rational matrix, folding them into the scale."""
        rows = [[Fraction(e) for e in row] for row in matrix]
        denom = 1
        for row in rows:
            for e in row:
                denom = lcm(denom, e.denominator)
        integral = tuple(tuple(int(e * denom) for e in row) for row in rows)
        for i in range(len(rows)):
            for j in range(i):
                if integral[i][j] != integral[j][i]:
                    raise PreconditionError("Gram matrix is not symmetric")
        return cls(len(rows), integral, Fraction(scale) / denom)

    def evaluate(self, v):
        """Integer value v.M.v^T."""
        return sum(self.matrix[i][j] * v[i] * v[j] for i in range(self.dim) for j in range(self.dim))

    def value(self, v):
        return self.scale * self.evaluate(v)

    def cholesky(self):
        """
        Rational Cholesky decomposition Q(v) = sum_i q_i (v_i + sum_{j>i} mu_ij v_j)^2.

        Returns:
            (q, mu) with q the list of diagonal coefficients and mu upper triangular

        Raises:
            DefinitenessError: a pivot is not positive
        """
        n = self.dim
        m = [[Fraction(e) for e in row] for row in self.matrix]
        for i in range(n):
            if m[i][i] <= 0:
                raise DefinitenessError("form is not positive definite")
            for j in range(i + 1, n):
                m[j][i] = m[i][j]
                m[i][j] = m[i][j] / m[i][i]
            for k in range(i + 1, n):
                for l in range(k, n):
                    m[k][l] -= m[k][i] * m[i][l]
        q = [m[i][i] for i in range(n)]
        mu = [[m[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
        return q, mu

    def is_positive_definite(self):
        try:
            self.cholesky()
        except DefinitenessError:
            return False
        return True


def _integer_window(center, radius_sq):
    """All integers x with (x - center)^2 <= radius_sq, for rational center and radius_sq >= 0."""
    s = isqrt(radius_sq.numerator // radius_sq.denominator) + 1
    lo = (center - s).__floor__()
    hi = (center + s).__ceil__()
    return [x for x in range(lo, hi + 1) if (x - center) ** 2 <= radius_sq]


def iter_short_vectors(g, target):
    """
    Lazily yield the integer vectors v with v.M.v^T = target, one per sign pair.

    Same enumeration and sign convention as short_vectors, in search order,
    so callers looking for a single vector can stop at the first hit.
    """
    q, mu = g.cholesky()
    n = g.dim
    target = Fraction(target)
    if target < 0:
        return
    coords = [0] * n

    def descend(i, remaining):
        center = -sum((mu[i][j] * coords[j] for j in range(i + 1, n)), Fraction(0))
        for x in _integer_window(center, remaining / q[i]):
            coords[i] = x
            left = remaining - q[i] * (x - center) ** 2
            if i > 0:
                yield from descend(i - 1, left)
            elif left == 0:
                lead = next((e for e in coords if e != 0), 0)
                if lead > 0 or (lead == 0 and target == 0):
                    yield tuple(coords)
        coords[i] = 0

    yield from descend(n - 1, target)


def short_vectors(g, target):
    """
    All integer vectors v with v.M.v^T = target, one per sign pair.

    Fincke-Pohst enumeration over an exact rational Cholesky decomposition.
    The kept representative of each pair has its first nonzero coordinate
    positive; the zero vector is returned for target 0.

    Args:
        g: Positive definite GramForm
        target: Nonnegative integer in units of g.matrix

    Returns:
        Sorted list of coordinate tuples

    Raises:
        DefinitenessError: g is not positive definite
    """
    return sorted(iter_short_vectors(g, target))
