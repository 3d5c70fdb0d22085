#!/usr/bin/env python3
"""
Unit tests for lattices, orders and ideals.
"""

import os
import sys
from fractions import Fraction
from unittest.mock import patch

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from src.errors import (LevelError, NotIntegralError, PreconditionError, RamificationError, RankError,
                        SearchExhaustedError)
from src.orders_ideals import (
    QuatIdeal,
    QuatLattice,
    QuatOrder,
    connecting_ideal,
    count_maximal_superorders,
    eichler_order,
    embed_quadratic,
    is_principal,
    left_ideals_norm_p,
    left_order,
    maximal_order,
    order_from_generators,
    p_maximalize,
    reduced_discriminant,
    right_order,
    unit_group,
)
from src.quat_algebra import QuaternionAlgebra
from src.settings import get_limits


def is_closed(order):
    """All pairwise basis products lie in the lattice."""
    lattice = order.lattice
    return lattice.is_order() and all(
        x * y in lattice for x in lattice.elements() for y in lattice.elements())


class TestQuatLattice:
    """Test suite for QuatLattice."""

    def setup_method(self):
        """Set up test fixtures before each test method."""
        self.algebra = QuaternionAlgebra(-1, -1)
        self.one, self.i, self.j, self.k = self.algebra.basis()

    def test_canonical_form(self):
        """Test that spanning sets of one lattice give equal lattices."""
        first = QuatLattice.from_elements([self.one, self.i, self.j, self.k])
        second = QuatLattice.from_elements([self.one + self.i, self.i, self.j - self.k, self.k, 2 * self.j])
        assert first == second
        assert first.key == (1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1)

    def test_minimal_denominator(self):
        """Test that the denominator is reduced."""
        half = QuatLattice.from_rows(self.algebra, [(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2)], 4)
        assert half.denom == 2
        assert half.basis == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))

    def test_membership(self):
        """Test element and scalar membership."""
        lattice = QuatLattice.from_elements([self.one, self.i, self.j, self.k])
        assert self.i + self.j in lattice
        assert 3 in lattice
        assert Fraction(1, 2) not in lattice
        assert QuaternionAlgebra(-3, -3).one() not in lattice

    def test_index_and_intersection(self):
        """Test index, sum and intersection."""
        full = QuatLattice.from_elements([self.one, self.i, self.j, self.k])
        even = full.scale(2)
        assert even.index_in(full) == 16
        assert full.intersection(even) == even
        assert full + even == full

    def test_rank_error(self):
        """Test that fewer than four independent rows are rejected."""
        with pytest.raises(RankError):
            QuatLattice.from_elements([self.one, self.i, self.j])

    def test_dual(self):
        """Test that the dual of a scaled lattice is the inverse scaling."""
        full = QuatLattice.from_elements([self.one, self.i, self.j, self.k])
        assert full.scale(3).dual() == full.scale(Fraction(1, 3))


class TestOrders:
    """Test suite for orders and maximalization."""

    def setup_method(self):
        """Set up test fixtures before each test method."""
        self.algebra = QuaternionAlgebra(-1, -1)
        self.one, self.i, self.j, self.k = self.algebra.basis()
        self.lipschitz = order_from_generators([self.i, self.j])
        self.hurwitz_gen = (self.one + self.i + self.j + self.k) / 2

    def test_lipschitz(self):
        """Test the order generated by i and j."""
        assert reduced_discriminant(self.lipschitz) == 4
        assert self.lipschitz == QuatOrder.standard(self.algebra)
        assert is_closed(self.lipschitz)

    def test_hurwitz(self):
        """Test that adjoining the Hurwitz generator halves the discriminant."""
        hurwitz = order_from_generators([self.i, self.j, self.hurwitz_gen])
        assert reduced_discriminant(hurwitz) == 2
        assert hurwitz.unit_count == 24
        assert hurwitz.units.is_closed()

    def test_p_maximalize_lipschitz(self):
        """Test that maximalizing the Lipschitz order at 2 gives the Hurwitz order."""
        hurwitz = order_from_generators([self.i, self.j, self.hurwitz_gen])
        assert p_maximalize(self.lipschitz, 2) == hurwitz

    def test_p_maximalize_fixpoint(self):
        """Test that a maximal order is left unchanged."""
        order = maximal_order(self.algebra)
        assert p_maximalize(order, 2) == order
        assert p_maximalize(order, 3) == order

    def test_p_maximalize_away_from_three(self):
        """Test Z[eta, j] in (-3,-3) becomes maximal at 2."""
        algebra = QuaternionAlgebra(-3, -3)
        _, i, j, _ = algebra.basis()
        order = order_from_generators([(i - 1) / 2, j])
        bigger = p_maximalize(order, 2)
        assert bigger.contains_order(order)
        assert reduced_discriminant(bigger) % 2 == 1

    @pytest.mark.parametrize('a, b, disc', [(-1, -1, 2), (-3, -3, 3), (-7, -1, 7), (-2, -5, 5), (-7, -13, 13)])
    def test_maximal_order(self, a, b, disc):
        """Test the discriminant of maximal orders."""
        order = maximal_order(QuaternionAlgebra(a, b))
        assert reduced_discriminant(order) == disc
        assert is_closed(order)

    def test_generators_rank_error(self):
        """Test that 1 alone does not span an order."""
        with pytest.raises(RankError):
            order_from_generators([self.one])

    def test_generators_not_integral(self):
        """Test that a non-integral generator is rejected."""
        with pytest.raises(NotIntegralError):
            order_from_generators([self.i / 2, self.j])

    def test_is_maximal_at(self):
        """Test local maximality."""
        assert not self.lipschitz.is_maximal_at(2)
        assert self.lipschitz.is_maximal_at(3)


class TestUnits:
    """Test suite for unit groups."""

    @pytest.mark.parametrize('a, b, count', [(-1, -1, 24), (-3, -3, 12), (-7, -1, 4), (-2, -5, 6), (-7, -13, 2)])
    def test_unit_count(self, a, b, count):
        """Test unit counts of maximal orders of class number one."""
        units = unit_group(maximal_order(QuaternionAlgebra(a, b)))
        assert units.order == count
        assert units.is_closed()
        assert all(x.nrd() == 1 for x in units.elements)

    def test_contains_plus_minus_one(self):
        """Test that +1 and -1 are units."""
        algebra = QuaternionAlgebra(-3, -3)
        units = unit_group(maximal_order(algebra))
        assert algebra.one() in units
        assert -algebra.one() in units

    def test_indefinite_rejected(self):
        """Test that an indefinite algebra has no finite unit group."""
        algebra = QuaternionAlgebra(-1, 3)
        with pytest.raises(PreconditionError):
            unit_group(QuatOrder.standard(algebra))


class TestIdeals:
    """Test suite for ideals, Eichler orders and embeddings."""

    def setup_method(self):
        """Set up test fixtures before each test method."""
        self.algebra = QuaternionAlgebra(-3, -3)
        self.order = maximal_order(self.algebra)

    def test_left_ideals_norm_two(self):
        """Test the three ideals of norm 2."""
        ideals = left_ideals_norm_p(self.order, 2)
        assert len(ideals) == 3
        assert len({ideal.lattice for ideal in ideals}) == 3
        for ideal in ideals:
            assert ideal.lattice.index_in(self.order.lattice) == 4
            assert ideal.reduced_norm == 2
            assert left_order(ideal) == self.order
            assert right_order(ideal) == ideal.right_order

    def test_ideals_at_ramified_prime(self):
        """Test that no splitting exists at a ramified prime."""
        with pytest.raises(RamificationError):
            left_ideals_norm_p(self.order, 3)

    def test_norm_two_ideals_principal(self):
        """Test that every norm 2 left ideal is principal."""
        for ideal in left_ideals_norm_p(self.order, 2):
            x = is_principal(ideal)
            assert x is not None
            assert x.nrd() == 2
            assert self.order.lattice.right_multiply(x) == ideal.lattice

    def test_connecting_ideal_self(self):
        """Test that the connecting ideal of an order with itself is the order."""
        ideal = connecting_ideal(self.order, self.order)
        assert ideal.lattice == self.order.lattice
        assert ideal.reduced_norm == 1
        assert is_principal(ideal).nrd() == 1

    def test_connecting_ideal_orders(self):
        """Test left and right orders of a connecting ideal."""
        neighbor = left_ideals_norm_p(self.order, 2)[1].right_order
        ideal = connecting_ideal(self.order, neighbor)
        assert left_order(ideal) == self.order
        assert right_order(ideal) == neighbor
        assert ideal.reduced_norm == 2

    def test_scaled_ideal_principal(self):
        """Test that a scalar multiple of the order is generated by a scaled unit."""
        lattice = self.order.lattice.scale(3)
        scaled = QuatIdeal(lattice, self.order, self.order)
        x = is_principal(scaled)
        assert x is not None
        assert x.nrd() == 9

    def test_eichler_order(self):
        """Test discriminants of Eichler orders."""
        assert eichler_order(self.order, 1) == self.order
        assert reduced_discriminant(eichler_order(self.order, 5)) == 15
        assert reduced_discriminant(eichler_order(self.order, 35)) == 105
        seven = maximal_order(QuaternionAlgebra(-7, -1))
        assert reduced_discriminant(eichler_order(seven, 3)) == 21

    @pytest.mark.parametrize('level', [2, 9, 3, 0])
    def test_eichler_bad_level(self, level):
        """Test that even, non-squarefree and non-coprime levels are rejected."""
        with pytest.raises(LevelError):
            eichler_order(self.order, level)

    def test_embed_cube_root(self):
        """Test that a cube root of unity is found where it exists."""
        x = embed_quadratic(self.order, -1, 1)
        assert x is not None
        assert x * x + x + 1 == self.algebra.element(0, 0, 0, 0)

    def test_embed_hurwitz(self):
        """Test embeddings into the Hurwitz order."""
        hurwitz = maximal_order(QuaternionAlgebra(-1, -1))
        omega = embed_quadratic(hurwitz, -1, 1)
        assert omega is not None and omega.trd() == -1 and omega.nrd() == 1
        root = embed_quadratic(hurwitz, 0, 1)
        assert root is not None
        assert root * root == -hurwitz.algebra.one()

    def test_embed_missing(self):
        """Test that no cube root of unity lies in the maximal order of disc 7."""
        assert embed_quadratic(maximal_order(QuaternionAlgebra(-7, -1)), -1, 1) is None

    def test_embed_real_quadratic_rejected(self):
        """Test that a nonnegative discriminant is rejected."""
        with pytest.raises(PreconditionError):
            embed_quadratic(self.order, 3, 2)

    def test_embed_deep_square_root(self):
        """Test that 8 sqrt(-3) is found in the maximal order of (-3,-3)."""
        x = embed_quadratic(self.order, 0, 192)
        assert x is not None
        assert x.trd() == 0 and x.nrd() == 192
        assert x in self.order.lattice
        assert x * x == -192 * self.algebra.one()

    @pytest.mark.parametrize('a, b', [(-3, -3), (-7, -1), (-1, -1)])
    @pytest.mark.parametrize('t, n', [(-1, 1), (0, 1), (0, 2), (1, 2), (0, 3), (-1, 3), (2, 3), (1, 5), (0, 7)])
    def test_embed_matches_norm_shell(self, a, b, t, n):
        """Test agreement with a search over every element of norm n."""
        order = maximal_order(QuaternionAlgebra(a, b))
        expected = any(y.trd() == t for x in order.lattice.elements_of_norm(n) for y in (x, -x))
        x = embed_quadratic(order, t, n)
        assert (x is not None) == expected
        if x is not None:
            assert (x.trd(), x.nrd()) == (t, n)
            assert x in order.lattice


class TestSuperorders:
    """Test suite for count_maximal_superorders."""

    def setup_method(self):
        """Set up test fixtures before each test method."""
        self.algebra = QuaternionAlgebra(-3, -3)
        _, self.i, self.j, _ = self.algebra.basis()

    def teardown_method(self):
        """Drop limits cached under a patched environment."""
        get_limits.cache_clear()

    def test_maximal_order(self):
        """Test that a maximal order lies only in itself."""
        assert count_maximal_superorders(maximal_order(self.algebra)) == 1

    def test_eta_order(self):
        """Test that Z[eta, j] lies in a unique maximal order."""
        order = order_from_generators([(self.i - 1) / 2, self.j])
        assert count_maximal_superorders(order) == 1

    def test_ij_order(self):
        """Test that Z[i, j] lies in exactly two maximal orders."""
        order = order_from_generators([self.i, self.j])
        assert count_maximal_superorders(order) == 2

    def test_eichler_order(self):
        """Test that an Eichler order of prime level lies in two maximal orders."""
        order = eichler_order(maximal_order(self.algebra), 5)
        assert count_maximal_superorders(order) == 2

    def test_radius_grows_until_certified(self):
        """Test that Z + 4O is counted in all ten orders within distance 2, from any start radius."""
        order = order_from_generators([4 * x for x in maximal_order(self.algebra).lattice.elements()])
        assert count_maximal_superorders(order, radius=1) == 10
        assert count_maximal_superorders(order) == 10
        assert count_maximal_superorders(order, radius=3) == 10

    @patch.dict(os.environ, {'QUATGRAPH_SUPERORDER_RADIUS': '1'})
    def test_radius_exhausted(self):
        """Test that a locus still open at the radius limit is an error, not a count."""
        get_limits.cache_clear()
        order = order_from_generators([4 * x for x in maximal_order(self.algebra).lattice.elements()])
        with pytest.raises(SearchExhaustedError):
            count_maximal_superorders(order, radius=1)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
