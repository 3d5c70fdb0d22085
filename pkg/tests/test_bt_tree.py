#!/usr/bin/env python3
"""
Unit tests for residue splittings and navigation of the tree.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from src.bt_tree import (
    TreeVertex,
    line_ideal,
    lines,
    neighbors,
    normalize_line,
    split_residue,
    tree_distance,
)
from src.errors import RamificationError, SearchExhaustedError, SplittingError
from src.orders_ideals import maximal_order, order_from_generators
from src.quat_algebra import QuaternionAlgebra


@pytest.fixture(scope='module')
def order():
    return maximal_order(QuaternionAlgebra(-3, -3))


class TestLines:
    """Test suite for the projective line helpers."""

    def test_lines_order(self):
        """Test the listing of P^1(F_p)."""
        assert lines(2) == [(0, 1), (1, 0), (1, 1)]
        assert len(lines(7)) == 8

    def test_normalize(self):
        """Test canonical line representatives."""
        assert normalize_line((0, 5), 7) == (0, 1)
        assert normalize_line((3, 6), 7) == (1, 2)
        assert normalize_line((2, 0), 5) == (1, 0)

    def test_zero_vector(self):
        """Test that the zero vector spans no line."""
        with pytest.raises(SearchExhaustedError):
            normalize_line((0, 0), 3)


class TestSplitResidue:
    """Test suite for split_residue."""

    @pytest.mark.parametrize('p', [2, 5, 7])
    def test_isomorphism(self, order, p):
        """Test that the basis images multiply like the basis."""
        splitting = split_residue(order, p)
        basis = order.lattice.elements()
        for x in basis:
            for y in basis:
                mx, my = splitting.image(x), splitting.image(y)
                expected = tuple(tuple(sum(mx[i][k] * my[k][j] for k in range(2)) % p for j in range(2))
                                 for i in range(2))
                assert splitting.image(x * y) == expected

    def test_idempotent(self, order):
        """Test that e is a nontrivial idempotent."""
        splitting = split_residue(order, 2)
        e = order.lattice.element_from_coords(splitting.idempotent)
        assert splitting.image(e * e) == splitting.image(e)
        assert splitting.image(e) not in (((0, 0), (0, 0)), ((1, 0), (0, 1)))

    def test_lift(self, order):
        """Test that lifted matrices map back to themselves."""
        splitting = split_residue(order, 5)
        m = ((1, 4), (2, 3))
        assert splitting.image(splitting.lift(m)) == m

    def test_ramified(self, order):
        """Test that no splitting exists at a ramified prime."""
        with pytest.raises(RamificationError):
            split_residue(order, 3)

    def test_not_maximal(self):
        """Test that an order not maximal at p is rejected."""
        algebra = QuaternionAlgebra(-3, -3)
        _, i, j, _ = algebra.basis()
        with pytest.raises(SplittingError):
            split_residue(order_from_generators([i, j]), 2)


class TestNeighbors:
    """Test suite for neighbors and tree_distance."""

    def test_three_distinct_neighbors(self, order):
        """Test the neighbours at 2."""
        found = neighbors(TreeVertex(order), 2)
        assert len(found) == 3
        assert len({v.key for v in found}) == 3
        assert all(v.depth == 1 for v in found)
        assert all(v.order.reduced_discriminant == 3 for v in found)

    def test_neighbor_lines(self, order):
        """Test that neighbours follow the lines of P^1."""
        splitting = split_residue(order, 2)
        found = neighbors(TreeVertex(order), 2)
        for w, v in zip(lines(2), found):
            assert line_ideal(splitting, w).right_order == v.order

    def test_symmetry(self, order):
        """Test that adjacency is symmetric."""
        root = TreeVertex(order)
        for v in neighbors(root, 2):
            assert root.key in {w.key for w in neighbors(v, 2)}
            for w in neighbors(v, 2):
                assert v.key in {u.key for u in neighbors(w, 2)}

    def test_distance(self, order):
        """Test distances 0, 1 and 2."""
        root = TreeVertex(order)
        first = neighbors(root, 2)[0]
        assert tree_distance(root, root, 2) == 0
        assert tree_distance(root, first, 2) == 1
        for second in neighbors(first, 2):
            expected = 0 if second.key == root.key else 2
            assert tree_distance(root, second, 2) == expected

    def test_no_cycles(self, order):
        """Test the sphere sizes 3, 6, 12 of the tree at 2."""
        root = TreeVertex(order)
        seen = {root.key}
        frontier = [root]
        for depth in range(1, 4):
            nxt = []
            for v in frontier:
                for w in neighbors(v, 2):
                    if w.key not in seen:
                        seen.add(w.key)
                        nxt.append(w)
            assert len(nxt) == 3 * 2 ** (depth - 1)
            for w in nxt:
                assert tree_distance(root, w, 2) == depth
            frontier = nxt

    def test_sphere_at_five(self, order):
        """Test p + 1 neighbours and p(p+1) vertices at distance 2 for p = 5."""
        root = TreeVertex(order)
        first = neighbors(root, 5)
        assert len({v.key for v in first}) == 6
        second = {w.key for v in first for w in neighbors(v, 5)} - {root.key}
        assert len(second) == 30


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
