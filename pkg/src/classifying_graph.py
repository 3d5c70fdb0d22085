#!/usr/bin/env python3
"""
Classifying Graph
The quotient of the Bruhat-Tits tree at p by the normalizer of a maximal
(or odd level Eichler) order, discovered by breadth-first search over
conjugacy classes, together with the checks run on it: endpoints against
cube roots of unity, the mass formula, spinor bipartition, containment loci
and the distance to the endpoint set.
"""

import itertools
import os
import sys
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import networkx as nx
from sympy import isprime, primefactors

try:
    from .bt_tree import TreeVertex, line_ideal, lines, neighbors, split_residue
    from .errors import (ClassLimitError, DefinitenessError, MassMismatchError, NotIntegralError,
                         PreconditionError, RamificationError, ReconciliationError, SplittingError)
    from .orders_ideals import QuatIdeal, connecting_ideal, embed_quadratic, is_principal, p_radical
    from .settings import get_limits
except ImportError:
    sys.path.insert(0, os.path.dirname(__file__))
    from bt_tree import TreeVertex, line_ideal, lines, neighbors, split_residue
    from errors import (ClassLimitError, DefinitenessError, MassMismatchError, NotIntegralError,
                        PreconditionError, RamificationError, ReconciliationError, SplittingError)
    from orders_ideals import QuatIdeal, connecting_ideal, embed_quadratic, is_principal, p_radical
    from settings import get_limits


@dataclass
class ClassVertex:
    """One conjugacy class of orders in the genus."""

    id: int
    representative: object
    unit_order: int
    is_endpoint: bool = False
    omega_embeds: bool = False
    part: Optional[int] = None
    valency: int = 0
    normalizer_order: int = 0
    two_sided_weight: Fraction = Fraction(1)


@dataclass(frozen=True)
class QuotientEdge:
    """An edge of the quotient; u == v for loops and for half-edges to a virtual vertex."""

    u: int
    v: int
    multiplicity: int
    inverted: bool = False


@dataclass
class ClassifyingGraph:
    algebra: object
    p: int
    level: int
    vertices: list
    edges: list
    bipartite: bool = False
    orbits: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self):
        return len(self.vertices)

    @property
    def r(self):
        return sum(1 for v in self.vertices if v.is_endpoint)

    def valency(self, vid):
        total = 0
        for e in self.edges:
            if e.u == vid and e.v == vid:
                total += e.multiplicity * (1 if e.inverted else 2)
            elif vid in (e.u, e.v):
                total += e.multiplicity
        return total

    def to_networkx(self):
        """Real vertices and full edges; half-edges are left out."""
        g = nx.MultiGraph()
        g.add_nodes_from(v.id for v in self.vertices)
        for e in self.edges:
            if not e.inverted:
                g.add_edges_from([(e.u, e.v)] * e.multiplicity)
        return g


@dataclass
class LocusReport:
    """Tree vertices whose orders contain a given set of elements."""

    vertices: list
    shape: str
    radius_searched: int
    boundary_certified: bool
    edges: list = field(default_factory=list)
    depths: list = field(default_factory=list)


@dataclass(frozen=True)
class Normalizer:
    """
    Representatives of N(O) modulo Q^*.

    Every two-sided ideal class of O is represented by a product J_S of
    radicals at the primes in S; the principal ones contribute their
    generators to the normalizer.
    """

    order: object
    primes: tuple
    ideals: tuple
    generators: tuple
    elements: tuple

    @property
    def principal_count(self):
        return len(self.generators)

    @property
    def order_mod_scalars(self):
        return self.order.unit_count // 2 * self.principal_count

    @property
    def two_sided_weight(self):
        return Fraction(2 ** len(self.primes), self.principal_count)


def _subsets(primes):
    for size in range(len(primes) + 1):
        yield from itertools.combinations(primes, size)


def normalizer(order):
    """Units of O together with generators of the principal two-sided ideals J_S."""
    primes = tuple(primefactors(order.reduced_discriminant))
    radicals = {q: p_radical(order, q) for q in primes}
    ideals = []
    generators = [((), order.algebra.one())]
    for subset in _subsets(primes):
        if not subset:
            continue
        lattice = radicals[subset[0]]
        for q in subset[1:]:
            lattice = lattice.product(radicals[q])
        ideal = QuatIdeal(lattice, order, order)
        ideals.append((subset, ideal))
        x = is_principal(ideal)
        if x is not None:
            generators.append((subset, x))
    units = order.units.elements
    elements = tuple(g * u for _, g in generators for u in units)
    return Normalizer(order, primes, tuple(ideals), tuple(generators), elements)


def conjugacy(base, other):
    """
    An element x with x^-1 * O * x = other, or None.

    Tries J_S * connecting_ideal(O, other) for every subset S; one of them is
    principal exactly when the orders are conjugate.
    """
    ideal = connecting_ideal(base.order, other)
    x = is_principal(ideal)
    if x is not None:
        return x
    for _, two_sided in base.ideals:
        x = is_principal(two_sided.product(ideal))
        if x is not None:
            return x
    return None


def _norm_multipliers(order):
    primes = primefactors(order.reduced_discriminant)
    values = []
    for subset in _subsets(tuple(primes)):
        m = 1
        for q in subset:
            m *= q
        values.append(m)
    return sorted(values)


def inversion_test(first, second, p):
    """
    An element swapping two adjacent orders under conjugation, or None.

    Searched among elements of norm p*m (m a product of primes dividing the
    discriminant) in the intersection and in both connecting ideals. Within
    each search, pure quaternions are tried first.
    """
    lattices = [first.lattice.intersection(second.lattice),
                connecting_ideal(first, second).lattice,
                connecting_ideal(second, first).lattice]
    for m in _norm_multipliers(first):
        for lattice in lattices:
            for x in sorted(lattice.elements_of_norm(p * m), key=lambda y: y.trd() != 0):
                if first.conjugate(x) == second and second.conjugate(x) == first:
                    return x
    return None


def line_orbits(splitting, elements):
    """Orbits of the elements on P^1(F_p), each as (smallest line, sorted member lines)."""
    seen = set()
    orbits = []
    for w in lines(splitting.p):
        if w in seen:
            continue
        orbit = sorted({splitting.act(g, w) for g in elements} | {w})
        seen.update(orbit)
        orbits.append((w, orbit))
    return orbits


@dataclass
class _ClassRecord:
    vertex: ClassVertex
    normalizer: Normalizer


def _check_inputs(order, p):
    algebra = order.algebra
    if not algebra.is_definite:
        raise DefinitenessError(f"{algebra} is indefinite")
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime")
    if p in algebra.ramified_primes:
        raise RamificationError(f"{p} is ramified in {algebra}")
    if not order.is_maximal_at(p):
        raise SplittingError(f"order is not maximal at {p}")


def build_classifying_graph(order, p=2, progress=None, class_limit=None):
    """
    Breadth-first search over the conjugacy classes of the genus.

    Every class is expanded once: the normalizer of its representative acts
    on the p+1 neighbours through the residue splitting, and each orbit is
    matched against the classes found so far.

    Args:
        order: Maximal order, or Eichler order of level prime to p
        p: Prime of the tree
        progress: Optional callable receiving status strings
        class_limit: Guard on the number of classes (defaults to the configured limit)

    Returns:
        ClassifyingGraph with vertices numbered in discovery order

    Raises:
        PreconditionError: the algebra is indefinite or the order is not maximal at p
        ClassLimitError: too many classes
        ReconciliationError: edge counts from the two ends disagree
    """
    _check_inputs(order, p)
    if class_limit is None:
        class_limit = get_limits().class_limit
    algebra = order.algebra
    level = order.reduced_discriminant // algebra.discriminant

    registry = []

    def register(rep):
        if len(registry) >= class_limit:
            raise ClassLimitError(f"more than {class_limit} classes")
        norm = normalizer(rep)
        vertex = ClassVertex(
            id=len(registry),
            representative=rep,
            unit_order=rep.unit_count // 2,
            omega_embeds=embed_quadratic(rep, -1, 1) is not None,
            normalizer_order=norm.order_mod_scalars,
            two_sided_weight=norm.two_sided_weight,
        )
        record = _ClassRecord(vertex, norm)
        registry.append(record)
        if progress:
            progress(f"class {vertex.id}: {vertex.unit_order * 2} units, normalizer index {norm.principal_count}")
        return record

    def classify(candidate):
        count = candidate.unit_count
        for record in registry:
            if record.vertex.representative.unit_count != count:
                continue
            if conjugacy(record.normalizer, candidate) is not None:
                return record
        return None

    queue = deque([register(order)])
    orbits = {}
    while queue:
        record = queue.popleft()
        rep = record.vertex.representative
        splitting = split_residue(rep, p)
        entries = []
        for line, members in line_orbits(splitting, record.normalizer.elements):
            neighbor = line_ideal(splitting, line).right_order
            target = classify(neighbor)
            if target is None:
                target = register(neighbor)
                queue.append(target)
            inverted = False
            if target is record:
                inverted = inversion_test(rep, neighbor, p) is not None
            entries.append({'line': line, 'size': len(members), 'target': target.vertex.id, 'inverted': inverted})
        orbits[record.vertex.id] = entries

    vertices = [record.vertex for record in registry]
    graph = ClassifyingGraph(algebra, p, level, vertices, _quotient_edges(orbits), orbits=orbits)
    for v in vertices:
        v.valency = len(orbits[v.id])
        v.is_endpoint = v.valency == 1
    spinor_partition(graph)
    if progress:
        progress(f"{graph.n} classes, {graph.r} endpoints")
    return graph


def _quotient_edges(orbits):
    report = edge_reconciliation_counts(orbits)
    if report['mismatches']:
        raise ReconciliationError(f"edge counts disagree: {report['mismatches']}")
    edges = []
    for u in sorted(orbits):
        halves = sum(1 for e in orbits[u] if e['target'] == u and e['inverted'])
        plain = sum(1 for e in orbits[u] if e['target'] == u and not e['inverted'])
        if plain % 2:
            raise ReconciliationError(f"class {u} has an unpaired self orbit")
        if halves:
            edges.append(QuotientEdge(u, u, halves, True))
        if plain:
            edges.append(QuotientEdge(u, u, plain // 2, False))
        for (a, b), count in sorted(report['counts'].items()):
            if a == u and b > u:
                edges.append(QuotientEdge(u, b, count, False))
    return edges


def edge_reconciliation_counts(orbits):
    counts = {}
    for u, entries in orbits.items():
        for e in entries:
            if e['target'] != u:
                counts[(u, e['target'])] = counts.get((u, e['target']), 0) + 1
    mismatches = [(u, v) for (u, v), c in counts.items() if counts.get((v, u), 0) != c]
    return {'counts': counts, 'mismatches': sorted(mismatches)}


def edge_reconciliation(graph):
    """Edge multiplicities seen from both ends of every class pair agree."""
    report = edge_reconciliation_counts(graph.orbits)
    return {'ok': not report['mismatches'], 'mismatches': report['mismatches']}


def unit_action_agrees(order, p):
    """
    The permutation of neighbours induced by conjugation with each unit
    matches the action of its residue matrix on P^1(F_p).
    """
    splitting = split_residue(order, p)
    neighbor_of = {w: line_ideal(splitting, w).right_order for w in lines(p)}
    for g in order.units.elements:
        for w, target in neighbor_of.items():
            if target.conjugate(g) != neighbor_of[splitting.act(g, w)]:
                return False
    return True


def endpoints_cross_check(graph):
    """Every class is an endpoint exactly when its orders contain a cube root of unity."""
    if graph.p != 2 or 2 in graph.algebra.ramified_primes:
        raise PreconditionError("endpoint check needs the tree at 2 in an algebra split at 2")
    violations = [v.id for v in graph.vertices if v.is_endpoint != v.omega_embeds]
    return {'ok': not violations, 'checked': graph.n, 'violations': violations}


def spinor_partition(graph):
    """
    Two-colour the classes by distance parity from class 0.

    Returns:
        (part 0 ids, part 1 ids), or None when a loop, a half-edge or an odd
        cycle rules a bipartition out
    """
    for v in graph.vertices:
        v.part = None
    graph.bipartite = False
    if any(e.u == e.v for e in graph.edges):
        return None
    depth = nx.single_source_shortest_path_length(graph.to_networkx(), 0)
    if any(depth[e.u] % 2 == depth[e.v] % 2 for e in graph.edges):
        return None
    for v in graph.vertices:
        v.part = depth[v.id] % 2
    graph.bipartite = True
    return (sorted(v.id for v in graph.vertices if v.part == 0),
            sorted(v.id for v in graph.vertices if v.part == 1))


def expected_mass(graph):
    """(1/12) * prod (q - 1) over ramified q * prod (l + 1) over level primes l."""
    mass = Fraction(1, 12)
    for q in graph.algebra.ramified_primes:
        mass *= q - 1
    for q in primefactors(graph.level):
        mass *= q + 1
    return mass


def mass_check(graph):
    """
    Compare the weighted sum of 1 / |units / +-1| with the mass formula.

    Raises:
        MassMismatchError: classes are missing or unit groups are wrong
    """
    total = sum((v.two_sided_weight / v.unit_order for v in graph.vertices), Fraction(0))
    expected = expected_mass(graph)
    if total != expected:
        raise MassMismatchError(f"mass {total} found, {expected} expected")
    return True


def omega_depth_and_universal_embedding(graph):
    """
    Largest distance rho from the endpoint set, and a check that Z[2^(rho-1) sqrt(-3)]
    (Z[omega] when rho is 0) embeds in every class.

    Raises:
        PreconditionError: not the tree at 2, or no endpoint
    """
    if graph.p != 2:
        raise PreconditionError("distance to endpoints is read on the tree at 2")
    endpoints = [v.id for v in graph.vertices if v.is_endpoint]
    if not endpoints:
        raise PreconditionError("graph has no endpoint")
    distance = nx.multi_source_dijkstra_path_length(graph.to_networkx(), endpoints)
    rho = max(distance.values())
    t, n = (-1, 1) if rho == 0 else (0, 3 * 4 ** (rho - 1))
    witnesses = {v.id: embed_quadratic(v.representative, t, n) for v in graph.vertices}
    return {
        'rho': rho,
        'trace': t,
        'norm': n,
        'witnesses': witnesses,
        'ok': all(x is not None for x in witnesses.values()),
    }


def _locus_shape(count, certified, is_path):
    if count == 0:
        return 'empty'
    if not certified and count >= 2 and is_path:
        return 'unbounded-path'
    if count == 1:
        return 'single-vertex'
    if count == 2:
        return 'edge-pair'
    return 'bounded-set'


def containment_locus(gens, base, p, radius):
    """
    Maximal-at-p orders of the tree around `base` that contain every generator.

    The search expands every vertex until the first locus vertex appears and
    then only locus vertices (the locus is convex). It is certified when no
    locus vertex lies on the sphere of the given radius.

    Raises:
        NotIntegralError: a generator has non-integral trace or norm
    """
    gens = list(gens)
    for g in gens:
        if g.trd().denominator != 1 or g.nrd().denominator != 1:
            raise NotIntegralError(f"{g} is not integral")
    _check_inputs(base, p)

    root = TreeVertex(base, 0)
    visited = {root.key}
    parent = {}
    queue = deque([root])
    locus = []
    while queue:
        v = queue.popleft()
        inside = all(g in v.order for g in gens)
        if inside:
            locus.append(v)
        if v.depth >= radius or (locus and not inside):
            continue
        for w in neighbors(v, p):
            if w.key not in visited:
                visited.add(w.key)
                parent[w.key] = v.key
                queue.append(w)

    keys = {v.key for v in locus}
    tree = nx.Graph()
    tree.add_nodes_from(keys)
    tree.add_edges_from((k, parent[k]) for k in keys if parent.get(k) in keys)
    certified = bool(locus) and all(v.depth < radius for v in locus)
    is_path = bool(locus) and nx.is_tree(tree) and max(d for _, d in tree.degree()) <= 2
    if is_path and len(locus) > 1:
        locus = _path_order(locus, tree)

    index = {v.key: i for i, v in enumerate(locus)}
    edges = sorted(tuple(sorted((index[a], index[b]))) for a, b in tree.edges())
    return LocusReport(
        vertices=locus,
        shape=_locus_shape(len(locus), certified, is_path),
        radius_searched=radius,
        boundary_certified=certified,
        edges=edges,
        depths=[v.depth for v in locus],
    )


def _path_order(locus, tree):
    by_key = {v.key: v for v in locus}
    start = next(v.key for v in locus if tree.degree(v.key) == 1)
    ordered = [start]
    previous = None
    while len(ordered) < len(locus):
        current = ordered[-1]
        step = next(k for k in tree.neighbors(current) if k != previous)
        previous = current
        ordered.append(step)
    return [by_key[k] for k in ordered]


def shift_check(u, locus):
    """
    Conjugation by u moves every interior path vertex one step along the path,
    all in the same direction.
    """
    if locus.shape != 'unbounded-path' or len(locus.vertices) < 3:
        return False
    orders = [v.order for v in locus.vertices]
    moved = {i: orders[i].conjugate(u) for i in range(1, len(orders) - 1)}
    forward = all(moved[i] == orders[i + 1] for i in moved)
    backward = all(moved[i] == orders[i - 1] for i in moved)
    return forward or backward
