#!/usr/bin/env python3
"""
Graph Bounds
Endpoint bounds for connected multigraphs of valency at most three, the
nail and fork reductions used to reach the extremal shapes, random
generators for property testing, and theorem-level verdicts on computed
classifying graphs.
"""

import os
import random
import sys
from dataclasses import dataclass
from typing import Optional

import networkx as nx

try:
    from .errors import BoundPrecondition, InfeasibleGraphError
except ImportError:
    sys.path.insert(0, os.path.dirname(__file__))
    from errors import BoundPrecondition, InfeasibleGraphError


@dataclass(frozen=True)
class MultiGraph:
    """
    Vertices 0..n-1 with edges (u, v, multiplicity), u <= v.

    A loop (u == v) adds 2 to the valency of u; each half-edge at v adds 1.
    `parts` labels every vertex 'A' or 'B' for bipartite instances.
    """

    n: int
    edges: tuple = ()
    half_edges: tuple = ()
    parts: Optional[tuple] = None

    @classmethod
    def build(cls, n, edge_list, half_edges=(), parts=None):
        """Collapse an edge list with repeats into (u, v, multiplicity) triples."""
        counts = {}
        for u, v in edge_list:
            key = (min(u, v), max(u, v))
            counts[key] = counts.get(key, 0) + 1
        halves = {}
        for v in half_edges:
            halves[v] = halves.get(v, 0) + 1
        return cls(n, tuple((u, v, m) for (u, v), m in sorted(counts.items())),
                   tuple(sorted(halves.items())), tuple(parts) if parts is not None else None)

    @classmethod
    def from_classifying_graph(cls, graph):
        edges = []
        halves = []
        for e in graph.edges:
            if e.inverted:
                halves.extend([e.u] * e.multiplicity)
            else:
                edges.extend([(e.u, e.v)] * e.multiplicity)
        parts = None
        if graph.bipartite:
            parts = tuple('A' if v.part == 0 else 'B' for v in graph.vertices)
        return cls.build(graph.n, edges, halves, parts)

    def valencies(self):
        val = [0] * self.n
        for u, v, m in self.edges:
            val[u] += m
            val[v] += m
        for v, c in self.half_edges:
            val[v] += c
        return val

    @property
    def edge_count(self):
        """Full edges, each loop counted once."""
        return sum(m for _, _, m in self.edges)

    def to_networkx(self):
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.n))
        for u, v, m in self.edges:
            g.add_edges_from([(u, v)] * m)
        return g

    def is_connected(self):
        return self.n > 0 and nx.is_connected(self.to_networkx())


@dataclass(frozen=True)
class BoundReport:
    n: int
    r: int
    t: int
    bound_holds: bool
    equality: bool
    equality_characterization_holds: bool
    intermediate_holds: Optional[bool] = None
    m: Optional[int] = None
    p: Optional[int] = None
    s: Optional[int] = None
    q: Optional[int] = None
    conditions_hold: Optional[bool] = None
    identities_hold: Optional[bool] = None


def _require_small_valency(graph):
    if not graph.is_connected():
        raise BoundPrecondition("graph is not connected")
    val = graph.valencies()
    if max(val, default=0) > 3:
        raise BoundPrecondition(f"valency {max(val)} exceeds 3")
    return val


def check_prop51(graph):
    """
    r <= t + 2 for a connected graph of valency at most 3.

    Equality holds exactly for trees whose valencies are all 1 or 3.

    Raises:
        BoundPrecondition: disconnected, or a valency above 3
    """
    val = _require_small_valency(graph)
    n = graph.n
    r = sum(1 for x in val if x == 1)
    t = n - r
    v = graph.edge_count
    intermediate = v >= n - 1 and 3 * t + r >= 2 * v
    characterization = (not graph.half_edges and nx.is_tree(graph.to_networkx())
                        and all(x in (1, 3) for x in val))
    equality = r == t + 2
    return BoundReport(
        n=n, r=r, t=t,
        bound_holds=r <= t + 2,
        equality=equality,
        equality_characterization_holds=equality == characterization,
        intermediate_holds=intermediate,
    )


def _sides(graph):
    if graph.parts is None:
        raise BoundPrecondition("graph has no bipartition")
    if graph.half_edges:
        raise BoundPrecondition("half-edges in a bipartite graph")
    for u, v, _ in graph.edges:
        if graph.parts[u] == graph.parts[v]:
            raise BoundPrecondition(f"edge {u}-{v} inside one part")
    a_side = [v for v in range(graph.n) if graph.parts[v] == 'A']
    b_side = [v for v in range(graph.n) if graph.parts[v] == 'B']
    return a_side, b_side


def _extremal_conditions(graph, val, a_side, b_side):
    """Tree, every A-vertex of valency 3, every B-vertex of valency 1 or 3."""
    return (nx.is_tree(graph.to_networkx())
            and all(val[a] == 3 for a in a_side)
            and all(val[b] in (1, 3) for b in b_side))


def check_prop52(graph):
    """
    4r <= 3(n + 1) for a bipartite graph, counting n and r on the B side.

    When the extremal conditions hold, also checks the counting identities
    r = t+m+p+s+q+2, r = p+2s+3q, 3t = 3m+2p+s and r = 3(t+1), where m, p, s, q
    count A-vertices with 0, 1, 2, 3 neighbouring endpoints.

    Raises:
        BoundPrecondition: not bipartite as presented, or a valency above 3
    """
    val = _require_small_valency(graph)
    a_side, b_side = _sides(graph)
    endpoints = {b for b in b_side if val[b] == 1}
    n = len(b_side)
    r = len(endpoints)
    t = n - r

    near = {a: 0 for a in a_side}
    for u, v, mult in graph.edges:
        a, b = (u, v) if graph.parts[u] == 'A' else (v, u)
        if b in endpoints:
            near[a] += mult
    m = sum(1 for c in near.values() if c == 0)
    p = sum(1 for c in near.values() if c == 1)
    s = sum(1 for c in near.values() if c == 2)
    q = sum(1 for c in near.values() if c == 3)

    conditions = _extremal_conditions(graph, val, a_side, b_side)
    equality = 4 * r == 3 * (n + 1)
    identities = None
    if conditions:
        identities = (r == t + m + p + s + q + 2 and r == p + 2 * s + 3 * q
                      and 3 * t == 3 * m + 2 * p + s and r == 3 * (t + 1))
    return BoundReport(
        n=n, r=r, t=t,
        bound_holds=4 * r <= 3 * (n + 1),
        equality=equality,
        equality_characterization_holds=equality == conditions,
        m=m, p=p, s=s, q=q,
        conditions_hold=conditions,
        identities_hold=identities,
    )


def nailfork_reduce(graph):
    """
    Turn a bipartite graph into one meeting the extremal conditions.

    Each cycle edge a-b is replaced by a nail at a (a new B-leaf) and a fork
    at b (a new A-vertex with two new B-leaves). Then A-vertices are topped up
    to valency 3 with nails, and B-vertices of valency 2 or 0 get one or three
    forks. The number t of non-endpoint B-vertices is unchanged and r never
    drops.

    Raises:
        BoundPrecondition: not bipartite, or a valency above 3
    """
    _require_small_valency(graph)
    _sides(graph)
    g = graph.to_networkx()
    parts = list(graph.parts)

    def add_vertex(label):
        parts.append(label)
        g.add_node(len(parts) - 1)
        return len(parts) - 1

    def nail(a):
        g.add_edge(a, add_vertex('B'))

    def fork(b):
        a = add_vertex('A')
        g.add_edge(b, a)
        g.add_edge(a, add_vertex('B'))
        g.add_edge(a, add_vertex('B'))

    while True:
        try:
            cycle = nx.find_cycle(g)
        except nx.NetworkXNoCycle:
            break
        u, v, key = cycle[0][:3]
        a, b = (u, v) if parts[u] == 'A' else (v, u)
        g.remove_edge(u, v, key)
        nail(a)
        fork(b)

    for vertex in range(len(parts)):
        deg = g.degree(vertex)
        if parts[vertex] == 'A':
            for _ in range(3 - deg):
                nail(vertex)
        elif deg == 2:
            fork(vertex)
        elif deg == 0:
            for _ in range(3):
                fork(vertex)

    return MultiGraph.build(len(parts), list(g.edges()), parts=parts)


def random_graph(n, max_valency=3, seed=None):
    """
    Connected multigraph with valencies capped, loops and parallel edges allowed.

    A random spanning tree is grown under the cap, then random extra edges are
    added while capacity remains.

    Raises:
        InfeasibleGraphError: no connected graph meets the cap
    """
    if n < 1:
        raise InfeasibleGraphError("need at least one vertex")
    if (n >= 3 and max_valency < 2) or (n == 2 and max_valency < 1):
        raise InfeasibleGraphError(f"{n} vertices cannot be connected under valency {max_valency}")
    rng = random.Random(seed)
    val = [0] * n
    edges = []
    order = list(range(n))
    rng.shuffle(order)
    for idx in range(1, n):
        v = order[idx]
        u = rng.choice([w for w in order[:idx] if val[w] < max_valency])
        edges.append((u, v))
        val[u] += 1
        val[v] += 1

    for _ in range(rng.randint(0, n)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            if val[u] + 2 > max_valency:
                continue
        elif val[u] >= max_valency or val[v] >= max_valency:
            continue
        edges.append((u, v))
        val[u] += 1
        val[v] += 1
    return MultiGraph.build(n, edges)


def random_bipartite(n_a, n_b, seed=None):
    """
    Connected bipartite multigraph of valency at most 3 with parts of the given sizes.

    Vertices 0..n_a-1 form part A. The spanning tree is grown by random legal
    attachments; it can always be completed when n_b <= 2 n_a + 1 and
    n_a <= 2 n_b + 1.

    Raises:
        InfeasibleGraphError: the part sizes admit no such tree
    """
    if n_a + n_b < 1 or n_b > 2 * n_a + 1 or n_a > 2 * n_b + 1:
        raise InfeasibleGraphError(f"parts of sizes {n_a}, {n_b} cannot form a tree of valency <= 3")
    rng = random.Random(seed)
    parts = ['A'] * n_a + ['B'] * n_b
    remaining = {'A': list(range(n_a)), 'B': list(range(n_a, n_a + n_b))}
    rng.shuffle(remaining['A'])
    rng.shuffle(remaining['B'])
    val = [0] * (n_a + n_b)
    placed = {'A': [], 'B': []}
    edges = []

    start = 'A' if n_a else 'B'
    placed[start].append(remaining[start].pop())
    other = {'A': 'B', 'B': 'A'}
    while remaining['A'] or remaining['B']:
        moves = [side for side in ('A', 'B')
                 if remaining[side] and any(val[w] < 3 for w in placed[other[side]])]
        side = rng.choice(moves)
        v = remaining[side].pop()
        u = rng.choice([w for w in placed[other[side]] if val[w] < 3])
        edges.append((u, v))
        val[u] += 1
        val[v] += 1
        placed[side].append(v)

    if n_a and n_b:
        for _ in range(rng.randint(0, n_a + n_b)):
            u, v = rng.randrange(n_a), rng.randrange(n_a, n_a + n_b)
            if val[u] < 3 and val[v] < 3:
                edges.append((u, v))
                val[u] += 1
                val[v] += 1
    return MultiGraph.build(n_a + n_b, edges, parts=parts)


def endpoint_dominated(graph):
    """Every vertex is an endpoint or adjacent to one (and some endpoint exists)."""
    if not isinstance(graph, MultiGraph):
        graph = MultiGraph.from_classifying_graph(graph)
    val = graph.valencies()
    endpoints = {v for v in range(graph.n) if val[v] == 1}
    if not endpoints:
        return False
    g = graph.to_networkx()
    return all(v in endpoints or any(w in endpoints for w in g.neighbors(v)) for v in range(graph.n))


def theorem_verdicts(graph):
    """
    Endpoint bounds and selectivity verdicts for a computed classifying graph.

    `thm2` is None when the graph is not bipartite. `thm3_consistent` checks
    the contrapositive: a bipartite graph with a cube-root class in each part,
    all of them endpoints, has exactly two vertices.
    """
    n, r = graph.n, graph.r
    thm1 = 2 * r <= n + 2

    thm2 = None
    thm3 = True
    if graph.bipartite:
        thm2 = True
        omega_parts = set()
        for label in (0, 1):
            members = [v for v in graph.vertices if v.part == label]
            r_part = sum(1 for v in members if v.is_endpoint)
            thm2 = thm2 and 4 * r_part <= 3 * (len(members) + 1)
            if any(v.omega_embeds for v in members):
                omega_parts.add(label)
        omega_all_endpoints = all(v.is_endpoint for v in graph.vertices if v.omega_embeds)
        if omega_parts == {0, 1} and omega_all_endpoints:
            thm3 = n == 2

    omega_count = sum(1 for v in graph.vertices if v.omega_embeds)
    represented = omega_count > 0
    selective = 0 < omega_count < n
    return {
        'n': n,
        'r': r,
        'thm1': thm1,
        'thm2': thm2,
        'thm3_consistent': thm3,
        'omega_classes': omega_count,
        'represented': represented,
        'selective': selective,
        'corollary_holds': selective or not (n >= 3 and represented),
        'endpoint_dominated': endpoint_dominated(graph),
        'bound_holds': thm1 and thm2 is not False,
    }
