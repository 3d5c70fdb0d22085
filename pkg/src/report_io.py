#!/usr/bin/env python3
"""
Report I/O
JSON and DOT renderings of classifying graphs. Orders are written as their
denominator followed by the 16 HNF entries, which is exact and independent
of the chosen model of the algebra.
"""

import json
import os
import sys
from fractions import Fraction

try:
    from .classifying_graph import ClassifyingGraph, ClassVertex, QuotientEdge
    from .orders_ideals import QuatLattice, QuatOrder
    from .quat_algebra import QuaternionAlgebra
except ImportError:
    sys.path.insert(0, os.path.dirname(__file__))
    from classifying_graph import ClassifyingGraph, ClassVertex, QuotientEdge
    from orders_ideals import QuatLattice, QuatOrder
    from quat_algebra import QuaternionAlgebra


def graph_to_json(graph, verdicts=None):
    """Plain-data document for a classifying graph."""
    return {
        'algebra': {'a': str(graph.algebra.a), 'b': str(graph.algebra.b)},
        'p': graph.p,
        'level': graph.level,
        'vertices': [{
            'id': v.id,
            'basis': list(v.representative.key),
            'unit_order': v.unit_order,
            'endpoint': v.is_endpoint,
            'omega': v.omega_embeds,
            'part': v.part,
            'valency': v.valency,
            'normalizer_order': v.normalizer_order,
            'two_sided_weight': str(v.two_sided_weight),
        } for v in graph.vertices],
        'edges': [{'u': e.u, 'v': e.v, 'mult': e.multiplicity, 'inverted': e.inverted} for e in graph.edges],
        'bipartite': graph.bipartite,
        'n': graph.n,
        'r': graph.r,
        'verdicts': verdicts,
    }


def graph_from_json(doc):
    """Rebuild a ClassifyingGraph from graph_to_json output."""
    algebra = QuaternionAlgebra(Fraction(doc['algebra']['a']), Fraction(doc['algebra']['b']))
    vertices = []
    for item in doc['vertices']:
        key = item['basis']
        rows = tuple(tuple(key[1 + 4 * i: 5 + 4 * i]) for i in range(4))
        vertices.append(ClassVertex(
            id=item['id'],
            representative=QuatOrder(QuatLattice(algebra, key[0], rows)),
            unit_order=item['unit_order'],
            is_endpoint=item['endpoint'],
            omega_embeds=item['omega'],
            part=item.get('part'),
            valency=item.get('valency', 0),
            normalizer_order=item.get('normalizer_order', 0),
            two_sided_weight=Fraction(item.get('two_sided_weight', '1')),
        ))
    edges = [QuotientEdge(e['u'], e['v'], e['mult'], e['inverted']) for e in doc['edges']]
    return ClassifyingGraph(algebra, doc['p'], doc['level'], vertices, edges, doc['bipartite'])


def dumps(doc):
    """Byte-stable JSON text."""
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + '\n'


def graph_to_dot(graph):
    """
    DOT text: real vertices as filled circles, every half-edge drawn to its
    own star-labelled virtual node.
    """
    out = ['graph classifying {',
           '  node [shape=circle, style=filled, fillcolor=black, label="", width=0.2];']
    for v in graph.vertices:
        out.append(f'  v{v.id};')
    stars = 0
    for e in graph.edges:
        for _ in range(e.multiplicity):
            if e.inverted:
                out.append(f'  star{stars} [shape=plaintext, style="", label="*"];')
                out.append(f'  v{e.u} -- star{stars};')
                stars += 1
            else:
                out.append(f'  v{e.u} -- v{e.v};')
    out.append('}')
    return '\n'.join(out) + '\n'


def write_text(text, path=None):
    """Write to a file, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(text)
