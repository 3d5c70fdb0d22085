#!/usr/bin/env python3
"""
Unit tests for the JSON and DOT renderings of classifying graphs.
"""

import json
import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from src.classifying_graph import ClassifyingGraph, ClassVertex, QuotientEdge, build_classifying_graph
from src.orders_ideals import maximal_order
from src.quat_algebra import QuaternionAlgebra
from src.report_io import dumps, graph_from_json, graph_to_dot, graph_to_json, write_text

HEADER = [
    'graph classifying {',
    '  node [shape=circle, style=filled, fillcolor=black, label="", width=0.2];',
]


@pytest.fixture(scope='module')
def graph():
    return build_classifying_graph(maximal_order(QuaternionAlgebra(-3, -3)), 2)


def hand_graph():
    """Three classes: a double edge 0-1, an edge 1-2 and a half-edge at 2."""
    algebra = QuaternionAlgebra(-1, -1)
    vertices = [ClassVertex(id=k, representative=None, unit_order=1) for k in range(3)]
    edges = [QuotientEdge(0, 1, 2), QuotientEdge(1, 2, 1), QuotientEdge(2, 2, 1, True)]
    return ClassifyingGraph(algebra, 2, 1, vertices, edges)


class TestJson:
    """Test suite for the JSON document."""

    def test_document(self, graph):
        """Test the keys and values for the class of (-3,-3)."""
        doc = graph_to_json(graph, {'thm1': True})
        assert doc['algebra'] == {'a': '-3', 'b': '-3'}
        assert (doc['p'], doc['level'], doc['n'], doc['r']) == (2, 1, 1, 1)
        assert doc['edges'] == [{'u': 0, 'v': 0, 'mult': 1, 'inverted': True}]
        vertex = doc['vertices'][0]
        assert vertex['unit_order'] == 6
        assert vertex['endpoint'] and vertex['omega']
        assert len(vertex['basis']) == 17
        assert vertex['basis'] == list(graph.vertices[0].representative.key)
        assert doc['verdicts'] == {'thm1': True}

    def test_round_trip(self, graph):
        """Test that parsing the serialized document gives the graph back."""
        doc = json.loads(dumps(graph_to_json(graph)))
        rebuilt = graph_from_json(doc)
        assert rebuilt == graph
        assert rebuilt.vertices[0].representative.reduced_discriminant == 3

    def test_dumps_stable(self, graph):
        """Test sorted keys, indentation and the trailing newline."""
        text = dumps({'b': 1, 'a': Fraction(1, 2)})
        assert text == '{\n  "a": "1/2",\n  "b": 1\n}\n'
        assert dumps(graph_to_json(graph)) == dumps(graph_to_json(graph))


class TestDot:
    """Test suite for the DOT rendering."""

    def test_single_half_edge(self, graph):
        """Test the graph of (-3,-3) against its expected text."""
        expected = HEADER + [
            '  v0;',
            '  star0 [shape=plaintext, style="", label="*"];',
            '  v0 -- star0;',
            '}',
        ]
        assert graph_to_dot(graph) == '\n'.join(expected) + '\n'

    def test_hand_graph(self):
        """Test multiplicities and numbering of virtual nodes."""
        expected = HEADER + [
            '  v0;',
            '  v1;',
            '  v2;',
            '  v0 -- v1;',
            '  v0 -- v1;',
            '  v1 -- v2;',
            '  star0 [shape=plaintext, style="", label="*"];',
            '  v2 -- star0;',
            '}',
        ]
        assert graph_to_dot(hand_graph()) == '\n'.join(expected) + '\n'


class TestWriteText:
    """Test suite for write_text."""

    def test_to_file(self, tmp_path):
        """Test writing to a path."""
        path = tmp_path / 'out.dot'
        write_text('graph {}\n', str(path))
        assert path.read_text(encoding='utf-8') == 'graph {}\n'

    def test_to_stdout(self, capsys):
        """Test writing to stdout."""
        write_text('hello\n')
        assert capsys.readouterr().out == 'hello\n'


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
