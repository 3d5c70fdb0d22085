#!/usr/bin/env python3
"""
Classifying Graph Command Line
Subcommands for ramification data, classifying graphs, containment loci,
the combinatorial bound suites and the full per-prime report.

Exit codes: 0 success, 1 usage, 2 precondition violated, 3 internal failure.
JSON goes to stdout (or --json PATH); status lines go to stderr.
"""

import argparse
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from sympy import isprime

try:
    from .classifying_graph import (build_classifying_graph, containment_locus, edge_reconciliation,
                                    endpoints_cross_check, expected_mass, mass_check,
                                    omega_depth_and_universal_embedding, shift_check)
    from .errors import InternalError, PreconditionError, QuatGraphError
    from .graph_bounds import (check_prop51, check_prop52, nailfork_reduce, random_bipartite, random_graph,
                               theorem_verdicts)
    from .orders_ideals import eichler_order, embed_quadratic, maximal_order
    from .quat_algebra import INFINITY, QuatElement, QuaternionAlgebra, algebra_for_ramification
    from .report_io import dumps, graph_to_dot, graph_to_json, write_text
except ImportError:
    sys.path.insert(0, os.path.dirname(__file__))
    from classifying_graph import (build_classifying_graph, containment_locus, edge_reconciliation,
                                   endpoints_cross_check, expected_mass, mass_check,
                                   omega_depth_and_universal_embedding, shift_check)
    from errors import InternalError, PreconditionError, QuatGraphError
    from graph_bounds import (check_prop51, check_prop52, nailfork_reduce, random_bipartite, random_graph,
                              theorem_verdicts)
    from orders_ideals import eichler_order, embed_quadratic, maximal_order
    from quat_algebra import INFINITY, QuatElement, QuaternionAlgebra, algebra_for_ramification
    from report_io import dumps, graph_to_dot, graph_to_json, write_text


class Reporter:
    """Human-facing status output, kept off stdout."""

    def __init__(self, stream=None):
        self.stream = stream if stream is not None else sys.stderr

    def h1_message(self, message):
        print("\n" + "="*50, file=self.stream)
        print(message, file=self.stream)
        print("="*50, file=self.stream)

    def status(self, message):
        print(message, file=self.stream)

    def success(self, message):
        print(f"✓ {message}", file=self.stream)

    def failure(self, message):
        print(f"✗ {message}", file=self.stream)


@dataclass
class RunConfig:
    """Everything one invocation needs, validated before dispatch."""

    command: str
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None
    ramified_prime: Optional[int] = None
    prime: int = 2
    level: int = 1
    radius: int = 6
    seed: Optional[int] = None
    json_path: Optional[str] = None
    dot_path: Optional[str] = None
    trace: Optional[int] = None
    norm: Optional[int] = None
    gens: tuple = ()
    prop: Optional[str] = None
    samples: int = 1000

    @classmethod
    def from_args(cls, args):
        return cls(
            command=args.command,
            a=getattr(args, 'a', None),
            b=getattr(args, 'b', None),
            ramified_prime=getattr(args, 'ramified_prime', None),
            prime=getattr(args, 'prime', 2),
            level=getattr(args, 'level', 1),
            radius=getattr(args, 'radius', 6),
            seed=getattr(args, 'seed', None),
            json_path=getattr(args, 'json', None),
            dot_path=getattr(args, 'dot', None),
            trace=getattr(args, 'trace', None),
            norm=getattr(args, 'norm', None),
            gens=tuple(getattr(args, 'gen', None) or ()),
            prop=getattr(args, 'prop', None),
            samples=getattr(args, 'samples', 1000),
        )

    def validate(self):
        """
        Raises:
            PreconditionError: inconsistent or out-of-range settings
        """
        if self.command in ('graph', 'locus') and self.ramified_prime is None and (self.a is None or self.b is None):
            raise PreconditionError("give -a and -b, or --ramified-prime")
        if self.command == 'report' and self.ramified_prime is None:
            raise PreconditionError("report needs --ramified-prime")
        if self.command == 'ramify' and (self.a is None or self.b is None):
            raise PreconditionError("ramify needs -a and -b")
        if not isprime(self.prime):
            raise PreconditionError(f"--prime {self.prime} is not prime")
        if self.level < 1:
            raise PreconditionError("--level must be positive")
        if self.radius < 0:
            raise PreconditionError("--radius must be nonnegative")
        if self.samples < 0:
            raise PreconditionError("--samples must be nonnegative")
        if self.command == 'locus' and not self.gens and (self.trace is None or self.norm is None):
            raise PreconditionError("locus needs --trace and --norm, or --gen")

    def algebra(self):
        if self.ramified_prime is not None:
            return algebra_for_ramification(self.ramified_prime)
        return QuaternionAlgebra(self.a, self.b)


def _coords(x):
    return [str(c) for c in x.coords]


def _parse_gen(text, algebra):
    parts = [p.strip() for p in text.split(',')]
    if len(parts) != 4:
        raise PreconditionError(f"generator {text!r} needs 4 coordinates")
    try:
        return QuatElement(algebra, tuple(Fraction(p) for p in parts))
    except (ValueError, ZeroDivisionError):
        raise PreconditionError(f"generator {text!r} is not rational")


def cmd_ramify(config):
    algebra = QuaternionAlgebra(config.a, config.b)
    return {
        'a': str(algebra.a),
        'b': str(algebra.b),
        'ramified': list(algebra.ramified_primes),
        'infinite': INFINITY in algebra.ramified_places,
        'definite': algebra.is_definite,
    }


def _genus_order(config, algebra):
    order = maximal_order(algebra)
    if config.level != 1:
        order = eichler_order(order, config.level)
    return order


def cmd_graph(config, reporter):
    """Returns (graph, JSON document, DOT text)."""
    algebra = config.algebra()
    reporter.status(f"Algebra {algebra}, ramified at {list(algebra.ramified_primes)} and infinity")
    order = _genus_order(config, algebra)
    graph = build_classifying_graph(order, config.prime, progress=reporter.status)
    verdicts = theorem_verdicts(graph)
    return graph, graph_to_json(graph, verdicts), graph_to_dot(graph)


def cmd_locus(config, reporter):
    algebra = config.algebra()
    base = maximal_order(algebra)
    if config.gens:
        gens = [_parse_gen(text, algebra) for text in config.gens]
    else:
        u = embed_quadratic(base, config.trace, config.norm)
        if u is None:
            raise PreconditionError(
                f"x^2 - {config.trace}x + {config.norm} has no root in the maximal order")
        gens = [u]
    reporter.status(f"Generators: {', '.join(str(g) for g in gens)}")
    report = containment_locus(gens, base, config.prime, config.radius)
    doc = {
        'generators': [_coords(g) for g in gens],
        'shape': report.shape,
        'size': len(report.vertices),
        'radius': report.radius_searched,
        'certified': report.boundary_certified,
        'vertices': [list(v.key) for v in report.vertices],
        'depths': report.depths,
        'edges': [list(e) for e in report.edges],
    }
    if report.shape == 'unbounded-path' and len(gens) == 1 and abs(gens[0].nrd()) == config.prime:
        doc['shift'] = shift_check(gens[0], report)
    return doc


def _bipartite_sizes(rng):
    n_a = rng.randint(1, 20)
    n_b = rng.randint(max(1, n_a // 2), 2 * n_a + 1)
    return n_a, n_b


def cmd_props(config):
    """Random property suite for one of the two endpoint bounds."""
    rng = random.Random(config.seed)
    violations = 0
    equality_cases = []
    for index in range(config.samples):
        seed = rng.randrange(2 ** 32)
        if config.prop == '5.1':
            graph = random_graph(rng.randint(1, 40), 3, seed)
            report = check_prop51(graph)
            if not (report.bound_holds and report.equality_characterization_holds and report.intermediate_holds):
                violations += 1
        else:
            graph = random_bipartite(*_bipartite_sizes(rng), seed=seed)
            report = check_prop52(graph)
            reduced = check_prop52(nailfork_reduce(graph))
            if not (report.bound_holds and report.equality_characterization_holds
                    and reduced.conditions_hold and reduced.identities_hold
                    and reduced.t == report.t and reduced.r >= report.r):
                violations += 1
        if report.equality:
            equality_cases.append({'sample': index, 'n': report.n, 'r': report.r, 't': report.t})
    return {
        'prop': config.prop,
        'samples': config.samples,
        'seed': config.seed,
        'violations': violations,
        'equality_cases': equality_cases,
    }


def cmd_report(config, reporter):
    """Graph, endpoint check, mass check, verdicts, distances and loci for one algebra."""
    graph, doc, dot = cmd_graph(config, reporter)
    reporter.success(f"{graph.n} classes, {graph.r} endpoints")

    mass_check(graph)
    reporter.success(f"Mass {expected_mass(graph)} matches")
    doc['mass'] = str(expected_mass(graph))
    doc['edge_reconciliation'] = edge_reconciliation(graph)['ok']

    if graph.p == 2:
        cross = endpoints_cross_check(graph)
        doc['endpoints_cross_check'] = cross
        if cross['ok']:
            reporter.success("Endpoints match cube roots of unity")
        else:
            reporter.failure(f"Endpoint mismatch at classes {cross['violations']}")

    if graph.r:
        depth = omega_depth_and_universal_embedding(graph)
        doc['omega_depth'] = {
            'rho': depth['rho'],
            'ok': depth['ok'],
            'witnesses': {str(k): _coords(x) if x is not None else None for k, x in depth['witnesses'].items()},
        }
        loci = []
        for v in graph.vertices:
            if not v.is_endpoint:
                continue
            omega = embed_quadratic(v.representative, -1, 1)
            locus = containment_locus([omega], v.representative, graph.p, config.radius)
            loci.append({'vertex': v.id, 'shape': locus.shape, 'certified': locus.boundary_certified})
        doc['omega_loci'] = loci
    return graph, doc, dot


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-a', type=Fraction, help='i^2 = a')
    common.add_argument('-b', type=Fraction, help='j^2 = b')
    common.add_argument('--ramified-prime', type=int, help='use an algebra ramified exactly at P and infinity')
    common.add_argument('--prime', type=int, default=2, help='prime of the tree (default 2)')
    common.add_argument('--level', type=int, default=1, help='odd squarefree Eichler level (default 1)')
    common.add_argument('--radius', type=int, default=6, help='tree search radius (default 6)')
    common.add_argument('--seed', type=int, help='random seed')
    common.add_argument('--json', metavar='PATH', help='write JSON here instead of stdout')
    common.add_argument('--dot', metavar='PATH', help='write DOT here')

    parser = QuatArgumentParser(prog='quatgraph', description='Classifying graphs of definite quaternion orders')
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('ramify', parents=[common], help='ramified places of (a, b)')
    sub.add_parser('graph', parents=[common], help='classifying graph of the genus')
    locus = sub.add_parser('locus', parents=[common], help='maximal orders containing given elements')
    locus.add_argument('--trace', type=int, help='trace of a generator')
    locus.add_argument('--norm', type=int, help='norm of a generator')
    locus.add_argument('--gen', action='append', metavar='W,X,Y,Z', help='generator coordinates (repeatable)')
    props = sub.add_parser('props', parents=[common], help='random checks of the endpoint bounds')
    props.add_argument('prop', choices=['5.1', '5.2'])
    props.add_argument('--samples', type=int, default=1000)
    sub.add_parser('report', parents=[common], help='full pipeline for one ramified prime')
    return parser


class QuatArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def main(argv=None):
    """Main entry point."""
    args = build_parser().parse_args(argv)
    reporter = Reporter()
    try:
        config = RunConfig.from_args(args)
        config.validate()
        reporter.h1_message(f"quatgraph {config.command}")
        dot = None
        if config.command == 'ramify':
            doc = cmd_ramify(config)
        elif config.command == 'graph':
            _, doc, dot = cmd_graph(config, reporter)
        elif config.command == 'locus':
            doc = cmd_locus(config, reporter)
        elif config.command == 'props':
            doc = cmd_props(config)
        else:
            _, doc, dot = cmd_report(config, reporter)

        write_text(dumps(doc), config.json_path)
        if dot is not None and config.dot_path:
            write_text(dot, config.dot_path)
        reporter.success("Done")
        return 0
    except QuatGraphError as e:
        reporter.failure(f"Error: {e}")
        return e.exit_code
    except Exception as e:
        reporter.failure(f"Internal error: {type(e).__name__}: {e}")
        return InternalError.exit_code


if __name__ == '__main__':
    sys.exit(main())
