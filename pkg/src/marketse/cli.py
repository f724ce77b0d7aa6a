#!/usr/bin/env python
# encoding: utf-8
"""
cli.py

Command-line entry point: build instances, simulate and solve them, reduce
graphs, evaluate the approximation bound and run experiment grids.

Copyright (c) MarketSE Team. All rights reserved.
"""

from __future__ import print_function
import argparse
import io
import json
import logging
import sys
import warnings

import jsonschema
from ruamel.yaml import YAMLError

from marketse import ALGORITHMS, MAX_FL_CREATORS
from marketse.algorithms import fl_solve
from marketse.analysis import (BOUND_REFERENCE, adjusted_bound, bound_table, evaluate_bound_mc, load_grid,
                               observation_grid, run_experiment_grid, summarize, write_csv)
from marketse.core import MarketError, SolverCapError, ValidationError
from marketse.dynamics import run_dynamics
from marketse.instances import EXAMPLES, sample_uniform_instance
from marketse.market_openmdao import compare_with_openmdao
from marketse.market_yaml import JSONFloatEncoder, load_instance
from marketse.reduction import (fixed_k_vertex_engagement, read_graph, reduce_fixed_k, reduce_general,
                                reduce_regular)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_SOLVER_CAP = 3

PRESETS = ('increase-users', 'increase-creators', 'increase-k')


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on bad input; report through the exit code instead
    def error(self, message):
        raise _ArgumentError('%s: error: %s' % (self.prog, message))


def _alg_list(text):
    names = [a.strip().lower() for a in text.split(',') if a.strip()]
    unknown = [a for a in names if a not in ALGORITHMS]
    if unknown:
        raise argparse.ArgumentTypeError('unknown algorithms: %s' % ', '.join(unknown))
    return names


def _emit(text, out):
    if out:
        with io.open(out, 'w', encoding='utf-8') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(data, out):
    _emit(json.dumps(data, indent=2, sort_keys=True, cls=JSONFloatEncoder) + '\n', out)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_example(args):
    name = args.name
    if name == 'simple':
        inst = EXAMPLES['simple']()
    elif name == 'megacrown':
        inst = EXAMPLES['megacrown'](args.m, n_hint=args.n_hint)
    elif name == 'cascade':
        inst = EXAMPLES['cascade'](args.n)
    elif name == 'flower':
        inst = EXAMPLES['flower'](args.a_bar if args.a_bar is not None else 8, args.d)
    elif name == 'two-creator':
        inst = EXAMPLES['two-creator'](args.a_bar if args.a_bar is not None else 4)
    else:
        missing = [opt for opt, val in (('--u', args.u), ('--c', args.c), ('--k', args.k), ('--a-bar', args.a_bar),
                                        ('--e-bar', args.e_bar)) if val is None]
        if missing:
            raise ValidationError('uniform example needs %s' % ', '.join(missing))
        inst = sample_uniform_instance(args.u, args.c, args.k, args.a_bar, args.dim, args.e_bar, seed=args.seed)
    _emit_json(inst.to_dict(), args.out)


def _cmd_simulate(args):
    inst = load_instance(args.instance)
    traj = run_dynamics(inst, args.alg, max_steps=args.max_steps)
    _emit_json(traj.to_dict(), args.out)


def _cmd_solve(args):
    inst = load_instance(args.instance)
    report = fl_solve(inst, max_creators=args.max_creators)
    _emit_json(report.to_dict(), args.out)


def _cmd_reduce(args):
    g = read_graph(args.graph)
    if args.mode == 'regular':
        inst = reduce_regular(g)
    elif args.mode == 'general':
        inst = reduce_general(g)
    else:
        if args.k is None:
            raise ValidationError('--mode fixed-k needs --k')
        inst = reduce_fixed_k(g, args.k)
    per_vertex = fixed_k_vertex_engagement(inst) if args.mode == 'fixed-k' else inst.e_bar * inst.a_bar
    _emit_json({
        'mode': args.mode,
        'graph': {'n': g.n, 'edges': [list(e) for e in g.edges]},
        'engagement_per_vertex': per_vertex,
        'instance': inst.to_dict(),
    }, args.out)


def _cmd_bound(args):
    if args.table:
        rows = bound_table(args.trials, args.seed)
    else:
        if args.c is None or args.k is None:
            raise ValidationError('bound needs --c and --k (or --table)')
        estimate, std_error = evaluate_bound_mc(args.c, args.k, args.trials, args.seed)
        rows = [{'c': args.c, 'k': args.k, 'estimate': estimate, 'std_error': std_error,
                 'reference': BOUND_REFERENCE.get((args.c, args.k))}]
    for row in rows:
        row['trials'] = args.trials
        row['adjusted'] = adjusted_bound(row['estimate'], args.epsilon)
    _emit_json(rows if args.table else rows[0], args.out)


def _cmd_experiment(args):
    if (args.grid is None) == (args.preset is None):
        raise ValidationError('experiment needs exactly one of --grid or --preset')
    if args.grid is not None:
        points = load_grid(args.grid)
        if args.trials is not None:
            warnings.warn('--trials overrides the trial counts in %s' % args.grid)
    else:
        points = observation_grid(args.preset, trials=args.trials or 200)
    results = run_experiment_grid(points, algorithms=args.algs, trials_per_point=args.trials,
                                  seed=args.seed, threads=args.threads)
    buf = io.StringIO()
    write_csv(summarize(results), buf)
    _emit(buf.getvalue(), args.out)


def _cmd_compare(args):
    inst = load_instance(args.instance)
    out = compare_with_openmdao(inst, args.algs)
    _emit_json(dict((name, {'long_term_engagement': v, 'ratio': r}) for name, (v, r) in out.items()), args.out)


# ---------------------------------------------------------------------------
# parser

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument('--out', default=None, help='write output to this file instead of stdout')
    common.add_argument('--verbose', action='store_true', help='log progress to stderr')

    parser = _Parser(prog='marketse', description='Recommendation markets with user and creator departures.')
    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('example', parents=[common], help='emit a built-in instance as JSON')
    p.add_argument('name', choices=sorted(EXAMPLES) + ['uniform'])
    p.add_argument('--m', type=int, default=3)
    p.add_argument('--n-hint', type=int, default=4)
    p.add_argument('--n', type=int, default=5)
    p.add_argument('--a-bar', type=int, default=None)
    p.add_argument('--d', type=float, default=0.3)
    p.add_argument('--u', type=int, default=None)
    p.add_argument('--c', type=int, default=None)
    p.add_argument('--k', type=int, default=None)
    p.add_argument('--dim', type=int, default=10)
    p.add_argument('--e-bar', type=float, default=None)
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=_cmd_example)

    p = sub.add_parser('simulate', parents=[common], help='run the dynamics of one algorithm')
    p.add_argument('--instance', default='-', help="instance file, '-' (default) for stdin")
    p.add_argument('--alg', required=True, choices=ALGORITHMS)
    p.add_argument('--max-steps', type=int, default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser('solve', parents=[common], help='maximum stable set')
    p.add_argument('--instance', default='-', help="instance file, '-' (default) for stdin")
    p.add_argument('--max-creators', type=int, default=MAX_FL_CREATORS)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser('reduce', parents=[common], help='reduce a graph to a stable-set instance')
    p.add_argument('--graph', required=True, help='edge list, one "u v" pair per line')
    p.add_argument('--mode', required=True, choices=('regular', 'general', 'fixed-k'))
    p.add_argument('--k', type=int, default=None)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser('bound', parents=[common], help='Monte-Carlo UC approximation bound')
    p.add_argument('--c', type=int, default=None)
    p.add_argument('--k', type=int, default=None)
    p.add_argument('--trials', type=int, default=1000000)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--epsilon', type=float, default=0.)
    p.add_argument('--table', action='store_true', help='evaluate every reference (C, K) pair')
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser('experiment', parents=[common], help='seeded algorithm comparison grid, CSV output')
    p.add_argument('--grid', default=None)
    p.add_argument('--preset', default=None, choices=PRESETS)
    p.add_argument('--algs', type=_alg_list, default=None)
    p.add_argument('--trials', type=int, default=None)
    p.add_argument('--threads', type=int, default=1)
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser('compare', parents=[common], help='compare algorithms to FL through OpenMDAO')
    p.add_argument('--instance', default='-', help="instance file, '-' (default) for stdin")
    p.add_argument('--algs', type=_alg_list, default=['uc', 'lc', 'cr1', 'cr2'])
    p.set_defaults(func=_cmd_compare)

    return parser


def cli_main(argv=None):
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as err:
        print(err, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as err:
        # --help
        return err.code if isinstance(err.code, int) else EXIT_INVALID
    if not getattr(args, 'command', None):
        print('marketse: error: a subcommand is required', file=sys.stderr)
        return EXIT_INVALID

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except SolverCapError as err:
        print('marketse: solver cap exceeded: %s' % err, file=sys.stderr)
        return EXIT_SOLVER_CAP
    except (ValidationError, jsonschema.ValidationError, YAMLError, ValueError, KeyError, IOError, OSError) as err:
        msg = err.message if isinstance(err, jsonschema.ValidationError) else err
        print('marketse: invalid input: %s' % msg, file=sys.stderr)
        return EXIT_INVALID
    except MarketError as err:
        print('marketse: %s' % err, file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def main():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == '__main__':
    main()
