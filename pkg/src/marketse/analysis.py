#!/usr/bin/env python
# encoding: utf-8
"""
analysis.py

Monte-Carlo evaluation of the UC approximation bound for balanced markets
and seeded experiment grids comparing algorithms on random instances.

Copyright (c) MarketSE Team. All rights reserved.
"""

from __future__ import print_function
import collections
import csv
import logging
import math
import multiprocessing
import time
import warnings

import numpy as np

from marketse import DEFAULT_CALIBRATION_SAMPLES, MAX_FL_CREATORS, ALGORITHMS
from marketse.core import SolverCapError, ValidationError
from marketse.dynamics import run_dynamics
from marketse.instances import calibrate_e_bar, make_rng, sample_uniform_instance

logger = logging.getLogger(__name__)

# bound at epsilon = 0 for selected (C, K)
BOUND_REFERENCE = collections.OrderedDict([
    ((6, 4), 0.0453), ((6, 5), 1.37e-3),
    ((7, 4), 0.232), ((7, 5), 9.95e-3), ((7, 6), 1.55e-4),
    ((8, 5), 0.0328), ((8, 6), 1.95e-3), ((8, 7), 1.53e-5),
    ((9, 5), 0.239), ((9, 6), 6.61e-3), ((9, 8), 1.32e-6),
    ((10, 6), 0.0301), ((10, 7), 1.51e-3), ((10, 9), 1.02e-7),
    ((15, 8), 0.252), ((15, 9), 3.24e-3), ((15, 14), 7.48e-14),
    ((20, 11), 0.0403), ((20, 12), 3.21e-4), ((20, 19), 1.00e-20),
])

CSV_FIELDS = ['u', 'c', 'k', 'a_bar', 'dim', 'e_m', 'algorithm',
              'mean_ratio', 'ci_half_width', 'eps_hat', 'n_trials', 'n_conditioned']
_INT_FIELDS = ('u', 'c', 'k', 'a_bar', 'dim', 'n_trials', 'n_conditioned')


# ---------------------------------------------------------------------------
# bound

def evaluate_bound_mc(c, k, trials, seed, batch_size=500000):
    """Monte-Carlo estimate of the UC bound for C creators and K recommendations.

    Per trial, C sorted uniforms X_1..X_C are padded with X_0 = -inf and
    X_{C+1} = +inf, and the indices i = 1..C-K+1 with
    (X_i + X_{K+i})/2 >= K/C and (X_{i-1} + X_{K+i-1})/2 <= 1 - K/C are
    counted. The estimate is the mean count.

    Returns
    -------
    (estimate, std_error)
    """
    if not c / 2. < k < c:
        raise ValidationError('the bound needs C/2 < K < C, got C=%d, K=%d' % (c, k))
    if trials < 1:
        raise ValidationError('trials must be >= 1, got %d' % trials)

    lo, hi = float(k) / c, 1. - float(k) / c
    total, total_sq = 0., 0.
    n_batches = int(math.ceil(trials / float(batch_size)))
    for b in range(n_batches):
        n = min(batch_size, trials - b * batch_size)
        rng = make_rng((seed, b))
        X = np.empty((n, c + 2))
        X[:, 0] = -np.inf
        X[:, -1] = np.inf
        X[:, 1:-1] = np.sort(rng.random((n, c)), axis=1)
        count = np.zeros(n)
        for i in range(1, c - k + 2):
            count += ((X[:, i] + X[:, k + i]) / 2. >= lo) & ((X[:, i - 1] + X[:, k + i - 1]) / 2. <= hi)
        total += count.sum()
        total_sq += np.dot(count, count)

    mean = total / trials
    var = (total_sq - trials * mean * mean) / (trials - 1) if trials > 1 else 0.
    return mean, math.sqrt(max(var, 0.) / trials)


def adjusted_bound(estimate, epsilon):
    """Bound on E[UC/FL | FL > 0] when Pr(FL = 0) = epsilon."""
    if not 0. <= epsilon < 1.:
        raise ValidationError('epsilon must lie in [0, 1), got %r' % epsilon)
    return estimate / (1. - epsilon)


def bound_table(trials, seed, pairs=None):
    """Estimate the bound for every (C, K) pair, alongside the reference values."""
    rows = []
    for c, k in (pairs or list(BOUND_REFERENCE)):
        estimate, std_error = evaluate_bound_mc(c, k, trials, seed)
        rows.append(collections.OrderedDict([
            ('c', c), ('k', k), ('estimate', estimate), ('std_error', std_error),
            ('reference', BOUND_REFERENCE.get((c, k))),
        ]))
    return rows


# ---------------------------------------------------------------------------
# experiment grids

class ExperimentPoint(object):
    """One parameter point of an experiment grid."""

    def __init__(self, u, c, k, a_bar, dim, e_m, algorithms=('uc', 'cr1', 'cr2'), trials=1000):
        self.u, self.c, self.k, self.a_bar, self.dim = int(u), int(c), int(k), int(a_bar), int(dim)
        self.e_m = float(e_m)
        self.algorithms = [a for a in algorithms if a != 'fl']
        self.trials = int(trials)
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValidationError('unknown algorithms %r' % sorted(unknown))
        if self.trials < 1:
            raise ValidationError('trials must be >= 1')

    @classmethod
    def from_dict(cls, data):
        kwargs = dict((key, data[key]) for key in ('u', 'c', 'k', 'a_bar', 'dim', 'e_m'))
        for key in ('algorithms', 'trials'):
            if key in data:
                kwargs[key] = data[key]
        return cls(**kwargs)

    def to_dict(self):
        return collections.OrderedDict([
            ('u', self.u), ('c', self.c), ('k', self.k), ('a_bar', self.a_bar), ('dim', self.dim),
            ('e_m', self.e_m), ('algorithms', list(self.algorithms)), ('trials', self.trials)])

    def __repr__(self):
        return 'ExperimentPoint(U=%d, C=%d, K=%d, a_bar=%d, D=%d, e_m=%g)' % (
            self.u, self.c, self.k, self.a_bar, self.dim, self.e_m)


AlgorithmStats = collections.namedtuple(
    'AlgorithmStats', ['mean_ratio', 'ci_half_width', 'eps_hat', 'n_fl_zero', 'n_trials', 'n_conditioned'])


class ExperimentResult(object):
    """Per-algorithm ratio statistics at one point, conditioned on FL > 0.

    ``mean_ratio`` is NaN when every trial had FL = 0.
    """

    def __init__(self, point, e_bar, stats):
        self.point = point
        self.e_bar = e_bar
        self.stats = stats

    def __repr__(self):
        return 'ExperimentResult(%r, %s)' % (self.point, ', '.join(
            '%s=%.4f' % (name, s.mean_ratio) for name, s in self.stats.items()))


def _run_trial(task):
    point, e_bar, key = task
    inst = sample_uniform_instance(point.u, point.c, point.k, point.a_bar, point.dim, e_bar, seed=key)
    fl = run_dynamics(inst, 'fl').long_term_engagement
    values = dict((name, run_dynamics(inst, name).long_term_engagement) for name in point.algorithms)
    return fl, values


def _stats(ratios, n_trials):
    n = len(ratios)
    n_fl_zero = n_trials - n
    if n:
        mean = float(np.mean(ratios))
        ci = 1.96 * float(np.std(ratios, ddof=1)) / math.sqrt(n) if n > 1 else 0.
    else:
        mean, ci = float('nan'), 0.
    return AlgorithmStats(mean, ci, n_fl_zero / float(n_trials), n_fl_zero, n_trials, n)


class ExperimentGrid(object):
    """Seeded Monte-Carlo comparison of algorithms against FL over parameter points.

    Trial t of point p samples its instance from the stream keyed
    (seed, p, t + 1) and e_bar is calibrated from (seed, p, 0), so results
    do not depend on ``threads``.
    """

    def __init__(self, points, seed=0, threads=1):
        self.points = list(points)
        self.seed = int(seed)
        self.threads = int(threads)
        self.calibration_samples = DEFAULT_CALIBRATION_SAMPLES
        self.verbose = False

        for point in self.points:
            if point.c > MAX_FL_CREATORS:
                raise SolverCapError('point %r exceeds the FL cap of %d creators' % (point, MAX_FL_CREATORS))
            if point.u * point.k != point.c * point.a_bar:
                warnings.warn('point %r is not market-balanced (UK != C a_bar)' % (point,))

    def run(self):
        t0 = time.time()
        pool = multiprocessing.Pool(self.threads) if self.threads > 1 else None
        results = []
        try:
            for p, point in enumerate(self.points):
                t1 = time.time()
                e_bar = calibrate_e_bar(point.dim, point.e_m, self.calibration_samples, seed=(self.seed, p, 0))
                tasks = [(point, e_bar, (self.seed, p, t + 1)) for t in range(point.trials)]
                outcomes = pool.map(_run_trial, tasks) if pool else [_run_trial(task) for task in tasks]
                results.append(self._summarize_point(point, e_bar, outcomes))
                logger.info('point %d/%d %r done', p + 1, len(self.points), point)
                if self.verbose:
                    print('Complete: %r: \t%f s' % (point, time.time() - t1))
        finally:
            if pool is not None:
                pool.close()
                pool.join()
        if self.verbose:
            print('Complete: Experiment grid: \t%f s' % (time.time() - t0))
        return results

    def _summarize_point(self, point, e_bar, outcomes):
        n_trials = len(outcomes)
        stats = collections.OrderedDict()
        conditioned = [(fl, values) for fl, values in outcomes if fl > 0.]
        stats['fl'] = _stats([1.] * len(conditioned), n_trials)
        for name in point.algorithms:
            stats[name] = _stats([values[name] / fl for fl, values in conditioned], n_trials)
        return ExperimentResult(point, e_bar, stats)


def run_experiment_grid(points, algorithms=None, trials_per_point=None, seed=0, threads=1):
    """Run every point of a grid; ``algorithms`` and ``trials_per_point`` override the points' own."""
    if algorithms is not None or trials_per_point is not None:
        points = [ExperimentPoint(p.u, p.c, p.k, p.a_bar, p.dim, p.e_m,
                                  algorithms=p.algorithms if algorithms is None else algorithms,
                                  trials=p.trials if trials_per_point is None else trials_per_point)
                  for p in points]
    return ExperimentGrid(points, seed=seed, threads=threads).run()


def observation_grid(name, trials=1000, e_m=0.6, dim=10, algorithms=('uc', 'cr1', 'cr2')):
    """Preset grids: ``increase-users``, ``increase-creators`` or ``increase-k``."""
    points = []
    if name == 'increase-users':
        for k in range(1, 6):
            for u in (12, 24, 48, 96):
                points.append(ExperimentPoint(u, 6, k, u * k // 6, dim, e_m, algorithms, trials))
    elif name == 'increase-creators':
        for k in range(1, 5):
            for c in (5, 6, 7, 8, 10):
                points.append(ExperimentPoint(10, c, k, 2 * k, dim, e_m, algorithms, trials))
    elif name == 'increase-k':
        for u in (12, 24, 36, 48, 60):
            for k in range(1, 6):
                points.append(ExperimentPoint(u, 6, k, u * k // 6, dim, e_m, algorithms, trials))
    else:
        raise ValidationError('unknown preset %r' % name)
    return points


# ---------------------------------------------------------------------------
# tables

def summarize(results):
    """One row per (point, algorithm), keyed by CSV_FIELDS."""
    rows = []
    for result in results:
        p = result.point
        for name, s in result.stats.items():
            rows.append(collections.OrderedDict([
                ('u', p.u), ('c', p.c), ('k', p.k), ('a_bar', p.a_bar), ('dim', p.dim), ('e_m', p.e_m),
                ('algorithm', name), ('mean_ratio', s.mean_ratio), ('ci_half_width', s.ci_half_width),
                ('eps_hat', s.eps_hat), ('n_trials', s.n_trials), ('n_conditioned', s.n_conditioned)]))
    return rows


def _format(value):
    if isinstance(value, float):
        return '%.17g' % value
    return value


def write_csv(rows, f):
    """Write rows to an open file with floats at 17 significant digits."""
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow([_format(row[key]) for key in CSV_FIELDS])


def read_csv(f):
    rows = []
    for record in csv.DictReader(f):
        row = collections.OrderedDict()
        for key in CSV_FIELDS:
            if key == 'algorithm':
                row[key] = record[key]
            elif key in _INT_FIELDS:
                row[key] = int(record[key])
            else:
                row[key] = float(record[key])
        rows.append(row)
    return rows


def load_grid(fname, validate=True):
    """Experiment points from a JSON/YAML grid file (a list of point mappings)."""
    from marketse.market_yaml import load_grid_data
    return [ExperimentPoint.from_dict(d) for d in load_grid_data(fname, validate=validate)]
