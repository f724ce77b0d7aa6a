#!/usr/bin/env python
# encoding: utf-8
"""
dynamics.py

Repeated recommendation under two-sided departures.

Copyright (c) MarketSE Team. All rights reserved.
"""

import collections
import logging

from marketse.algorithms import RECOMMENDERS, fl_solve
from marketse.core import (Matching, MarketError, PlatformState, ValidationError,
                           surviving_players, total_engagement)

logger = logging.getLogger(__name__)


Step = collections.namedtuple('Step', ['state', 'matching', 'engagement'])


class Trajectory(object):
    """Step records up to the first fixed point.

    ``steps[t]`` holds the state at time t, the matching played and the
    engagement it produced. ``converged_at`` is the first t whose state is
    left unchanged; its engagement is the long-term engagement.
    """

    def __init__(self, steps, converged_at, long_term_engagement, algorithm=''):
        self.steps = list(steps)
        self.converged_at = converged_at
        self.long_term_engagement = float(long_term_engagement)
        self.algorithm = algorithm

    @property
    def final_state(self):
        return self.steps[-1].state

    def departures(self):
        """Players removed after each non-final step, as lists of (kind, index)."""
        out = []
        for prev, nxt in zip(self.steps[:-1], self.steps[1:]):
            gone = [('creator', j) for j in prev.state.active_creators if j not in nxt.state.active_creators]
            gone += [('user', i) for i in prev.state.active_users if i not in nxt.state.active_users]
            out.append(gone)
        return out

    def to_dict(self):
        return {
            'algorithm': self.algorithm,
            'converged_at': self.converged_at,
            'long_term_engagement': self.long_term_engagement,
            'steps': [{'t': t,
                       'state': s.state.to_dict(),
                       'matching': s.matching.to_dict(),
                       'engagement': s.engagement} for t, s in enumerate(self.steps)],
        }

    def __repr__(self):
        return 'Trajectory(%s, converged_at=%d, long_term=%.12g)' % (
            self.algorithm, self.converged_at, self.long_term_engagement)


def fl_recommender(inst):
    """Replay the maximum stable set every step.

    Users outside it get the lowest-index min(K, |C*|) creators of C* so they
    leave (or stay, if happy) after the first step.
    """
    report = fl_solve(inst)
    star_users = set(report.state.active_users)
    star_creators = list(report.state.active_creators)
    filler = star_creators[:min(inst.k, len(star_creators))]

    def recommend(inst_, state):
        active = set(state.active_creators)
        assignments = {}
        for i in state.active_users:
            cs = report.matching[i] if i in star_users else filler
            assignments[i] = [j for j in cs if j in active]
        return Matching(assignments)

    recommend.__name__ = 'fl'
    return recommend


def _resolve(inst, algorithm):
    if callable(algorithm):
        return getattr(algorithm, '__name__', 'custom'), algorithm
    name = str(algorithm).lower()
    if name == 'fl':
        return name, fl_recommender(inst)
    try:
        return name, RECOMMENDERS[name]
    except KeyError:
        raise ValidationError('unknown algorithm %r; choose from fl, %s' % (algorithm, ', '.join(sorted(RECOMMENDERS))))


def run_dynamics(inst, algorithm, max_steps=None):
    """Simulate ``algorithm`` from the full state until a fixed point.

    Parameters
    ----------
    inst : Instance
    algorithm : str or callable
        One of ``'uc'``, ``'fl'``, ``'lc'``, ``'cr1'``, ``'cr2'``, or a
        function ``(inst, state) -> Matching``.
    max_steps : int, optional
        Iteration cap, U + C + 2 by default (each non-fixed step removes a player).

    Returns
    -------
    Trajectory
    """
    name, recommend = _resolve(inst, algorithm)
    cap = inst.n_users + inst.n_creators + 2 if max_steps is None else int(max_steps)
    state = PlatformState.full(inst)
    steps = []
    for t in range(cap):
        m = recommend(inst, state)
        e = total_engagement(inst, state, m)
        steps.append(Step(state, m, e))
        nxt = surviving_players(inst, state, m)
        if nxt == state:
            logger.info('%s converged at t=%d with engagement %.12g', name, t, e)
            return Trajectory(steps, t, e, name)
        logger.debug('%s t=%d: %d users and %d creators leave', name, t,
                     len(state.active_users) - len(nxt.active_users),
                     len(state.active_creators) - len(nxt.active_creators))
        state = nxt
    raise MarketError('%s did not reach a fixed point within %d steps' % (name, cap))


def approximation_ratio(inst, algorithm, reference=None):
    """Long-term engagement of ``algorithm`` over FL's; None when FL's is 0.

    ``reference`` may pass a precomputed FL long-term engagement.
    """
    if reference is None:
        reference = run_dynamics(inst, 'fl').long_term_engagement
    if reference <= 0.:
        return None
    return run_dynamics(inst, algorithm).long_term_engagement / reference


def compare_algorithms(inst, algorithms=('uc', 'lc', 'cr1', 'cr2')):
    """Map each algorithm name to (long-term engagement, ratio to FL)."""
    reference = run_dynamics(inst, 'fl').long_term_engagement
    out = {'fl': (reference, 1. if reference > 0. else None)}
    for name in algorithms:
        if name == 'fl':
            continue
        value = run_dynamics(inst, name).long_term_engagement
        out[name] = (value, value / reference if reference > 0. else None)
    return out
