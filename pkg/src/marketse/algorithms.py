#!/usr/bin/env python
# encoding: utf-8
"""
algorithms.py

Recommendation algorithms (UC, LC, CR1, CR2) and the exact solvers behind
FL: the fixed-player engagement maximizer, the maximum stable set search and
a brute-force oracle.

Copyright (c) MarketSE Team. All rights reserved.
"""

from __future__ import print_function
import itertools
import logging
import math
import time
from collections import deque

import networkx as nx
import numpy as np

from marketse import (FLOW_SCALE, HAPPY_TOL, MAX_FL_CREATORS, MAX_BRUTE_USERS,
                      MAX_BRUTE_CREATORS, MAX_BRUTE_K)
from marketse.core import (Matching, PlatformState, ValidationError, SolverCapError,
                           InvalidPathError, check_stable_set, empty_report, _coords)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# UC

def uc_recommend(inst, state):
    """User-centric greedy: every user gets her top-min(K, |C_t|) creators.

    Ties in engagement go to the lower creator index.
    """
    creators = np.asarray(state.active_creators, dtype=int)
    if creators.size == 0 or not state.active_users:
        return Matching()
    n = min(inst.k, creators.size)
    assignments = {}
    for i in state.active_users:
        e = inst.engagements[i, creators]
        order = np.lexsort((creators, -e))
        assignments[i] = creators[order[:n]].tolist()
    return Matching(assignments)


# ---------------------------------------------------------------------------
# exact solvers

def solve_fixed_sets(inst, users, creators, k=None):
    """Maximum-engagement matching with fixed players, or None if infeasible.

    Every user in ``users`` receives exactly ``k`` (default K) happy creators
    from ``creators`` and every creator receives at least a_bar users.

    The lower bounds are written as node demands of a min-cost flow: users
    supply k units, creators demand a_bar units and a sink absorbs the
    surplus through creator arcs of capacity |U| - a_bar. Arc costs are
    engagements scaled by FLOW_SCALE and rounded; the returned engagement
    is recomputed from the integral matching.

    Returns
    -------
    (Matching, float) or None
    """
    users = sorted(set(int(i) for i in users))
    creators = sorted(set(int(j) for j in creators))
    k = inst.k if k is None else int(k)
    a_bar = inst.a_bar

    if k == 0 or not users:
        if creators and a_bar > 0:
            return None
        return Matching(), 0.
    if not creators:
        return None

    happy = inst.happy[np.ix_(users, creators)]
    if np.any(happy.sum(axis=1) < k) or np.any(happy.sum(axis=0) < a_bar):
        return None
    surplus = len(users) * k - len(creators) * a_bar
    if surplus < 0:
        return None

    G = nx.DiGraph()
    for i in users:
        G.add_node(('u', i), demand=-k)
    for j in creators:
        G.add_node(('c', j), demand=a_bar)
        G.add_edge(('c', j), 't', capacity=len(users) - a_bar, weight=0)
    G.add_node('t', demand=surplus)
    for r, i in enumerate(users):
        for s, j in enumerate(creators):
            if happy[r, s]:
                cost = -int(round(inst.engagements[i, j] * FLOW_SCALE))
                G.add_edge(('u', i), ('c', j), capacity=1, weight=cost)

    try:
        _, flow = nx.network_simplex(G)
    except nx.NetworkXUnfeasible:
        return None

    assignments = {}
    total = 0.
    for i in users:
        cs = [node[1] for node, f in flow[('u', i)].items() if f > 0]
        assignments[i] = cs
        total += float(np.sum(inst.engagements[i, cs]))
    return Matching(assignments), total


def fl_solve(inst, max_creators=MAX_FL_CREATORS):
    """Maximum stable set by creator-subset enumeration.

    For each creator subset C' every user happy with at least K creators of
    C' is included, and ``solve_fixed_sets`` decides feasibility and the
    best matching. Subsets whose optimistic bound (each eligible user's top-K
    engagements) cannot beat the incumbent are skipped.

    Returns
    -------
    StableSetReport
        The empty stable set when nothing else is feasible.

    Raises
    ------
    SolverCapError
        If C exceeds ``max_creators``.
    """
    C, K, a_bar = inst.n_creators, inst.k, inst.a_bar
    if C > max_creators:
        raise SolverCapError('fl_solve enumerates creator subsets; C=%d exceeds the cap of %d' % (C, max_creators))

    t0 = time.time()
    happy = inst.happy
    budget = inst.n_users * K
    best, best_val = None, 0.
    n_flows = 0
    for size in range(K, C + 1):
        if size * a_bar > budget:
            break
        for subset in itertools.combinations(range(C), size):
            cols = list(subset)
            users = np.flatnonzero(happy[:, cols].sum(axis=1) >= K)
            if users.size * K < size * a_bar:
                continue
            if users.size:
                sub = np.where(happy[np.ix_(users, cols)], inst.engagements[np.ix_(users, cols)], -np.inf)
                bound = float(np.sort(sub, axis=1)[:, -K:].sum())
            else:
                bound = 0.
            if bound <= best_val:
                continue
            n_flows += 1
            res = solve_fixed_sets(inst, users, cols)
            if res is None:
                continue
            m, val = res
            if val > best_val:
                best, best_val = (users.tolist(), cols, m), val

    logger.debug('fl_solve: %d flow solves, best engagement %.12g, %.3f s', n_flows, best_val, time.time() - t0)
    if best is None:
        return empty_report()
    users, cols, m = best
    return check_stable_set(inst, PlatformState(users, cols), m)


def brute_force_mss(inst, max_users=MAX_BRUTE_USERS, max_creators=MAX_BRUTE_CREATORS, max_k=MAX_BRUTE_K):
    """Exhaustive maximum stable set: creator subsets x user subsets x K-subsets per user."""
    U, C, K, a_bar = inst.n_users, inst.n_creators, inst.k, inst.a_bar
    if U > max_users or C > max_creators or K > max_k:
        raise SolverCapError('brute_force_mss caps are U<=%d, C<=%d, K<=%d; got U=%d, C=%d, K=%d'
                             % (max_users, max_creators, max_k, U, C, K))

    best = {'val': 0., 'users': (), 'creators': (), 'R': {}}
    for size in range(K, C + 1):
        for subset in itertools.combinations(range(C), size):
            _brute_subset(inst, list(subset), best)

    if not best['creators']:
        return empty_report()
    return check_stable_set(inst, PlatformState(best['users'], best['creators']), Matching(best['R']))


def _brute_subset(inst, cols, best):
    U, K, a_bar = inst.n_users, inst.k, inst.a_bar
    options = []
    for i in range(U):
        hc = inst.happy_creators(i, cols)
        options.append([None] + list(itertools.combinations(hc, K)))

    # remaining[p][j]: users at index >= p able to serve creator j
    remaining = [dict((j, 0) for j in cols) for _ in range(U + 1)]
    for p in range(U - 1, -1, -1):
        for j in cols:
            able = len(options[p]) > 1 and inst.happy[p, j]
            remaining[p][j] = remaining[p + 1][j] + int(able)

    audience = dict((j, 0) for j in cols)
    chosen = {}

    def dfs(p, val):
        if any(audience[j] + remaining[p][j] < a_bar for j in cols):
            return
        if p == U:
            if val > best['val']:
                best['val'] = val
                best['users'] = tuple(sorted(chosen))
                best['creators'] = tuple(cols)
                best['R'] = dict(chosen)
            return
        for opt in options[p]:
            if opt is None:
                dfs(p + 1, val)
                continue
            for j in opt:
                audience[j] += 1
            chosen[p] = opt
            dfs(p + 1, val + float(np.sum(inst.engagements[p, list(opt)])))
            del chosen[p]
            for j in opt:
                audience[j] -= 1

    dfs(0, 0.)


def knapsack_feasible(inst, creators):
    """Whether all users can be matched to ``creators`` when e_bar = 0: |C'| a_bar <= U min(K, |C'|)."""
    n = len(set(creators))
    return n * inst.a_bar <= inst.n_users * min(inst.k, n)


def submodularity_check(inst, users, creators, c0, c1):
    """Check f(C+{c0,c1}) - f(C+{c1}) <= f(C+{c0}) - f(C) for f the fixed-player optimum.

    With fewer than K creators every user receives all of them. Returns
    True when any of the four terms is infeasible.
    """
    if inst.e_bar != 0.:
        raise ValidationError('submodularity only holds for e_bar = 0, got %r' % inst.e_bar)
    base = set(int(j) for j in creators)
    if c0 == c1 or c0 in base or c1 in base:
        raise ValidationError('c0 and c1 must be distinct creators outside the base set')

    def f(cs):
        res = solve_fixed_sets(inst, users, cs, k=min(inst.k, len(cs)))
        return None if res is None else res[1]

    terms = [f(base), f(base | {c0}), f(base | {c1}), f(base | {c0, c1})]
    if any(t is None for t in terms):
        return True
    f_base, f_0, f_1, f_01 = terms
    # each flow optimum is exact up to the rounding of its scaled arc costs
    slack = 4. * len(users) * inst.k / FLOW_SCALE + HAPPY_TOL
    return f_01 - f_1 <= f_0 - f_base + slack


# ---------------------------------------------------------------------------
# LC

def happy_distance(e_bar):
    """Largest Euclidean distance between two unit vectors with u.c >= e_bar."""
    return 2. * math.sin(math.acos(min(max(e_bar, -1.), 1.)) / 2.)


def neighborhood_radius(e_bar):
    """Chord radius r of the ball whose sphere cross-section has diameter d."""
    d = happy_distance(e_bar)
    return 2. * math.sin(math.asin(min(d / 2., 1.)) / 2.)


def neighborhood_ball_contains(center, x, e_bar, radius=None):
    r = neighborhood_radius(e_bar) if radius is None else radius
    return float(np.linalg.norm(_coords(x) - _coords(center))) <= r + HAPPY_TOL


def _ball(center, points, idx, r):
    if not idx:
        return []
    dist = np.linalg.norm(points[idx] - center, axis=1)
    return [i for i, dd in zip(idx, dist) if dd <= r + HAPPY_TOL]


def lc_recommend(inst, state, radius=None):
    """Local clustering: match each dense neighborhood ball as one block.

    Users are scanned in index order. When the ball around an unassigned user
    holds at least a_bar unassigned users and K active creators, all of those
    users receive the K lowest-index creators of the ball. Creators may serve
    several balls. Users left over receive nothing.
    """
    r = neighborhood_radius(inst.e_bar) if radius is None else float(radius)
    free_users = list(state.active_users)
    creators = list(state.active_creators)
    assignments = {}
    for i in state.active_users:
        if i in assignments:
            continue
        center = inst.user_matrix[i]
        ball_users = _ball(center, inst.user_matrix, free_users, r)
        ball_creators = _ball(center, inst.creator_matrix, creators, r)
        if len(ball_users) < inst.a_bar or len(ball_creators) < inst.k:
            continue
        chosen = ball_creators[:inst.k]
        for u in ball_users:
            assignments[u] = chosen
        taken = set(ball_users)
        free_users = [u for u in free_users if u not in taken]
        logger.debug('lc: ball of user %d matches users %r to creators %r', i, ball_users, chosen)
    return Matching(assignments)


def density_assumption_holds(inst, radius=None):
    """Every user's ball contains at least a_bar users and K creators."""
    r = neighborhood_radius(inst.e_bar) if radius is None else float(radius)
    users = list(range(inst.n_users))
    creators = list(range(inst.n_creators))
    for i in users:
        center = inst.user_matrix[i]
        if len(_ball(center, inst.user_matrix, users, r)) < inst.a_bar:
            return False
        if len(_ball(center, inst.creator_matrix, creators, r)) < inst.k:
            return False
    return True


# ---------------------------------------------------------------------------
# CR1 / CR2

def _potential_audience(inst, users, R, j):
    return [i for i in users if inst.happy[i, j] and len(R[i]) < inst.k]


def _next_creator(inst, users, R, pending):
    best_j, best_aud = None, None
    for j in pending:
        aud = _potential_audience(inst, users, R, j)
        if best_aud is None or len(aud) < len(best_aud):
            best_j, best_aud = j, aud
    return best_j, best_aud


def cr1_recommend(inst, state):
    """Creator-centric greedy: examine creators by smallest potential audience.

    A creator whose potential audience reaches a_bar takes all of it;
    otherwise it is skipped for good.
    """
    users = list(state.active_users)
    R = dict((i, set()) for i in users)
    pending = list(state.active_creators)
    while pending:
        j, aud = _next_creator(inst, users, R, pending)
        pending.remove(j)
        if len(aud) >= inst.a_bar:
            for i in aud:
                R[i].add(j)
        else:
            logger.debug('cr1: creator %d skipped, potential audience %d < %d', j, len(aud), inst.a_bar)
    return Matching(R)


class AugmentingPath(object):
    """Alternating path from a creator.

    ``nodes`` is a sequence of ``('c', j)`` / ``('u', i)`` pairs starting at a
    creator. Creator-to-user edges are absent from the matching and
    user-to-creator edges are present. ``terminal`` is ``'user'`` or
    ``'creator'``.
    """

    __slots__ = ('nodes', 'terminal')

    def __init__(self, nodes, terminal=None):
        nodes = tuple((str(kind), int(idx)) for kind, idx in nodes)
        if len(nodes) < 2:
            raise InvalidPathError('an augmenting path needs at least one edge')
        for pos, (kind, _) in enumerate(nodes):
            expected = 'c' if pos % 2 == 0 else 'u'
            if kind != expected:
                raise InvalidPathError('node %d of %r should be a %s' % (pos, nodes, expected))
        if len(set(nodes)) != len(nodes):
            raise InvalidPathError('augmenting path repeats a node: %r' % (nodes,))
        inferred = 'user' if nodes[-1][0] == 'u' else 'creator'
        if terminal is not None and terminal != inferred:
            raise InvalidPathError('terminal %r does not match path end %r' % (terminal, nodes[-1]))
        self.nodes = nodes
        self.terminal = inferred

    @property
    def creator(self):
        return self.nodes[0][1]

    def __len__(self):
        return len(self.nodes) - 1

    def __eq__(self, other):
        return isinstance(other, AugmentingPath) and self.nodes == other.nodes

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return 'AugmentingPath(%s)' % ' -> '.join('%s%d' % (kind, idx + 1) for kind, idx in self.nodes)


def _trace(parent, node):
    path = []
    while node is not None:
        path.append(node)
        node = parent[node]
    return path[::-1]


def _search(inst, users, R, audience, j):
    # breadth-first over alternating edges; first slack user wins, else first over-threshold creator
    start = ('c', j)
    parent = {start: None}
    queue = deque([start])
    creator_end = None
    while queue:
        node = queue.popleft()
        kind, idx = node
        if kind == 'c':
            for i in users:
                nxt = ('u', i)
                if nxt in parent or not inst.happy[i, idx] or idx in R[i]:
                    continue
                parent[nxt] = node
                if len(R[i]) < inst.k:
                    return AugmentingPath(_trace(parent, nxt))
                queue.append(nxt)
        else:
            for c in sorted(R[idx]):
                nxt = ('c', c)
                if nxt in parent:
                    continue
                parent[nxt] = node
                if creator_end is None and audience.get(c, 0) > inst.a_bar:
                    creator_end = nxt
                queue.append(nxt)
    if creator_end is not None:
        return AugmentingPath(_trace(parent, creator_end))
    return None


def _apply(R, audience, path):
    nodes = path.nodes
    for pos in range(len(nodes) - 1):
        a, b = nodes[pos], nodes[pos + 1]
        if pos % 2 == 0:
            j, i = a[1], b[1]
            if j in R.setdefault(i, set()):
                raise InvalidPathError('edge c%d-u%d is already matched' % (j + 1, i + 1))
            R[i].add(j)
        else:
            i, j = a[1], b[1]
            if j not in R.get(i, ()):
                raise InvalidPathError('edge u%d-c%d is not matched' % (i + 1, j + 1))
            R[i].remove(j)
    audience[path.creator] = audience.get(path.creator, 0) + 1
    if path.terminal == 'creator':
        audience[nodes[-1][1]] -= 1


def _audiences(R):
    audience = {}
    for cs in R.values():
        for j in cs:
            audience[j] = audience.get(j, 0) + 1
    return audience


def find_augmenting_path(inst, state, m, j):
    """Shortest augmenting path for creator j, preferring paths that end at a user.

    Neighbors are explored in ascending index order. Returns None when no
    path exists.
    """
    if j not in state.active_creators:
        raise ValidationError('creator %d is not active' % j)
    users = list(state.active_users)
    R = dict((i, set(m[i])) for i in users)
    return _search(inst, users, R, _audiences(R), j)


def apply_augmenting_path(m, p):
    """Flip every edge of ``p`` in ``m``.

    The start creator gains one audience member and a terminal creator loses
    one; every other audience and recommendation count is unchanged.
    """
    R = dict((i, set(cs)) for i, cs in m.assignments.items())
    _apply(R, _audiences(R), p)
    return Matching(R)


def cr2_recommend(inst, state):
    """CR1 with augmenting paths.

    Each examined creator repeatedly applies augmenting paths. If it still
    falls short of a_bar, the paths applied for it are rolled back and it is
    skipped.
    """
    users = list(state.active_users)
    R = dict((i, set()) for i in users)
    audience = {}
    pending = list(state.active_creators)
    while pending:
        j, _ = _next_creator(inst, users, R, pending)
        pending.remove(j)
        snapshot = dict((i, set(cs)) for i, cs in R.items()), dict(audience)
        n_paths = 0
        while True:
            path = _search(inst, users, R, audience, j)
            if path is None:
                break
            _apply(R, audience, path)
            n_paths += 1
        if audience.get(j, 0) < inst.a_bar:
            R, audience = snapshot
            logger.debug('cr2: creator %d rolled back after %d paths', j, n_paths)
    return Matching(R)


RECOMMENDERS = {
    'uc': uc_recommend,
    'lc': lc_recommend,
    'cr1': cr1_recommend,
    'cr2': cr2_recommend,
}
