#!/usr/bin/env python
# encoding: utf-8
"""
reduction.py

Maximum independent set -> maximum stable set constructions and the
correspondence between stable sets and independent sets they induce.

Vertices are 1-indexed as in edge-list files; creator j of a reduced
instance is vertex j+1 and user i is edge i in input order.

Copyright (c) MarketSE Team. All rights reserved.
"""

import collections
import itertools
import logging
import math

import networkx as nx
import numpy as np

from marketse import FIXED_K_HAPPY_TOL
from marketse.algorithms import solve_fixed_sets
from marketse.core import (Instance, Matching, PlatformState, ValidationError,
                           check_stable_set)

logger = logging.getLogger(__name__)


class Graph(object):
    """Simple undirected graph on vertices 1..n with edges kept in input order."""

    def __init__(self, n, edges):
        self.n = int(n)
        if self.n < 1:
            raise ValidationError('a graph needs at least one vertex')
        self.edges = []
        seen = set()
        for p, q in edges:
            p, q = int(p), int(q)
            if p == q:
                raise ValidationError('self-loop on vertex %d' % p)
            if not (1 <= p <= self.n and 1 <= q <= self.n):
                raise ValidationError('edge (%d, %d) outside vertices 1..%d' % (p, q, self.n))
            key = (min(p, q), max(p, q))
            if key in seen:
                raise ValidationError('duplicate edge (%d, %d)' % key)
            seen.add(key)
            self.edges.append((p, q))
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(1, self.n + 1))
        self.graph.add_edges_from(self.edges)

    @property
    def m(self):
        return len(self.edges)

    def degree(self, v):
        return self.graph.degree[v]

    @property
    def max_degree(self):
        return max(d for _, d in self.graph.degree)

    def is_regular(self):
        return len(set(d for _, d in self.graph.degree)) == 1

    def is_independent(self, s):
        s = set(s)
        if not s <= set(self.graph.nodes):
            raise ValidationError('vertices %r are not in the graph' % sorted(s - set(self.graph.nodes)))
        return self.graph.subgraph(s).number_of_edges() == 0

    def independent_sets(self):
        """All independent sets, smallest first."""
        vertices = list(range(1, self.n + 1))
        for size in range(self.n + 1):
            for s in itertools.combinations(vertices, size):
                if self.is_independent(s):
                    yield frozenset(s)

    def maximum_independent_set(self):
        vertices = list(range(1, self.n + 1))
        for size in range(self.n, -1, -1):
            for s in itertools.combinations(vertices, size):
                if self.is_independent(s):
                    return frozenset(s)

    def incidence(self):
        """m x n boolean matrix: edge i touches vertex j+1."""
        out = np.zeros((self.m, self.n), dtype=bool)
        for i, (p, q) in enumerate(self.edges):
            out[i, p - 1] = out[i, q - 1] = True
        return out

    def __repr__(self):
        return 'Graph(n=%d, m=%d)' % (self.n, self.m)


def parse_graph(lines, n=None):
    """Graph from edge-list lines ``"u v"``; ``#`` starts a comment."""
    edges = []
    for lineno, line in enumerate(lines, 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValidationError('line %d: expected "u v", got %r' % (lineno, line))
        try:
            edges.append((int(fields[0]), int(fields[1])))
        except ValueError:
            raise ValidationError('line %d: vertices must be integers, got %r' % (lineno, line))
    if n is None:
        if not edges:
            raise ValidationError('edge list is empty; pass n explicitly')
        n = max(max(e) for e in edges)
    return Graph(n, edges)


def read_graph(fname, n=None):
    with open(fname, 'r') as f:
        return parse_graph(f.read().splitlines(), n=n)


# ---------------------------------------------------------------------------
# type vectors

def _g_prime(p, q):
    return np.array([1., p + q, p * p + 4. * p * q + q * q, p * p * q + p * q * q, p * p * q * q])


def _g_triple(n, p, q):
    big_n = float(n) ** 4 + float(n) ** 2 * (p * p + 4. * p * q + q * q) + (p * q) ** 2
    return _g_prime(p, q)[:4] / big_n


def _h_triple(n, j):
    return np.array([float(n) ** 4 - float(j) ** 4, 2. * j ** 3, float(n) ** 2 - j * j, 2. * j])


def reduction_constants(n, fixed_k=False):
    """Normalizers (G, H); G is floored at sqrt(2) for fixed-K reductions."""
    g_floor = math.sqrt(2.) if fixed_k else 1.
    G = max([g_floor] + [np.linalg.norm(_g_triple(n, p, q))
                         for p in range(1, n + 1) for q in range(p, n + 1)])
    H = max([1.] + [np.linalg.norm(_h_triple(n, j)) for j in range(1, n + 1)])
    return G, H


def user_type(n, p, q, G):
    g = _g_triple(n, p, q) / G
    return np.concatenate([g, [math.sqrt(max(1. - g.dot(g), 0.)), 0.]])


def creator_type(n, j, H):
    h = _h_triple(n, j) / H
    return np.concatenate([h, [0., math.sqrt(max(1. - h.dot(h), 0.))]])


def reduction_type_vectors(g, fixed_k=False):
    """Six-dimensional user (edge) and creator (vertex) types and e_bar.

    u_i.c_j = (1 - (j-p)^2 (j-q)^2 / N(p,q)) / (G H) for edge i = (p, q),
    so user i is happy exactly with the endpoints of its edge, at
    engagement e_bar = 1/(G H).

    Returns
    -------
    users : ndarray (m, 6)
    creators : ndarray (n, 6)
    e_bar : float
    """
    G, H = reduction_constants(g.n, fixed_k)
    users = np.array([user_type(g.n, p, q, G) for p, q in g.edges]).reshape(-1, 6)
    creators = np.array([creator_type(g.n, j, H) for j in range(1, g.n + 1)])
    return users, creators, 1. / (G * H)


def reduce_regular(g):
    """MSS instance of a Delta-regular graph: K = 1, a_bar = Delta."""
    if not g.m or not g.is_regular():
        raise ValidationError('reduce_regular needs a regular graph with at least one edge')
    users, creators, e_bar = reduction_type_vectors(g)
    return Instance(users, creators, k=1, e_bar=e_bar, a_bar=g.max_degree, dim=6)


def reduce_general(g):
    """MSS instance of any graph; vertex j gets Delta - deg(j) auxiliary users of type g(j, j)."""
    if not g.m:
        raise ValidationError('reduce_general needs at least one edge')
    users, creators, e_bar = reduction_type_vectors(g)
    delta = g.max_degree
    G, _ = reduction_constants(g.n)
    aux = []
    for v in range(1, g.n + 1):
        aux += [user_type(g.n, v, v, G)] * (delta - g.degree(v))
    if aux:
        users = np.vstack([users, aux])
    return Instance(users, creators, k=1, e_bar=e_bar, a_bar=delta, dim=6)


def reduce_fixed_k(g, k):
    """MSS instance with K = k >= 3 for a Delta-regular graph with Delta >= 3.

    Every edge user i gets k-1 satellite creators C_i and a_bar-1 satellite
    users U_i; one extra creator X serves every satellite user. Types are
    seven-dimensional and creators are listed originals, C_1..C_m, X.
    """
    if k < 3:
        raise ValidationError('reduce_fixed_k needs k >= 3, got %d' % k)
    if not g.m or not g.is_regular() or g.max_degree < 3:
        raise ValidationError('reduce_fixed_k needs a regular graph of degree >= 3')
    base_users, base_creators, e_bar = reduction_type_vectors(g, fixed_k=True)
    a_bar = g.max_degree
    s = math.sqrt(1. - e_bar ** 2)

    users = [np.append(u, 0.) for u in base_users]
    creators = [np.append(c, 0.) for c in base_creators]
    for u in base_users:
        users += [np.concatenate([e_bar ** 2 * u[:5], [e_bar * s, s]])] * (a_bar - 1)
    for u in base_users:
        creators += [np.concatenate([e_bar * u[:5], [s, 0.]])] * (k - 1)
    x = np.zeros(7)
    x[6] = 1.
    creators.append(x)
    inst = Instance(users, creators, k=k, e_bar=e_bar, a_bar=a_bar, dim=7, tol=FIXED_K_HAPPY_TOL)

    mismatch = inst.happy != fixed_k_happy_pattern(g, inst)
    if mismatch.any():
        # the satellite gaps shrink with n and fall below double precision on larger graphs
        raise ValidationError('%r cannot be reduced at K=%d in double precision: %d happy pairs differ from the '
                              'construction' % (g, k, int(mismatch.sum())))
    return inst


def fixed_k_happy_pattern(g, inst):
    """Happiness a fixed-K reduction must reproduce.

    Edge users are happy with both endpoints and their own satellite creators;
    satellite users with their edge's satellite creators and X.
    """
    layout = reduction_layout(g, inst)
    out = np.zeros((inst.n_users, inst.n_creators), dtype=bool)
    for i, (p, q) in enumerate(g.edges):
        out[i, [p - 1, q - 1] + layout.sat_creators[i]] = True
        for u in layout.sat_users[i]:
            out[u, layout.sat_creators[i] + [layout.x]] = True
    return out


def fixed_k_vertex_engagement(inst):
    """Engagement each chosen vertex contributes in a fixed-K reduction."""
    a, K, e = inst.a_bar, inst.k, inst.e_bar
    return (K * a * a - a * (a - 1)) * e + a * (a - 1) * math.sqrt(1. - e * e)


# ---------------------------------------------------------------------------
# stable sets <-> independent sets

Layout = collections.namedtuple('Layout', ['mode', 'aux_users', 'sat_users', 'sat_creators', 'x'])


def reduction_layout(g, inst):
    """Recover which reduction built ``inst`` from its sizes; raise on mismatch."""
    n, m, delta = g.n, g.m, g.max_degree
    if inst.a_bar != delta:
        raise ValidationError('instance a_bar=%d does not match max degree %d' % (inst.a_bar, delta))
    if inst.k == 1 and inst.n_creators == n:
        n_aux = sum(delta - g.degree(v) for v in range(1, n + 1))
        if inst.n_users == m + n_aux:
            aux, idx = {}, m
            for v in range(1, n + 1):
                aux[v] = list(range(idx, idx + delta - g.degree(v)))
                idx += delta - g.degree(v)
            mode = 'regular' if n_aux == 0 else 'general'
            return Layout(mode, aux, {}, {}, None)
    elif inst.k >= 3 and inst.n_creators == n + m * (inst.k - 1) + 1 and inst.n_users == m * delta:
        sat_users = dict((i, list(range(m + i * (delta - 1), m + (i + 1) * (delta - 1)))) for i in range(m))
        sat_creators = dict((i, list(range(n + i * (inst.k - 1), n + (i + 1) * (inst.k - 1)))) for i in range(m))
        return Layout('fixed-k', {}, sat_users, sat_creators, n + m * (inst.k - 1))
    raise ValidationError('%r was not reduced from %r' % (inst, g))


def _induced_creators(g, layout, s):
    creators = set(v - 1 for v in s)
    if layout.mode == 'fixed-k' and s:
        for i, (p, q) in enumerate(g.edges):
            if p in s or q in s:
                creators.update(layout.sat_creators[i])
        creators.add(layout.x)
    return sorted(creators)


def enumerate_stable_sets(g, inst):
    """Best stable set induced by every vertex subset.

    For each subset S the induced creators are fixed and every user happy
    with at least K of them is included. Returns {frozenset(S): engagement},
    with None where no stable set exists.
    """
    layout = reduction_layout(g, inst)
    out = {}
    vertices = list(range(1, g.n + 1))
    for size in range(g.n + 1):
        for s in itertools.combinations(vertices, size):
            creators = _induced_creators(g, layout, set(s))
            if creators:
                users = np.flatnonzero(inst.happy[:, creators].sum(axis=1) >= inst.k)
            else:
                users = []
            res = solve_fixed_sets(inst, users, creators)
            out[frozenset(s)] = None if res is None else res[1]
    logger.debug('enumerate_stable_sets: %d subsets, %d feasible', len(out),
                 sum(v is not None for v in out.values()))
    return out


def stable_to_independent(g, inst, report):
    """Vertices whose original creators survive in a stable set of the reduced instance."""
    reduction_layout(g, inst)
    if not report.is_stable:
        raise ValidationError('report is not a stable set: %r' % (report.violations[:3],))
    s = frozenset(j + 1 for j in report.state.active_creators if j < g.n)
    if not g.is_independent(s):
        raise ValidationError('stable set maps to dependent vertices %r; wrong graph?' % sorted(s))
    return s


def independent_to_stable(g, inst, s):
    """The stable set induced by an independent set ``s`` (1-indexed vertices)."""
    layout = reduction_layout(g, inst)
    s = set(int(v) for v in s)
    if not g.is_independent(s):
        raise ValidationError('%r is not an independent set' % sorted(s))

    assignments = {}
    for i, (p, q) in enumerate(g.edges):
        chosen = [v for v in (p, q) if v in s]
        if not chosen:
            continue
        j = chosen[0] - 1
        if layout.mode == 'fixed-k':
            assignments[i] = [j] + layout.sat_creators[i]
            for u in layout.sat_users[i]:
                assignments[u] = layout.sat_creators[i] + [layout.x]
        else:
            assignments[i] = [j]
    for v in s:
        for u in layout.aux_users.get(v, ()):
            assignments[u] = [v - 1]

    state = PlatformState(assignments.keys(), _induced_creators(g, layout, s))
    return check_stable_set(inst, state, Matching(assignments))
