#!/usr/bin/env python
# encoding: utf-8
"""
core.py

Domain types, engagement arithmetic and participation constraints shared by
every MarketSE module.

Copyright (c) MarketSE Team. All rights reserved.
"""

from __future__ import print_function
import logging
import numbers

import numpy as np

from marketse import HAPPY_TOL, NORM_TOL

logger = logging.getLogger(__name__)


class MarketError(Exception):
    """Base class for MarketSE errors."""


class ValidationError(MarketError, ValueError):
    """Input data violates a precondition or invariant."""


class SolverCapError(MarketError):
    """An exact solver was asked for more than its configured cap."""


class InvalidPathError(ValidationError):
    """An augmenting path is not valid for the matching it is applied to."""


def _as_int(value, name, minimum):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise ValidationError('%s must be an integer, got %r' % (name, value))
    value = int(value)
    if value < minimum:
        raise ValidationError('%s must be >= %d, got %d' % (name, minimum, value))
    return value


class TypeVector(object):
    """A user preference or creator profile: a nonnegative unit vector.

    Coordinates in [-NORM_TOL, 0) are clipped to zero. Vectors are never
    renormalized; use ``instances.embed_unit_vectors`` for raw data.
    """

    __slots__ = ('coords',)

    def __init__(self, coords):
        x = np.array(coords, dtype=float).ravel()
        if x.size == 0:
            raise ValidationError('type vector has no coordinates')
        if not np.all(np.isfinite(x)):
            raise ValidationError('type vector has non-finite coordinates: %r' % (x,))
        if np.any(x < -NORM_TOL):
            raise ValidationError('type vector has negative coordinates: %r' % (x,))
        x[x < 0.] = 0.
        norm = np.linalg.norm(x)
        if abs(norm - 1.) > NORM_TOL:
            raise ValidationError('type vector norm %.12g is not 1' % norm)
        x.setflags(write=False)
        self.coords = x

    @property
    def dim(self):
        return self.coords.size

    def __len__(self):
        return self.coords.size

    def __iter__(self):
        return iter(self.coords.tolist())

    def __eq__(self, other):
        return isinstance(other, TypeVector) and np.array_equal(self.coords, other.coords)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(tuple(self.coords.tolist()))

    def __repr__(self):
        return 'TypeVector(%r)' % (self.coords.tolist(),)

    def tolist(self):
        return self.coords.tolist()


def _coords(x):
    if isinstance(x, TypeVector):
        return x.coords
    return np.asarray(x, dtype=float).ravel()


class Instance(object):
    """Problem data: user and creator types plus the thresholds K, e_bar and a_bar.

    Parameters
    ----------
    users, creators : sequence of TypeVector or array_like
        Type vectors, all of length ``dim``.
    k : int
        Recommendations per user (K >= 1).
    e_bar : float
        User engagement threshold in [0, 1].
    a_bar : int
        Creator audience threshold (>= 0).
    dim : int, optional
        Type dimension, inferred from the first user when omitted.
    tol : float, optional
        Happiness tolerance, ``u.c >= e_bar - tol`` counts as happy.

    The engagement matrix ``engagements`` (U x C) and the boolean ``happy``
    matrix are computed once at construction.
    """

    def __init__(self, users, creators, k, e_bar, a_bar, dim=None, tol=HAPPY_TOL):
        self.users = [u if isinstance(u, TypeVector) else TypeVector(u) for u in users]
        self.creators = [c if isinstance(c, TypeVector) else TypeVector(c) for c in creators]
        if not self.users:
            raise ValidationError('an instance needs at least one user')
        if not self.creators:
            raise ValidationError('an instance needs at least one creator')

        self.k = _as_int(k, 'k', 1)
        self.a_bar = _as_int(a_bar, 'a_bar', 0)
        self.dim = _as_int(dim if dim is not None else self.users[0].dim, 'dim', 1)

        e_bar = float(e_bar)
        if not 0. <= e_bar <= 1.:
            raise ValidationError('e_bar must lie in [0, 1], got %r' % e_bar)
        self.e_bar = e_bar
        tol = float(tol)
        if tol < 0.:
            raise ValidationError('tol must be nonnegative, got %r' % tol)
        self.tol = tol

        for kind, vectors in (('user', self.users), ('creator', self.creators)):
            for idx, v in enumerate(vectors):
                if v.dim != self.dim:
                    raise ValidationError('%s %d has dimension %d, expected %d' % (kind, idx, v.dim, self.dim))

        self.user_matrix = np.vstack([u.coords for u in self.users])
        self.creator_matrix = np.vstack([c.coords for c in self.creators])
        self.engagements = self.user_matrix.dot(self.creator_matrix.T)
        self.happy = self.engagements >= self.e_bar - self.tol
        for arr in (self.user_matrix, self.creator_matrix, self.engagements, self.happy):
            arr.setflags(write=False)

    @property
    def n_users(self):
        return len(self.users)

    @property
    def n_creators(self):
        return len(self.creators)

    def engagement(self, i, j):
        return float(self.engagements[i, j])

    def is_happy(self, i, j):
        return bool(self.happy[i, j])

    def happy_creators(self, i, creators=None):
        """Creators user i is happy with, ascending, optionally restricted to ``creators``."""
        row = self.happy[i]
        if creators is None:
            return [int(j) for j in np.flatnonzero(row)]
        return [j for j in sorted(creators) if row[j]]

    def happy_users(self, j, users=None):
        col = self.happy[:, j]
        if users is None:
            return [int(i) for i in np.flatnonzero(col)]
        return [i for i in sorted(users) if col[i]]

    def to_dict(self):
        data = {
            'dim': self.dim,
            'k': self.k,
            'e_bar': self.e_bar,
            'a_bar': self.a_bar,
            'users': [u.tolist() for u in self.users],
            'creators': [c.tolist() for c in self.creators],
        }
        if self.tol != HAPPY_TOL:
            data['tol'] = self.tol
        return data

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data['users'], data['creators'], data['k'], data['e_bar'], data['a_bar'],
                       dim=data['dim'], tol=data.get('tol', HAPPY_TOL))
        except KeyError as err:
            raise ValidationError('instance is missing field %s' % err)
        except TypeError as err:
            raise ValidationError('malformed instance: %s' % err)

    def __repr__(self):
        return 'Instance(U=%d, C=%d, K=%d, e_bar=%.6g, a_bar=%d, D=%d)' % (
            self.n_users, self.n_creators, self.k, self.e_bar, self.a_bar, self.dim)


class PlatformState(object):
    """Surviving users and creators at one time step, kept as sorted tuples."""

    __slots__ = ('active_users', 'active_creators')

    def __init__(self, active_users=(), active_creators=()):
        self.active_users = tuple(sorted(set(int(i) for i in active_users)))
        self.active_creators = tuple(sorted(set(int(j) for j in active_creators)))

    @classmethod
    def full(cls, inst):
        return cls(range(inst.n_users), range(inst.n_creators))

    @classmethod
    def empty(cls):
        return cls()

    def is_empty(self):
        return not self.active_users and not self.active_creators

    def validate(self, inst):
        for kind, idx, n in (('user', self.active_users, inst.n_users),
                             ('creator', self.active_creators, inst.n_creators)):
            if idx and (idx[0] < 0 or idx[-1] >= n):
                raise ValidationError('%s indices %r fall outside range(%d)' % (kind, idx, n))
        return self

    def issubset(self, other):
        return (set(self.active_users) <= set(other.active_users)
                and set(self.active_creators) <= set(other.active_creators))

    def __eq__(self, other):
        return (isinstance(other, PlatformState)
                and self.active_users == other.active_users
                and self.active_creators == other.active_creators)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.active_users, self.active_creators))

    def __repr__(self):
        return 'PlatformState(users=%r, creators=%r)' % (list(self.active_users), list(self.active_creators))

    def to_dict(self):
        return {'active_users': list(self.active_users), 'active_creators': list(self.active_creators)}


class Matching(object):
    """Recommendations R_t: user index -> frozenset of creator indices.

    Users without an entry receive the empty set.
    """

    __slots__ = ('assignments',)

    def __init__(self, assignments=None):
        assignments = assignments or {}
        self.assignments = dict((int(i), frozenset(int(j) for j in cs)) for i, cs in assignments.items())

    def __getitem__(self, i):
        return self.assignments.get(i, frozenset())

    def __contains__(self, i):
        return i in self.assignments

    def __len__(self):
        return len(self.assignments)

    def items(self):
        return sorted(self.assignments.items())

    def users(self):
        return sorted(self.assignments)

    def pairs(self):
        """All (user, creator) pairs, sorted."""
        return sorted((i, j) for i, cs in self.assignments.items() for j in cs)

    def __eq__(self, other):
        if not isinstance(other, Matching):
            return False
        mine = dict((i, cs) for i, cs in self.assignments.items() if cs)
        theirs = dict((i, cs) for i, cs in other.assignments.items() if cs)
        return mine == theirs

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return 'Matching(%r)' % (dict((i, sorted(cs)) for i, cs in self.items()),)

    def to_dict(self):
        return dict((str(i), sorted(cs)) for i, cs in self.items())

    @classmethod
    def from_dict(cls, data):
        assignments = {}
        for key, cs in data.items():
            cs = [int(j) for j in cs]
            if len(set(cs)) != len(cs):
                raise ValidationError('user %s lists a creator twice: %r' % (key, cs))
            assignments[int(key)] = cs
        return cls(assignments)


class StableSetReport(object):
    """Outcome of a stable-set check; ``is_stable`` holds iff there are no violations."""

    def __init__(self, state, matching, engagement, violations=()):
        self.state = state
        self.matching = matching
        self.engagement = float(engagement)
        self.violations = list(violations)

    @property
    def is_stable(self):
        return not self.violations

    def to_dict(self):
        return {
            'is_stable': self.is_stable,
            'engagement': self.engagement,
            'state': self.state.to_dict(),
            'matching': self.matching.to_dict(),
            'violations': [list(v) for v in self.violations],
        }

    def __repr__(self):
        return 'StableSetReport(stable=%s, engagement=%.12g, users=%d, creators=%d)' % (
            self.is_stable, self.engagement, len(self.state.active_users), len(self.state.active_creators))


def engagement(u, c):
    """Engagement u.c of a user with a creator."""
    u, c = _coords(u), _coords(c)
    if u.shape != c.shape:
        raise ValidationError('dimension mismatch: %d vs %d' % (u.size, c.size))
    return float(np.dot(u, c))


def is_happy(u, c, e_bar, tol=HAPPY_TOL):
    return engagement(u, c) >= e_bar - tol


def _check_references(state, m):
    users = set(state.active_users)
    creators = set(state.active_creators)
    for i, cs in m.assignments.items():
        if not cs:
            continue
        if i not in users:
            raise ValidationError('matching assigns creators to inactive user %d' % i)
        stray = cs - creators
        if stray:
            raise ValidationError('matching assigns inactive creators %r to user %d' % (sorted(stray), i))


def total_engagement(inst, state, m):
    """Sum of u_i.c_j over every active user i and every j in R(i)."""
    _check_references(state, m)
    total = 0.
    for i, cs in m.assignments.items():
        for j in cs:
            total += inst.engagements[i, j]
    return float(total)


def audience_sizes(state, m):
    """Audience a_j of every active creator; creators without users map to 0."""
    sizes = dict((j, 0) for j in state.active_creators)
    users = set(state.active_users)
    for i, cs in m.assignments.items():
        if i not in users:
            continue
        for j in cs:
            if j in sizes:
                sizes[j] += 1
    return sizes


def surviving_players(inst, state, m):
    """Players whose participation constraints hold under ``m``.

    Users stay iff they received exactly K active creators, all happy.
    Creators stay iff their audience is at least a_bar.
    """
    creators = set(state.active_creators)
    users = []
    for i in state.active_users:
        cs = m[i]
        if len(cs) == inst.k and cs <= creators and all(inst.happy[i, j] for j in cs):
            users.append(i)
    sizes = audience_sizes(state, m)
    kept = [j for j in state.active_creators if sizes[j] >= inst.a_bar]
    return PlatformState(users, kept)


def check_stable_set(inst, state, m):
    """Check whether (state, m) satisfies every participation constraint.

    Returns
    -------
    StableSetReport
        Violations are ``(kind, index, reason)`` tuples with kind ``'user'``
        or ``'creator'``.
    """
    state.validate(inst)
    users = set(state.active_users)
    creators = set(state.active_creators)
    violations = []
    total = 0.
    for i, cs in m.items():
        if cs and i not in users:
            violations.append(('user', i, 'inactive user holds recommendations'))
            continue
        for j in sorted(cs):
            if j not in creators:
                violations.append(('user', i, 'assigned inactive creator %d' % j))
            else:
                total += inst.engagements[i, j]

    for i in state.active_users:
        cs = m[i]
        if len(cs) != inst.k:
            violations.append(('user', i, 'receives %d of %d recommendations' % (len(cs), inst.k)))
        for j in sorted(cs & creators):
            if not inst.happy[i, j]:
                violations.append(('user', i, 'unhappy with creator %d (engagement %.12g < %.12g)'
                                   % (j, inst.engagements[i, j], inst.e_bar)))

    sizes = audience_sizes(state, m)
    for j in state.active_creators:
        if sizes[j] < inst.a_bar:
            violations.append(('creator', j, 'audience %d < %d' % (sizes[j], inst.a_bar)))

    return StableSetReport(state, m, total, violations)


def empty_report():
    return StableSetReport(PlatformState.empty(), Matching(), 0.)


def market_balance(inst):
    """True when total recommendation slots equal total audience demand (UK = C a_bar)."""
    return inst.n_users * inst.k == inst.n_creators * inst.a_bar
