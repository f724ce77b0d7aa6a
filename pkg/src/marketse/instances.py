#!/usr/bin/env python
# encoding: utf-8
"""
instances.py

Hand-built counter-example instances, the uniform random instance sampler,
e_bar calibration and the unit-vector embedding of raw nonnegative data.

Copyright (c) MarketSE Team. All rights reserved.
"""

import logging
import math

import numpy as np

from marketse import DEFAULT_CALIBRATION_SAMPLES
from marketse.core import Instance, ValidationError

logger = logging.getLogger(__name__)

TOP = [0., 1.]
RIGHT = [1., 0.]


def _polar(angle):
    return [math.cos(angle), math.sin(angle)]


def make_rng(key):
    """Counter-based generator keyed by an int or a tuple of ints."""
    if isinstance(key, (list, tuple)):
        key = [int(x) for x in key]
    else:
        key = int(key)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def example_simple():
    """Two creators, six users: UC loses creator 1 while FL keeps everyone."""
    users = [TOP, TOP, _polar(math.pi / 6.), RIGHT, RIGHT, RIGHT]
    creators = [TOP, RIGHT]
    return Instance(users, creators, k=1, e_bar=math.cos(math.pi / 3.), a_bar=3, dim=2)


def example_megacrown(m, n_hint=4):
    """m creators on a quarter circle where UC starves both end creators.

    Users: one at 60 degrees, one at 30 degrees, then a_bar-2 at (0,1) and
    a_bar-2 at (1,0), with a_bar = max(ceil(n_hint/2)+1, 3) and K = m-1.
    """
    if m < 3:
        raise ValidationError('megacrown needs m >= 3, got %d' % m)
    a_bar = max(int(math.ceil(n_hint / 2.)) + 1, 3)
    users = [_polar(math.pi / 3.), _polar(math.pi / 6.)]
    users += [TOP] * (a_bar - 2) + [RIGHT] * (a_bar - 2)
    creators = [TOP] + [_polar(math.pi / 4.)] * (m - 2) + [RIGHT]
    return Instance(users, creators, k=m - 1, e_bar=math.cos(math.pi / 3.), a_bar=a_bar, dim=2)


def example_cascade(n):
    """2n creators and users on a quarter circle where UC sheds one player per step.

    Creators are spaced s = pi/(2(2n-1)) apart and user i sits delta = s/(4n)
    past creator i; the last user sits delta before the last creator. With
    e_bar = cos(s + delta) each user is happy with creators i-1, i and i+1
    and prefers i and i+1. The small offset makes pairing users and creators
    2i-1, 2i the maximum stable set: dropping any creator costs more than the
    n-1 users that settle for creator i-1.
    """
    if n < 2:
        raise ValidationError('cascade needs n >= 2, got %d' % n)
    s = math.pi / (2. * (2 * n - 1))
    delta = s / (4. * n)
    creators = [_polar(i * s) for i in range(2 * n)]
    users = [_polar(i * s + delta) for i in range(2 * n - 1)]
    users.append(_polar(math.pi / 2. - delta))
    creators[-1] = TOP
    return Instance(users, creators, k=2, e_bar=math.cos(s + delta), a_bar=2, dim=2)


def flower_geometry(d):
    """Center and five corner points at chord distance d around (1,1,1)/sqrt(3)."""
    alpha = 2. * math.asin(d / 2.)
    p = np.ones(3) / math.sqrt(3.)
    e1 = np.array([1., -1., 0.]) / math.sqrt(2.)
    e2 = np.array([1., 1., -2.]) / math.sqrt(6.)
    corners = []
    for k in range(5):
        phi = 2. * math.pi * k / 5.
        corners.append(math.cos(alpha) * p + math.sin(alpha) * (math.cos(phi) * e1 + math.sin(phi) * e2))
    return p, np.array(corners), alpha


def example_flower(a_bar, d):
    """Dense center plus five corners: the local clustering counter-example.

    Users are listed corner by corner (a_bar-5 each) followed by the five
    center users; creators are the four center creators followed by one per
    corner. K = 5.
    """
    if a_bar < 7:
        raise ValidationError('flower needs a_bar >= 7, got %d' % a_bar)
    if not 0. < d < 2.:
        raise ValidationError('flower distance d must lie in (0, 2), got %r' % d)
    p, corners, alpha = flower_geometry(d)
    if np.any(corners < -1e-12):
        raise ValidationError('flower corners leave the nonnegative orthant for d=%r' % d)
    corners = np.clip(corners, 0., None)
    for q in corners:
        if abs(np.linalg.norm(q - p) - d) > 1e-9:
            raise ValidationError('corner is not at distance d from the center')
    for a in range(5):
        for b in range(a + 1, 5):
            if np.linalg.norm(corners[a] - corners[b]) <= d:
                raise ValidationError('corners %d and %d are within d of each other; use a smaller d' % (a, b))

    users = []
    for q in corners:
        users += [q] * (a_bar - 5)
    users += [p] * 5
    creators = [p] * 4 + list(corners)
    return Instance(users, creators, k=5, e_bar=math.cos(alpha), a_bar=a_bar, dim=3)


def example_two_creator(a_bar):
    """Two creators and four groups of a_bar/2 users that trip up CR1.

    Groups in index order: at 90 degrees (happy only with creator 1), at 0
    degrees (only creator 2), at 55 degrees (both, prefers creator 1) and at 35
    degrees (both, prefers creator 2).
    """
    if a_bar < 2 or a_bar % 2:
        raise ValidationError('two-creator instance needs an even a_bar >= 2, got %d' % a_bar)
    half = a_bar // 2
    users = [TOP] * half + [RIGHT] * half
    users += [_polar(math.radians(55.))] * half + [_polar(math.radians(35.))] * half
    return Instance(users, [TOP, RIGHT], k=1, e_bar=0.5, a_bar=a_bar, dim=2)


EXAMPLES = {
    'simple': example_simple,
    'megacrown': example_megacrown,
    'cascade': example_cascade,
    'flower': example_flower,
    'two-creator': example_two_creator,
}


def sample_uniform_vectors(n, dim, rng):
    """n i.i.d. uniform points on the nonnegative part of the unit sphere.

    Coordinate-wise absolute values of a standard Gaussian are uniform on the
    orthant patch by sign-reflection symmetry.
    """
    x = np.abs(rng.standard_normal((n, dim)))
    return x / np.linalg.norm(x, axis=1)[:, np.newaxis]


def sample_uniform_instance(u, c, k, a_bar, dim, e_bar, seed):
    """Random instance with uniform types, deterministic under ``seed`` (int or tuple of ints)."""
    if dim < 2:
        raise ValidationError('uniform instances need dim >= 2, got %d' % dim)
    rng = make_rng(seed)
    users = sample_uniform_vectors(u, dim, rng)
    creators = sample_uniform_vectors(c, dim, rng)
    return Instance(users, creators, k=k, e_bar=e_bar, a_bar=a_bar, dim=dim)


def calibrate_e_bar(dim, e_m, samples=DEFAULT_CALIBRATION_SAMPLES, seed=0):
    """e_bar = e_m times the Monte-Carlo mean engagement of uniform pairs."""
    if samples < 1:
        raise ValidationError('calibration needs samples >= 1, got %d' % samples)
    if e_m < 0.:
        raise ValidationError('e_m must be nonnegative, got %r' % e_m)
    rng = make_rng(seed)
    u = sample_uniform_vectors(samples, dim, rng)
    c = sample_uniform_vectors(samples, dim, rng)
    mean = float(np.mean(np.sum(u * c, axis=1)))
    e_bar = e_m * mean
    if e_bar > 1.:
        raise ValidationError('e_m=%r gives e_bar=%r > 1' % (e_m, e_bar))
    logger.debug('calibrate_e_bar: D=%d mean engagement %.6f -> e_bar %.6f', dim, mean, e_bar)
    return e_bar


def embed_unit_vectors(raw_users, raw_creators, e_bar, k, a_bar):
    """Map nonnegative raw vectors to unit types in dimension D+2.

    Users are scaled by 1/l_u and creators by 1/l_c (l the largest norm on
    each side); users fill coordinate D+1 and creators coordinate D+2 up to
    unit norm. Engagements scale by 1/(l_u l_c) and so does e_bar, so the
    happiness relation is unchanged.
    """
    U = np.atleast_2d(np.asarray(raw_users, dtype=float))
    C = np.atleast_2d(np.asarray(raw_creators, dtype=float))
    if U.shape[1] != C.shape[1]:
        raise ValidationError('users have dimension %d, creators %d' % (U.shape[1], C.shape[1]))
    for kind, X in (('user', U), ('creator', C)):
        if np.any(X < 0.):
            raise ValidationError('raw %s vectors must be nonnegative' % kind)
    nu = np.linalg.norm(U, axis=1)
    nc = np.linalg.norm(C, axis=1)
    if np.any(nu == 0.) or np.any(nc == 0.):
        raise ValidationError('raw vectors must be nonzero')

    l_u, l_c = nu.max(), nc.max()
    D = U.shape[1]
    users = np.zeros((U.shape[0], D + 2))
    users[:, :D] = U / l_u
    users[:, D] = np.sqrt(np.clip(1. - (nu / l_u) ** 2, 0., None))
    creators = np.zeros((C.shape[0], D + 2))
    creators[:, :D] = C / l_c
    creators[:, D + 1] = np.sqrt(np.clip(1. - (nc / l_c) ** 2, 0., None))

    scaled = e_bar / (l_u * l_c)
    if scaled > 1.:
        raise ValidationError('embedded e_bar %r exceeds 1: no pair can be happy' % scaled)
    return Instance(users, creators, k=k, e_bar=scaled, a_bar=a_bar, dim=D + 2)
