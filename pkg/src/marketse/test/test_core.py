#!/usr/bin/env python
# encoding: utf-8
"""
test_core.py

Copyright (c) MarketSE Team. All rights reserved.
"""

import math
import unittest

import numpy as np
import numpy.testing as npt

from marketse import HAPPY_TOL
from marketse.core import (Instance, Matching, PlatformState, TypeVector, ValidationError, audience_sizes,
                           check_stable_set, engagement, is_happy, market_balance, surviving_players,
                           total_engagement)
from marketse.instances import example_simple


# UC's first-step matching on the two-creator example and the FL optimum
UC_T0 = {0: [0], 1: [0], 2: [1], 3: [1], 4: [1], 5: [1]}
FL_OPT = {0: [0], 1: [0], 2: [0], 3: [1], 4: [1], 5: [1]}


class TestTypeVector(unittest.TestCase):

    def test_clips_tiny_negatives(self):
        v = TypeVector([1., -5e-10])
        self.assertEqual(v.tolist(), [1., 0.])
        self.assertEqual(v.dim, 2)

    def test_rejects_negative(self):
        self.assertRaises(ValidationError, TypeVector, [math.sqrt(1. - 1e-6), -1e-3])

    def test_rejects_non_unit(self):
        self.assertRaises(ValidationError, TypeVector, [1., 1.])
        self.assertRaises(ValidationError, TypeVector, [])
        self.assertRaises(ValidationError, TypeVector, [float('nan'), 1.])

    def test_read_only(self):
        v = TypeVector([0., 1.])
        with self.assertRaises(ValueError):
            v.coords[0] = 1.

    def test_equality(self):
        self.assertEqual(TypeVector([0., 1.]), TypeVector([0, 1]))
        self.assertNotEqual(TypeVector([0., 1.]), TypeVector([1., 0.]))
        self.assertEqual(len(set([TypeVector([0., 1.]), TypeVector([0., 1.])])), 1)


class TestInstance(unittest.TestCase):

    def setUp(self):
        self.inst = example_simple()

    def test_matrices(self):
        inst = self.inst
        self.assertEqual(inst.engagements.shape, (6, 2))
        npt.assert_allclose(inst.engagements[:, 0], [1., 1., 0.5, 0., 0., 0.], atol=1e-12)
        npt.assert_allclose(inst.engagements[:, 1], [0., 0., math.sqrt(3.) / 2., 1., 1., 1.], atol=1e-12)
        self.assertEqual(inst.happy_creators(2), [0, 1])
        self.assertEqual(inst.happy_creators(0), [0])
        self.assertEqual(inst.happy_users(0), [0, 1, 2])
        self.assertEqual(inst.happy_users(1, users=[5, 2, 0]), [2, 5])
        self.assertTrue(inst.is_happy(2, 0))
        self.assertFalse(inst.is_happy(3, 0))

    def test_read_only_matrices(self):
        with self.assertRaises(ValueError):
            self.inst.engagements[0, 0] = 0.

    def test_dict_round_trip(self):
        data = self.inst.to_dict()
        self.assertNotIn('tol', data)
        self.assertEqual(sorted(data), ['a_bar', 'creators', 'dim', 'e_bar', 'k', 'users'])
        other = Instance.from_dict(data)
        npt.assert_array_equal(other.engagements, self.inst.engagements)
        self.assertEqual((other.k, other.a_bar, other.dim), (1, 3, 2))

        data['tol'] = 1e-6
        self.assertEqual(Instance.from_dict(data).to_dict()['tol'], 1e-6)

    def test_invalid(self):
        data = self.inst.to_dict()
        del data['k']
        self.assertRaises(ValidationError, Instance.from_dict, data)
        self.assertRaises(ValidationError, Instance, [[1., 0.]], [[1., 0.]], k=0, e_bar=0.5, a_bar=1)
        self.assertRaises(ValidationError, Instance, [[1., 0.]], [[1., 0.]], k=1, e_bar=1.5, a_bar=1)
        self.assertRaises(ValidationError, Instance, [[1., 0.]], [[1., 0., 0.]], k=1, e_bar=0.5, a_bar=1)
        self.assertRaises(ValidationError, Instance, [], [[1., 0.]], k=1, e_bar=0.5, a_bar=1)
        self.assertRaises(ValidationError, Instance, [[1., 0.]], [[1., 0.]], k=1.5, e_bar=0.5, a_bar=1)

    def test_market_balance(self):
        self.assertTrue(market_balance(self.inst))
        inst = Instance([[1., 0.]] * 3, [[1., 0.]], k=1, e_bar=0.5, a_bar=2)
        self.assertFalse(market_balance(inst))


class TestStateAndMatching(unittest.TestCase):

    def test_state(self):
        s = PlatformState([3, 1, 1], [2, 0])
        self.assertEqual(s.active_users, (1, 3))
        self.assertEqual(s.active_creators, (0, 2))
        self.assertTrue(PlatformState.empty().is_empty())
        self.assertTrue(PlatformState([1], [0]).issubset(s))
        self.assertFalse(PlatformState([2], [0]).issubset(s))
        self.assertEqual(s, PlatformState((1, 3), (0, 2)))
        self.assertRaises(ValidationError, PlatformState([7], []).validate, example_simple())

    def test_matching(self):
        m = Matching({0: [1, 0], 2: []})
        self.assertEqual(m[0], frozenset([0, 1]))
        self.assertEqual(m[5], frozenset())
        self.assertEqual(m, Matching({0: [0, 1]}))
        self.assertEqual(m.pairs(), [(0, 0), (0, 1)])
        self.assertEqual(m.to_dict(), {'0': [0, 1], '2': []})
        self.assertEqual(Matching.from_dict({'0': [0, 1]}), m)
        self.assertRaises(ValidationError, Matching.from_dict, {'0': [1, 1]})


class TestParticipation(unittest.TestCase):

    def setUp(self):
        self.inst = example_simple()
        self.full = PlatformState.full(self.inst)

    def test_engagement_helpers(self):
        self.assertAlmostEqual(engagement([1., 0.], [0.6, 0.8]), 0.6)
        self.assertTrue(is_happy([1., 0.], [0.6, 0.8], 0.6))
        self.assertTrue(is_happy([1., 0.], [0.6, 0.8], 0.6 + 0.5 * HAPPY_TOL))
        self.assertFalse(is_happy([1., 0.], [0.6, 0.8], 0.61))
        self.assertRaises(ValidationError, engagement, [1., 0.], [1., 0., 0.])

    def test_total_engagement(self):
        self.assertAlmostEqual(total_engagement(self.inst, self.full, Matching(FL_OPT)), 5.5, places=12)
        self.assertAlmostEqual(total_engagement(self.inst, self.full, Matching(UC_T0)),
                               2. + math.sqrt(3.) / 2. + 3., places=12)
        self.assertEqual(total_engagement(self.inst, self.full, Matching()), 0.)
        reduced = PlatformState(range(6), [1])
        self.assertRaises(ValidationError, total_engagement, self.inst, reduced, Matching(UC_T0))
        self.assertRaises(ValidationError, total_engagement, self.inst, PlatformState([0], [0, 1]),
                          Matching({1: [0]}))

    def test_audience_sizes(self):
        self.assertEqual(audience_sizes(self.full, Matching(UC_T0)), {0: 2, 1: 4})
        self.assertEqual(audience_sizes(PlatformState([0, 1], [0, 1]), Matching(UC_T0)), {0: 2, 1: 0})

    def test_surviving_players(self):
        nxt = surviving_players(self.inst, self.full, Matching(UC_T0))
        self.assertEqual(nxt, PlatformState(range(6), [1]))
        self.assertEqual(surviving_players(self.inst, self.full, Matching(FL_OPT)), self.full)
        # users 0 and 1 are unhappy with creator 1
        after = surviving_players(self.inst, nxt, Matching({i: [1] for i in range(6)}))
        self.assertEqual(after, PlatformState([2, 3, 4, 5], [1]))

    def test_check_stable_set(self):
        report = check_stable_set(self.inst, self.full, Matching(FL_OPT))
        self.assertTrue(report.is_stable)
        self.assertAlmostEqual(report.engagement, 5.5, places=12)

        report = check_stable_set(self.inst, self.full, Matching(UC_T0))
        self.assertFalse(report.is_stable)
        self.assertEqual([v[:2] for v in report.violations], [('creator', 0)])

        report = check_stable_set(self.inst, PlatformState(range(6), [1]), Matching({i: [1] for i in range(6)}))
        self.assertEqual(sorted(v[:2] for v in report.violations), [('user', 0), ('user', 1)])
        self.assertEqual(sorted(report.to_dict()), ['engagement', 'is_stable', 'matching', 'state', 'violations'])


if __name__ == '__main__':
    unittest.main()
