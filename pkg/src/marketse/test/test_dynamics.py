#!/usr/bin/env python
# encoding: utf-8
"""
test_dynamics.py

Copyright (c) MarketSE Team. All rights reserved.
"""

import math
import unittest

from marketse.algorithms import happy_distance, lc_recommend
from marketse.core import Instance, Matching, MarketError, PlatformState, ValidationError
from marketse.dynamics import approximation_ratio, compare_algorithms, run_dynamics
from marketse.instances import (example_cascade, example_flower, example_megacrown, example_simple,
                                example_two_creator, flower_geometry)

UC_LONG_TERM = 3. + math.sqrt(3.) / 2.


def wide_lc(inst, state):
    return lc_recommend(inst, state, radius=happy_distance(inst.e_bar))


def cascade_pairing_engagement(n):
    # every user gets its two nearest creators except the n-1 that take creator i-1 instead of i+1
    s = math.pi / (2. * (2 * n - 1))
    delta = s / (4. * n)
    return 2 * n * (math.cos(delta) + math.cos(s - delta)) - (n - 1) * (math.cos(s - delta) - math.cos(s + delta))


def flower_lc_ratio(a_bar, d):
    cos_a = math.cos(flower_geometry(d)[2])
    num = 5. * (4. + cos_a) + (a_bar - 5) * (1. + 4. * cos_a)
    den = 25. * cos_a + 5. * (a_bar - 5) * (1. + 4. * cos_a)
    return num / den


class TestSimpleExample(unittest.TestCase):

    def setUp(self):
        self.inst = example_simple()

    def test_uc(self):
        traj = run_dynamics(self.inst, 'uc')
        self.assertLessEqual(abs(traj.long_term_engagement - UC_LONG_TERM), 1e-9)
        self.assertEqual(traj.converged_at, 2)
        self.assertEqual(traj.final_state, PlatformState([2, 3, 4, 5], [1]))
        self.assertEqual(traj.departures(), [[('creator', 0)], [('user', 0), ('user', 1)]])

    def test_fl(self):
        traj = run_dynamics(self.inst, 'fl')
        self.assertLessEqual(abs(traj.long_term_engagement - 5.5), 1e-9)
        self.assertEqual(traj.converged_at, 0)

    def test_lc_and_creator_centric(self):
        lc = run_dynamics(self.inst, 'lc')
        self.assertLessEqual(abs(lc.long_term_engagement - UC_LONG_TERM), 1e-9)
        self.assertEqual(lc.converged_at, 1)
        for name in ('cr1', 'cr2'):
            self.assertLessEqual(abs(run_dynamics(self.inst, name).long_term_engagement - 5.5), 1e-9)

    def test_ratio(self):
        self.assertAlmostEqual(approximation_ratio(self.inst, 'uc'), UC_LONG_TERM / 5.5, places=9)
        self.assertAlmostEqual(approximation_ratio(self.inst, 'uc', reference=5.5), UC_LONG_TERM / 5.5, places=9)
        out = compare_algorithms(self.inst)
        self.assertEqual(sorted(out), ['cr1', 'cr2', 'fl', 'lc', 'uc'])
        self.assertEqual(out['fl'][1], 1.)

    def test_no_fl_engagement(self):
        inst = Instance([[1., 0.]], [[0., 1.]], k=1, e_bar=0.5, a_bar=1)
        self.assertIsNone(approximation_ratio(inst, 'uc'))
        self.assertIsNone(compare_algorithms(inst, ('uc',))['uc'][1])

    def test_callable_and_errors(self):
        def nothing(inst, state):
            return Matching()
        nothing.__name__ = 'nothing'
        traj = run_dynamics(self.inst, nothing)
        self.assertEqual(traj.algorithm, 'nothing')
        self.assertTrue(traj.final_state.is_empty())
        self.assertEqual(traj.long_term_engagement, 0.)
        self.assertRaises(ValidationError, run_dynamics, self.inst, 'xyz')
        self.assertRaises(MarketError, run_dynamics, self.inst, 'uc', max_steps=1)

    def test_to_dict(self):
        data = run_dynamics(self.inst, 'uc').to_dict()
        self.assertEqual(data['converged_at'], 2)
        self.assertEqual(len(data['steps']), 3)
        self.assertEqual(data['steps'][2]['state'], {'active_users': [2, 3, 4, 5], 'active_creators': [1]})


class TestCounterExamples(unittest.TestCase):

    def test_megacrown(self):
        for m in (3, 5, 8):
            inst = example_megacrown(m, n_hint=4)
            uc = run_dynamics(inst, 'uc')
            fl = run_dynamics(inst, 'fl')
            self.assertEqual(uc.long_term_engagement, 0., msg='m=%d' % m)
            self.assertTrue(uc.final_state.is_empty())
            self.assertGreater(fl.long_term_engagement, 0., msg='m=%d' % m)
            if m > 3:
                self.assertEqual(fl.final_state, PlatformState.full(inst))
        self.assertEqual(run_dynamics(example_megacrown(3), 'uc').converged_at, 3)

    def test_cascade(self):
        n = 5
        inst = example_cascade(n)
        uc = run_dynamics(inst, 'uc')
        final = uc.final_state
        self.assertEqual((len(final.active_users), len(final.active_creators)), (2, 2))
        self.assertEqual(uc.converged_at, 4 * n - 4)
        kinds = [gone[0][0] for gone in uc.departures()]
        self.assertTrue(all(len(gone) == 1 for gone in uc.departures()))
        self.assertEqual(kinds, ['creator', 'user'] * (2 * n - 2))

        for n in (2, 3, 4, 5, 6):
            inst = example_cascade(n)
            fl = run_dynamics(inst, 'fl')
            self.assertEqual(fl.final_state, PlatformState.full(inst), msg='n=%d' % n)
            self.assertLessEqual(abs(fl.long_term_engagement - cascade_pairing_engagement(n)), 1e-7, msg='n=%d' % n)

    def test_flower(self):
        a_bar = 8
        inst = example_flower(a_bar, 0.3)
        fl = run_dynamics(inst, 'fl')
        self.assertEqual(len(fl.final_state.active_creators), 9)
        self.assertEqual(len(fl.final_state.active_users), 5 * a_bar - 20)

        # strict neighborhoods never gather a_bar users and K creators
        self.assertEqual(run_dynamics(inst, 'lc').long_term_engagement, 0.)

        expected = flower_lc_ratio(a_bar, 0.3)
        self.assertAlmostEqual(expected, 0.41, delta=0.01)
        for alg in (wide_lc, 'uc'):
            ratio = run_dynamics(inst, alg).long_term_engagement / fl.long_term_engagement
            self.assertLessEqual(abs(ratio - expected), 1e-9)

    def test_flower_large_audience(self):
        inst = example_flower(40, 0.3)
        fl = run_dynamics(inst, 'fl').long_term_engagement
        ratio = run_dynamics(inst, wide_lc).long_term_engagement / fl
        self.assertTrue(0.15 <= ratio <= 0.30, msg='ratio %r' % ratio)
        self.assertLessEqual(abs(ratio - flower_lc_ratio(40, 0.3)), 1e-9)

    def test_two_creator(self):
        inst = example_two_creator(4)
        cr1 = run_dynamics(inst, 'cr1')
        self.assertEqual(cr1.final_state.active_creators, (0,))
        cr2 = run_dynamics(inst, 'cr2')
        self.assertEqual(cr2.final_state, PlatformState.full(inst))
        self.assertAlmostEqual(cr2.long_term_engagement, 4. + 4. * math.sin(math.radians(35.)), places=9)
        self.assertGreater(cr2.long_term_engagement, cr1.long_term_engagement)


if __name__ == '__main__':
    unittest.main()
