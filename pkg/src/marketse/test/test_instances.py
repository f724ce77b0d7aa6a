#!/usr/bin/env python
# encoding: utf-8
"""
test_instances.py

Copyright (c) MarketSE Team. All rights reserved.
"""

import math
import unittest

import numpy as np
import numpy.testing as npt
from scipy import integrate

from marketse.core import ValidationError, market_balance
from marketse.instances import (EXAMPLES, calibrate_e_bar, embed_unit_vectors, example_cascade, example_flower,
                                example_megacrown, example_simple, example_two_creator, make_rng,
                                sample_uniform_instance, sample_uniform_vectors)


class TestExamples(unittest.TestCase):

    def test_registry(self):
        self.assertEqual(sorted(EXAMPLES), ['cascade', 'flower', 'megacrown', 'simple', 'two-creator'])

    def test_simple(self):
        inst = example_simple()
        self.assertEqual((inst.n_users, inst.n_creators, inst.k, inst.a_bar), (6, 2, 1, 3))
        self.assertAlmostEqual(inst.e_bar, 0.5)
        self.assertTrue(market_balance(inst))

    def test_megacrown(self):
        inst = example_megacrown(3)
        self.assertEqual((inst.n_users, inst.n_creators, inst.k, inst.a_bar), (4, 3, 2, 3))
        inst = example_megacrown(8, n_hint=6)
        self.assertEqual((inst.n_creators, inst.k, inst.a_bar), (8, 7, 4))
        self.assertEqual(inst.n_users, 2 * inst.a_bar - 2)
        self.assertRaises(ValidationError, example_megacrown, 2)

    def test_cascade(self):
        inst = example_cascade(5)
        self.assertEqual((inst.n_users, inst.n_creators, inst.k, inst.a_bar), (10, 10, 2, 2))
        self.assertTrue(market_balance(inst))
        # each user is happy exactly with its neighbors on the arc and prefers i and i+1
        idx = np.arange(10)
        npt.assert_array_equal(inst.happy, np.abs(idx[:, None] - idx[None, :]) <= 1)
        for i in range(9):
            self.assertEqual(sorted(np.argsort(-inst.engagements[i])[:2]), [i, i + 1])
        self.assertRaises(ValidationError, example_cascade, 1)

    def test_flower(self):
        inst = example_flower(8, 0.3)
        self.assertEqual((inst.n_users, inst.n_creators, inst.k, inst.a_bar, inst.dim), (20, 9, 5, 8, 3))
        # center users sit at distance d from every corner creator
        for j in range(4, 9):
            dist = np.linalg.norm(inst.user_matrix[-1] - inst.creator_matrix[j])
            self.assertAlmostEqual(dist, 0.3, places=9)
        self.assertRaises(ValidationError, example_flower, 6, 0.3)
        self.assertRaises(ValidationError, example_flower, 8, 0.)
        self.assertRaises(ValidationError, example_flower, 8, 1.9)

    def test_two_creator(self):
        inst = example_two_creator(4)
        self.assertEqual((inst.n_users, inst.n_creators, inst.k), (8, 2, 1))
        self.assertEqual(inst.happy_creators(0), [0])
        self.assertEqual(inst.happy_creators(2), [1])
        self.assertEqual(inst.happy_creators(4), [0, 1])
        self.assertGreater(inst.engagement(4, 0), inst.engagement(4, 1))
        self.assertGreater(inst.engagement(6, 1), inst.engagement(6, 0))
        self.assertRaises(ValidationError, example_two_creator, 3)


class TestSampling(unittest.TestCase):

    def test_vectors(self):
        x = sample_uniform_vectors(1000, 5, make_rng(3))
        self.assertEqual(x.shape, (1000, 5))
        npt.assert_allclose(np.linalg.norm(x, axis=1), 1., atol=1e-12)
        self.assertTrue(np.all(x >= 0.))

    def test_seeding(self):
        self.assertEqual(make_rng((1, 2)).random(), make_rng([1, 2]).random())
        self.assertNotEqual(make_rng((1, 2)).random(), make_rng((2, 1)).random())
        a = sample_uniform_instance(6, 4, 2, 3, 5, 0.4, seed=(9, 0, 1))
        b = sample_uniform_instance(6, 4, 2, 3, 5, 0.4, seed=(9, 0, 1))
        c = sample_uniform_instance(6, 4, 2, 3, 5, 0.4, seed=(9, 0, 2))
        npt.assert_array_equal(a.engagements, b.engagements)
        self.assertFalse(np.array_equal(a.engagements, c.engagements))
        self.assertRaises(ValidationError, sample_uniform_instance, 6, 4, 2, 3, 1, 0.4, 0)

    def test_mean_engagement_quarter_circle(self):
        area = (math.pi / 2.) ** 2
        oracle = integrate.dblquad(lambda b, a: math.cos(a - b), 0., math.pi / 2., 0., math.pi / 2.)[0] / area
        self.assertAlmostEqual(oracle, 8. / math.pi ** 2, places=9)
        self.assertAlmostEqual(calibrate_e_bar(2, 1., samples=200000, seed=1), oracle, delta=3e-3)
        self.assertAlmostEqual(calibrate_e_bar(2, 0.5, samples=200000, seed=1), 0.5 * oracle, delta=2e-3)

    def test_mean_engagement_octant(self):
        # E[u.c] = |E[u]|^2 and each coordinate of a uniform octant point has mean 1/2
        num = integrate.dblquad(lambda t, p: math.cos(t) * math.sin(t), 0., math.pi / 2., 0., math.pi / 2.)[0]
        den = integrate.dblquad(lambda t, p: math.sin(t), 0., math.pi / 2., 0., math.pi / 2.)[0]
        oracle = 3. * (num / den) ** 2
        self.assertAlmostEqual(oracle, 0.75, places=9)
        self.assertAlmostEqual(calibrate_e_bar(3, 1., samples=200000, seed=2), oracle, delta=3e-3)

    def test_calibration_errors(self):
        self.assertRaises(ValidationError, calibrate_e_bar, 3, -0.1)
        self.assertRaises(ValidationError, calibrate_e_bar, 3, 0.5, samples=0)
        self.assertRaises(ValidationError, calibrate_e_bar, 3, 3.)


class TestEmbedding(unittest.TestCase):

    def test_preserves_happiness(self):
        inst = embed_unit_vectors([[2., 0.], [1., 1.]], [[0., 3.]], e_bar=2., k=1, a_bar=1)
        self.assertEqual(inst.dim, 4)
        self.assertAlmostEqual(inst.e_bar, 1. / 3.)
        npt.assert_allclose(inst.engagements[:, 0], [0., 0.5], atol=1e-12)
        self.assertEqual(inst.happy[:, 0].tolist(), [False, True])
        npt.assert_allclose(np.linalg.norm(inst.user_matrix, axis=1), 1., atol=1e-12)
        npt.assert_allclose(inst.user_matrix[1], [0.5, 0.5, math.sqrt(0.5), 0.], atol=1e-12)

    def test_random_raw_data(self):
        rng = make_rng(5)
        raw_u = rng.random((20, 4)) * 3.
        raw_c = rng.random((6, 4)) * 2.
        e_bar = 1.5
        inst = embed_unit_vectors(raw_u, raw_c, e_bar=e_bar, k=2, a_bar=3)
        raw_happy = raw_u.dot(raw_c.T) >= e_bar
        npt.assert_array_equal(inst.happy, raw_happy)

    def test_invalid(self):
        self.assertRaises(ValidationError, embed_unit_vectors, [[-1., 1.]], [[1., 0.]], 0.5, 1, 1)
        self.assertRaises(ValidationError, embed_unit_vectors, [[0., 0.]], [[1., 0.]], 0.5, 1, 1)
        self.assertRaises(ValidationError, embed_unit_vectors, [[1., 0.]], [[1., 0., 0.]], 0.5, 1, 1)
        self.assertRaises(ValidationError, embed_unit_vectors, [[2., 0.]], [[3., 0.]], 7., 1, 1)


if __name__ == '__main__':
    unittest.main()
