#!/usr/bin/env python
# encoding: utf-8
"""
market_openmdao.py

OpenMDAO components around the market dynamics, so algorithm comparisons
can sit inside larger OpenMDAO models.

Copyright (c) MarketSE Team. All rights reserved.
"""

from __future__ import print_function
import logging
import time

from openmdao.api import ExplicitComponent, Group, IndepVarComp, Problem

from marketse import ALGORITHMS
from marketse.dynamics import run_dynamics

logger = logging.getLogger(__name__)


# Class to run the dynamics of one algorithm
class MarketDynamics(ExplicitComponent):

    def initialize(self):
        self.options.declare('algorithm', default='uc', values=ALGORITHMS)
        self.options.declare('verbose', default=False, types=bool)

    def setup(self):
        # Instance objects travel by reference
        self.add_discrete_input('instance', val=None, desc='market Instance to simulate')

        # outputs
        self.add_output('long_term_engagement', val=0.0, desc='engagement at the first fixed point')
        self.add_discrete_output('converged_at', val=0, desc='first time step whose state is left unchanged')
        self.add_discrete_output('users_retained', val=0, desc='users active at the fixed point')
        self.add_discrete_output('creators_retained', val=0, desc='creators active at the fixed point')

    def compute(self, inputs, outputs, discrete_inputs, discrete_outputs):
        t0 = time.time()
        traj = run_dynamics(discrete_inputs['instance'], self.options['algorithm'])

        outputs['long_term_engagement'] = traj.long_term_engagement
        discrete_outputs['converged_at'] = traj.converged_at
        discrete_outputs['users_retained'] = len(traj.final_state.active_users)
        discrete_outputs['creators_retained'] = len(traj.final_state.active_creators)
        logger.debug('%s: long-term %g at t=%d', self.options['algorithm'], traj.long_term_engagement,
                     traj.converged_at)
        if self.options['verbose']:
            print('Complete: %s dynamics: \t%f s' % (self.options['algorithm'], time.time() - t0))


class ApproximationRatio(ExplicitComponent):
    """engagement / reference_engagement, NaN with ``defined`` False when the reference is 0."""

    def setup(self):
        self.add_input('engagement', val=0.0)
        self.add_input('reference_engagement', val=0.0)
        self.add_output('ratio', val=0.0)
        self.add_discrete_output('defined', val=False)

    def compute(self, inputs, outputs, discrete_inputs, discrete_outputs):
        reference = float(inputs['reference_engagement'][0])
        if reference > 0.:
            outputs['ratio'] = inputs['engagement'] / reference
            discrete_outputs['defined'] = True
        else:
            outputs['ratio'] = float('nan')
            discrete_outputs['defined'] = False


class MarketComparison(Group):
    """FL plus each requested algorithm on one instance, with ratios to FL."""

    def initialize(self):
        self.options.declare('algorithms', default=('uc', 'lc', 'cr1', 'cr2'))

    def setup(self):
        algorithms = [name for name in self.options['algorithms'] if name != 'fl']

        ivc = IndepVarComp()
        ivc.add_discrete_output('instance', val=None)
        self.add_subsystem('inputs', ivc)

        for name in ['fl'] + algorithms:
            self.add_subsystem('dyn_%s' % name, MarketDynamics(algorithm=name))
            self.connect('inputs.instance', 'dyn_%s.instance' % name)

        for name in algorithms:
            self.add_subsystem('ratio_%s' % name, ApproximationRatio())
            self.connect('dyn_%s.long_term_engagement' % name, 'ratio_%s.engagement' % name)
            self.connect('dyn_fl.long_term_engagement', 'ratio_%s.reference_engagement' % name)


def compare_with_openmdao(inst, algorithms=('uc', 'lc', 'cr1', 'cr2')):
    """Run MarketComparison on ``inst``; returns {name: (long_term, ratio or None)}."""
    algorithms = [name for name in algorithms if name != 'fl']
    prob = Problem(MarketComparison(algorithms=algorithms))
    prob.setup()
    prob['inputs.instance'] = inst
    prob.run_model()

    reference = float(prob['dyn_fl.long_term_engagement'][0])
    out = {'fl': (reference, 1. if reference > 0. else None)}
    for name in algorithms:
        value = float(prob['dyn_%s.long_term_engagement' % name][0])
        defined = prob['ratio_%s.defined' % name]
        out[name] = (value, float(prob['ratio_%s.ratio' % name][0]) if defined else None)
    return out
