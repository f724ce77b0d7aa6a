from __future__ import print_function


class MarketSE_Example1():
    """Two-creator example: UC loses creator 1, FL keeps every player."""

    def execute(self, verbose=True):

        # --- Import Modules
        from marketse.instances import example_simple
        from marketse.algorithms import fl_solve
        from marketse.dynamics import run_dynamics
        from marketse.market_openmdao import compare_with_openmdao
        # ---

        # --- Build instance
        inst = example_simple()
        # ---

        # === maximum stable set ===
        report = fl_solve(inst)

        # === dynamics ===
        traj = {}
        for name in ('uc', 'fl', 'lc', 'cr1', 'cr2'):
            traj[name] = run_dynamics(inst, name)

        # === the same comparison as an OpenMDAO model ===
        comparison = compare_with_openmdao(inst, ('uc', 'lc', 'cr1', 'cr2'))

        if verbose:
            print('max stable set engagement =', report.engagement)
            print('max stable set creators =', report.state.active_creators)
            for name, t in sorted(traj.items()):
                print('%-4s long-term = %.6f  converged at t = %d  retained = %d users, %d creators' % (
                    name, t.long_term_engagement, t.converged_at,
                    len(t.final_state.active_users), len(t.final_state.active_creators)))
            for name, (value, ratio) in sorted(comparison.items()):
                print('%-4s ratio to FL =' % name, ratio)

        return report, traj, comparison


if __name__ == "__main__":

    market = MarketSE_Example1()
    market.execute()
