class MarketSE_Example2():
    """Small seeded experiment: how UC and CR2 fare as users are added."""

    def execute(self, trials=20, verbose=True):

        # --- Import Modules
        import sys
        from marketse.analysis import ExperimentPoint, ExperimentGrid, summarize, write_csv
        # ---

        # --- Parameter points: C = 6, K = 3, a_bar = UK/C
        points = [ExperimentPoint(u, 6, 3, u * 3 // 6, 10, 0.6, algorithms=('uc', 'cr2'), trials=trials)
                  for u in (12, 24, 48)]
        # ---

        grid = ExperimentGrid(points, seed=2024, threads=1)
        grid.verbose = verbose
        results = grid.run()

        rows = summarize(results)
        if verbose:
            write_csv(rows, sys.stdout)
        return rows


if __name__ == "__main__":

    market = MarketSE_Example2()
    market.execute()
