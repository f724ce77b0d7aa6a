"""
MarketSE: user/creator recommendation markets with participation constraints.

Package-wide numerical constants live here so every module agrees on them.
"""

# a user is happy with a creator when u.c >= e_bar - HAPPY_TOL
HAPPY_TOL = 1e-9
# type vectors must have unit norm within NORM_TOL
NORM_TOL = 1e-9
# fixed-K reductions place unhappy satellite pairs ~1e-12 below the threshold
FIXED_K_HAPPY_TOL = 1e-14

# engagement -> integer flow cost multiplier
FLOW_SCALE = 1e9

# solver caps
MAX_FL_CREATORS = 20
MAX_BRUTE_USERS = 8
MAX_BRUTE_CREATORS = 4
MAX_BRUTE_K = 2

DEFAULT_CALIBRATION_SAMPLES = 10000

ALGORITHMS = ('uc', 'fl', 'lc', 'cr1', 'cr2')
