"""Parameter sets for the four reference figure data sets.

Depth 15 in FIG1 and every (eta, N) pair in FIG4 are assumed values, not
taken from a source table.
"""

import math

FIG1 = {"eta": 0.22, "rabi_ratio": 0.85, "depths": (15.0, 30.0, 45.0, 75.0)}
FIG2 = {"eta": 0.25, "rabi_ratio": 0.31, "theta": math.pi / 4, "depth_span": (5.0, 100.0)}
FIG3 = {"eta": 0.75, "rabi_ratio": 0.9, "depths": (7.0, 26.0, 45.0, 75.0)}
# (eta, N): panels (a)-(c) lower eta at fixed depth, (d)-(f) deepen the trap
FIG4 = {
    "rabi_ratio": 0.9,
    "panels": ((0.75, 15.0), (0.5, 15.0), (0.25, 15.0), (0.75, 26.0), (0.75, 45.0), (0.75, 75.0)),
}
