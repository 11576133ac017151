"""Sample solutions of det Hess u = 1 and compare the local cocharacteristic
conic with the global klr quadric restricted to each tangent plane.

Run:  python3 demos/cocharacteristic.py [n_points]
"""

import sys

from mae_orbits import forms as fm
from mae_orbits import mae

eta = fm.eff_from_triples({"123": -1, "456": 1}, side="covector")
n = int(sys.argv[1]) if len(sys.argv) > 1 else 10
points = mae.sample_smooth_points(eta, n, seed=1)
worst = 0.0
for U in points:
    check = mae.cochar_consistency(eta, U)
    worst = max(worst, check.residual)
    print(f"char rank {check.rank}  residual {check.residual:.2e}")
print(f"worst residual over {n} points: {worst:.2e}")
