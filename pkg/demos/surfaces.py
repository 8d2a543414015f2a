"""
Criterion surfaces
==================

Lattice data behind the surface plots. Same data as `oudesign surface`.
Plots are drawn if matplotlib is installed.
"""

import numpy as np

from oudesign import CovParams, optimize

xs = np.round(np.arange(1, 100) * 0.01, 2)

# restricted 3x3 design on the unit square: maximum on the frontier
rows = optimize.surface_scan("det_m_r_33", CovParams(0.6, 1.0), xs, xs)
print("det M_r argmax", rows[np.argmax(rows[:, 2]), :2])

# with the trend included the minimum is at the centre
rows = optimize.surface_scan("det_m_33", CovParams(1.0, 1.0), xs, xs)
print("det M argmin", rows[np.argmin(rows[:, 2]), :2])

free = np.arange(1, 301) * 0.01
rows = optimize.surface_scan("det_free", CovParams(1.0, 1.0), free, free, n=6)
print("free n=6 argmax", rows[np.argmax(rows[:, 2]), :2])

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    Z = rows[:, 2].reshape(free.size, free.size)
    fig, ax = plt.subplots()
    ax.contourf(free, free, Z.T, levels=30)
    ax.set_xlabel("d")
    ax.set_ylabel("delta")
    fig.savefig("free_boundary_n6.png", dpi=100)
