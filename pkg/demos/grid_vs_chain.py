"""
Rectangular grids versus monotonic chains
=========================================

Compare the 8x8 equidistant grid with the best 64-point monotonic chain
on the same design space, for the constant-trend D-criterion and for the
entropy criterion.
"""

from oudesign import CovParams, make_equidistant_grid
from oudesign import fisher, optimize, prediction

space = optimize.TABLE1_SPACE
grid = make_equidistant_grid(space, 8, 8)

# the grid value is closed form; the chain needs an optimizer
for alpha, beta in [(0.001, 0.01), (0.1, 1.0), (1.0, 1.0), (1.0, 10.0)]:
    p = CovParams(alpha, beta)
    rect = fisher.m_theta(grid, p)
    mono = optimize.optimize_monotonic_chain(space, 64, p, "trend-D").value
    print(f"alpha={alpha:<6g} beta={beta:<5g} M_theta grid {rect:8.4f} "
          f"chain {mono:8.4f}  efficiency {100 * mono / rect:6.2f}%")

# entropy can be negative, so only the ratio mono/rect is reported
for alpha, beta in [(0.001, 0.01), (1.0, 10.0)]:
    p = CovParams(alpha, beta, 1.0)
    rect = prediction.entropy(grid, p)
    rep = optimize.optimize_monotonic_chain(space, 64, p, "entropy")
    print(f"entropy alpha={alpha:g} beta={beta:g}: grid {rect:.4f} "
          f"chain {rep.value:.4f}")
