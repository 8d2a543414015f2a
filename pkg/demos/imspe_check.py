"""
IMSPE: closed form against brute-force quadrature
=================================================

The average kriging MSPE over the design hull has a closed form for grid
designs. Integrate the bordered-system MSPE numerically and compare.
"""

import numpy as np

from oudesign import CovParams, GridDesign, oracle, prediction

g = GridDesign([0, 1], [0, 1])
p = CovParams(1.0, 1.0)
print("2x2 unit grid:", prediction.imspe(g, p),
      oracle.imspe_quadrature(g.points(), p))

rng = np.random.default_rng(1)
for _ in range(3):
    s = np.cumsum(np.r_[0, rng.uniform(0.1, 1, 3)])
    t = np.cumsum(np.r_[0, rng.uniform(0.1, 1, 2)])
    g = GridDesign(s, t)
    p = CovParams(*rng.uniform(0.2, 3, 2))
    closed = prediction.imspe(g, p)
    quad = oracle.imspe_quadrature(g.points(), p)
    print(f"{g.n}x{g.m}: closed {closed:.12f} quadrature {quad:.12f} "
          f"diff {abs(closed - quad):.1e}")

# with an estimated mean the MSPE can exceed sigma^2: for nearly
# independent observations the average tends to 1 + 1/(nm)
for r in (1, 10, 100, 1000):
    print(r, prediction.imspe(GridDesign([0, 1], [0, 1]), CovParams(r, r)))

# equidistant grids minimize it
p = CovParams(1.5, 0.7)
eq = prediction.imspe(GridDesign(np.linspace(0, 1, 4), np.linspace(0, 1, 4)), p)
other = prediction.imspe(GridDesign([0, 0.2, 0.5, 1], [0, 0.4, 0.6, 1]), p)
print("equidistant", eq, "perturbed", other)
