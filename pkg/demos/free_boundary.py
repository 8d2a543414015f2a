"""
D-optimal spacing without boundary constraints
==============================================

With the spacings free, det M_r is monotone for small grids but the full
criterion (trend and covariance parameters) develops an interior maximum
once n = m >= 3. Solve the stationarity system and check it on a lattice.
"""

import numpy as np

from oudesign import CovParams, fisher, optimize

for n in (2, 3, 4, 6):
    print(n, optimize.covariance_design_classification(n, n).value)

p = CovParams(1.0, 1.0)
sol = optimize.solve_all_params_free(6, p)
print(f"d* = {sol.d_star:.10f}, delta* = {sol.delta_star:.10f}, "
      f"residuals {max(sol.residuals):.1e}")

# brute force on a 0.01 lattice
xs = np.arange(1, 301) * 0.01
vals = fisher.det_m_all_free_equidistant(6, 6, xs[:, None], xs[None, :], p)
i, j = np.unravel_index(np.argmax(vals), vals.shape)
print(f"lattice argmax ({xs[i]:.2f}, {xs[j]:.2f}), value {vals[i, j]:.6f} "
      f"<= {sol.value:.6f}")

# optimal spacings scale inversely with the decay rates
for alpha, beta in [(0.5, 0.5), (2.0, 0.25)]:
    s = optimize.solve_all_params_free(6, CovParams(alpha, beta))
    print(alpha, beta, s.d_star * alpha, s.delta_star * beta)
