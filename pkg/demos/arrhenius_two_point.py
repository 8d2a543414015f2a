"""
Four-point designs for the Arrhenius trend
==========================================

eta(t) = t**(-mu) exp(-B/t). With s in {0, d} and t in {0, delta} the
information on B has a closed form; the best delta solves a scalar
equation. Compare the root with a direct scan of the criterion.
"""

import numpy as np

from oudesign import CovParams, GridDesign, fisher, optimize

# maximin design for mu < -1
print(optimize.maximin_two_point(-2.0, 1.0), optimize.maximin_two_point(-3.0, 2.0))

mu, B = 0.0, 1.0
delta = optimize.maximin_two_point(mu, B, beta=1.0)
ds = np.linspace(0.1, 3, 2901)
mb = [fisher.m_B_arrhenius(GridDesign([0, 1], [0, x]), CovParams(1, 1), mu, B)
      for x in ds]
print(f"root {delta:.8f}, scan argmax {ds[np.argmax(mb)]:.3f}")

# more environment spacing always helps M_B...
print([round(fisher.m_B_arrhenius(GridDesign([0, d], [0, delta]),
                                  CovParams(1, 1), mu, B), 5) for d in (0.1, 1, 10)])

# ...but hurts once the covariance parameters are estimated too
print([round(fisher.det_frak_m(GridDesign([0, d], [0, delta]), CovParams(1, 1),
                               mu, B, mu_known=True), 5) for d in (0.1, 1, 10)])

for p in (0.0, 0.5, 0.9):
    print(p, optimize.joint_two_point_delta(mu, B, 1.0, p))

# t = 0 carries no information on (mu, B) jointly
m = fisher.m_muB_arrhenius(GridDesign([0, 1], [0, 2]), CovParams(1, 1), 0.5, 1.0)
print("det M_mu,B with t1 = 0:", m.det)
