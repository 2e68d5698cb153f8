"""Z2 lattice gauge fields: Wilson loops, duality, deconfinement bounds.

In two dimensions Wilson loops obey an exact area law (tanh beta)^area.  In
three dimensions the gauge model at beta maps onto an Ising model at the
dual coupling beta* with tanh beta* = exp(-2 beta); Wilson loops map onto
disorder operators of the dual spin system.
"""

import math

from isinglab import Couplings
from isinglab.graphs import BoxGraph
from isinglab.gauge import (PlaquetteComplex, deconfinement_bound_report,
                            dual_beta, lgm_partition, rectangular_loop,
                            verify_duality, verify_wilson_disorder_duality,
                            wilson_expectation)

cx2 = PlaquetteComplex(2, (3, 3))
print("2D Wilson loops at beta=0.5 (area law):")
for ell in (1, 2, 3):
    loop = rectangular_loop(cx2, (0, 1), (0, 0), (ell, ell))
    print("  %dx%d: %-22.17g tanh^%d = %.17g"
          % (ell, ell, wilson_expectation(cx2, 0.5, loop), ell * ell,
             math.tanh(0.5) ** (ell * ell)))

beta = 0.45
print("\n3D duality, beta* =", dual_beta(beta))
cx3 = PlaquetteComplex(3, (1, 2, 2))
lhs, rhs, diff = verify_duality(cx3, beta)
print("  Z_gauge =", lhs, " dual Ising form =", rhs, " |diff| =", diff)

# the disorder check enumerates doubled currents on the dual graph, so it
# wants a smaller complex than the partition-function check above
cx_small = PlaquetteComplex(3, (1, 1, 2))
loop = rectangular_loop(cx_small, (0, 1), (0, 0, 0), (1, 1))
w, d, diff = verify_wilson_disorder_duality(cx_small, beta, loop)
print("  Wilson loop =", w, " dual disorder operator =", d)

print("\ndeconfinement bound chain on a 3x3 dual box (beta=0.5):")
box = BoxGraph(2, (3, 3))
rep = deconfinement_bound_report(box, Couplings(box, 1.0, 0.5), 0, 0.5,
                                 window={1: (0, 1)})
print("  <T_F> = %.6f >= P(U</->V) = %.6f >= prod bound = %.6f "
      ">= exp bound = %.6f" % (rep["disorder"], rep["fk_disconnect"],
                               rep["product_bound"], rep["exp_bound"]))
