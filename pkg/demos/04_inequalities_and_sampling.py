"""Inequality suites on fuzzed instances, and seeded Monte Carlo.

Every inequality check computes both sides exactly, so a violation would be
a genuine counterexample.  The samplers carry batch-means error bars and
are validated against the exact engines.
"""

from isinglab import (ChainSpec, Couplings, Graph, expectation,
                      fuzz_inequalities, metropolis_spin, swendsen_wang)
from isinglab.samplers import current_rejection_sampler

reports, worst = fuzz_inequalities(n_trials=30, seed=7)
n_ok = sum(r.ok for r in reports)
print("inequality checks: %d/%d passed" % (n_ok, len(reports)))
slack, serialized, rep = worst
print("tightest instance: %s slack=%.3g" % (rep.ineq_id, slack))
print("replayable graph file:")
print(serialized)

g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
c = Couplings(g, 1.0, 0.45)
exact = expectation(g, c, [0, 2])
spec = ChainSpec(seed=11, burn_in=200, sweeps=4000)
met = metropolis_spin(g, c, {"c": lambda s: float(s[0] * s[2])},
                      spec=spec)["c"]
sw = swendsen_wang(g, c, {"c": lambda s, oe: float(s[0] * s[2])},
                   spec=spec)["c"]
print("exact <s_0 s_2>      : %.6f" % exact)
print("metropolis           : %.6f +- %.6f" % (met.mean, met.stderr))
print("swendsen-wang        : %.6f +- %.6f" % (sw.mean, sw.stderr))

samples, acc = current_rejection_sampler(g, c, {0, 2}, spec=spec,
                                         n_samples=2000)
frac = sum(1.0 for s in samples if 0 in s.odd_vertices()) / len(samples)
print("current rejection    : %d sourced samples, acceptance %.3f"
      % (len(samples), acc))
