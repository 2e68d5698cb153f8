import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_instance
from isinglab.graphs import Couplings, Graph
from isinglab import spins
from isinglab.currents import (ConstraintError, SourceConstraint, SupportView,
                               correlation_via_currents, current_sum,
                               truncated_flux_sum)


def test_single_edge_partition():
    g = Graph(2, [(0, 1)])
    c = Couplings(g, 1.0, 0.7)
    z = current_sum(g, c, SourceConstraint.exact(frozenset()))
    assert z == pytest.approx(math.cosh(0.7))
    z2 = current_sum(g, c, SourceConstraint.exact(frozenset({0, 1})))
    assert z2 == pytest.approx(math.sinh(0.7))


def test_correlation_matches_spin_oracle(triangle):
    c = Couplings(triangle, [0.8, 0.3, 0.5], 1.0)
    for A in ([0, 1], [0, 2], [1, 2]):
        assert correlation_via_currents(triangle, c, A) == pytest.approx(
            spins.expectation(triangle, c, A), abs=1e-12)


def test_odd_sources_rejected(triangle):
    c = Couplings(triangle, 1.0, 0.5)
    with pytest.raises(ConstraintError):
        SourceConstraint.exact(frozenset({0}))


def test_relaxed_boundary_equals_clamped_oracle():
    # relaxing the source constraint on a vertex set is the same as summing
    # the spin model with those spins clamped (up to normalization), so the
    # ratio of relaxed current sums matches a ratio of clamped partition fns
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    c = Couplings(g, 1.0, 0.6)
    relax = SourceConstraint.relaxed_on_boundary(frozenset(), frozenset({0, 2}))
    z_relax = current_sum(g, c, relax)
    z_exact = current_sum(g, c, SourceConstraint.exact(frozenset()))
    assert z_relax >= z_exact


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_trichotomy_vs_truncated_flux(seed):
    """The 3-state pushforward equals the integer-flux sum (cutoff 40)."""
    rng = np.random.default_rng(seed)
    g, c = random_instance(rng, max_vertices=4, max_edges=5)
    V = list(g.vertices)
    A = frozenset() if rng.random() < 0.5 else \
        frozenset(rng.choice(V, 2, replace=False).tolist())
    lhs = current_sum(g, c, SourceConstraint.exact(A))
    rhs = truncated_flux_sum(g, c, A)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_event_weighting_is_support_measurable(triangle):
    c = Couplings(triangle, 1.0, 0.5)
    z = current_sum(triangle, c, SourceConstraint.exact(frozenset()))
    ev = lambda cfg: 1.0 if SupportView(triangle, cfg.support).connected(0, 1) \
        else 0.0
    num = current_sum(triangle, c, SourceConstraint.exact(frozenset()),
                      event=ev)
    assert 0.0 < num < z


def test_support_view_connectivity():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    sv = SupportView(g, [0, 2])
    assert sv.connected(0, 1)
    assert not sv.connected(1, 2)
    assert sv.connects_sets({0}, {1})
    assert not sv.connects_sets({0}, {3})


def test_support_view_sign_and_ff():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    # negative edge on (0,1); the open triangle 0-1, 1-2 has sgn(0,2) = -1
    sv = SupportView(g, [0, 1])
    assert sv.is_ff(frozenset({0}))
    assert sv.sgn(0, 2, frozenset({0})) == -1.0
    assert sv.sgn(0, 2, frozenset()) == 1.0
    # closing the triangle with one negative edge frustrates it
    sv_all = SupportView(g, [0, 1, 2])
    assert not sv_all.is_ff(frozenset({0}))


def test_pairable_predicate(triangle):
    sv = SupportView(triangle, [0])  # edge 0 = (0,1)
    assert sv.pairable(frozenset({0, 1}))
    assert not sv.pairable(frozenset({0, 2}))
    assert sv.pairable(frozenset())
