"""Exact q=2 random-cluster (FK) computations by edge-subset enumeration.

Weights: prod_{b in w} p_b prod_{b notin w} (1-p_b) * q^{N(w)}, with
p_b = 1 - exp(-2 beta |J_b|).  With a wired boundary the cluster count is
replaced by N0(w), the number of clusters not reaching a designated
boundary vertex.  Everything here is a plain 2^|E| sum; the union-find per
subset is recomputed from scratch (cheap at desk scale, and trivially
chunk-order independent).
"""

from __future__ import annotations

import math

from .currents import SupportView
from .spins import SizeError
from .unionfind import UnionFind
from . import spins, doubled

FK_EDGE_CAP = 20
Q = 2.0


def fk_weights(couplings):
    """Per-edge open probability p_b = 1 - exp(-2 K_b), K_b = beta |J_b|."""
    return [1.0 - math.exp(-2.0 * couplings.K_abs(e))
            for e in range(couplings.graph.n_edges)]


def _cluster_counts(graph, open_edges, boundary):
    uf = UnionFind(graph.n)
    for e in open_edges:
        u, v = graph.edges[e]
        uf.union(u, v)
    if boundary is None:
        return uf.count
    roots = {uf.find(v) for v in boundary}
    return uf.count - len(roots)


def fk_measure_expectation(graph, couplings, events, boundary=None,
                           cap=FK_EDGE_CAP):
    """Normalized expectations of the named events under the FK measure.

    events: dict name -> fn(SupportView) -> float.  `boundary` is a vertex
    set; when given, the cluster weight uses N0 (wired / plus state).
    Returns the dict of expectations plus '_total' (the unnormalized sum,
    which with wired counting is Z^+ e^{-beta sum J} 2^{|boundary|}).
    """
    E = graph.n_edges
    if E > cap:
        raise SizeError("2^%d cluster configurations exceed the cap" % E)
    p = fk_weights(couplings)
    acc = {name: [] for name in events}
    tot = []
    for mask in range(1 << E):
        w = 1.0
        open_edges = []
        for e in range(E):
            if mask & (1 << e):
                w *= p[e]
                open_edges.append(e)
            else:
                w *= 1.0 - p[e]
        if w == 0.0:
            continue
        w *= Q ** _cluster_counts(graph, open_edges, boundary)
        tot.append(w)
        view = SupportView(graph, open_edges)
        for name, fn in events.items():
            val = fn(view)
            if val:
                acc[name].append(w * float(val))
    total = math.fsum(tot)
    out = {name: math.fsum(v) / total for name, v in acc.items()}
    out["_total"] = total
    return out


def connection_probability(graph, couplings, x, y, cap=FK_EDGE_CAP):
    """P^FK(x <-> y); equals <s_x s_y> for ferromagnetic couplings."""
    return fk_measure_expectation(
        graph, couplings,
        {"c": lambda sv: 1.0 if sv.connected(x, y) else 0.0}, cap=cap)["c"]


def fk_rcr_bridge(graph, couplings, x, y):
    """(fk_prob, rcr_prob): the FK connection probability and the
    double-current one; fk_prob^2 = rcr_prob, both tied to <s_x s_y>."""
    if not couplings.is_ferromagnetic:
        raise ValueError("the bridge identity needs ferromagnetic couplings")
    fk_prob = connection_probability(graph, couplings, x, y)
    rcr_prob = doubled.double_event_probability(
        graph, couplings, frozenset(), frozenset(),
        lambda st: 1.0 if st.view().connected(x, y) else 0.0)
    return fk_prob, rcr_prob


def fk_frustration_adjusted(graph, couplings, u=None, v=None):
    """Frustration-adjusted FK for mixed-sign J.

    Under the |J| cluster measure: Z(J)/Z(|J|) = P(w is J-frustration-free),
    and <s_u s_v>_J = E(sgn_J(u,v;w) | FF), with sgn the relative parity of
    the u-v connection across negative edges (0 when disconnected).
    Cross-checks both against the spin oracle; returns a report dict.
    """
    neg = couplings.negative_edges()
    abs_c = couplings.with_abs()
    events = {"ff": lambda sv: 1.0 if sv.is_ff(neg) else 0.0}
    if u is not None:
        events["sgn"] = lambda sv: sv.sgn(u, v, neg)
    out = fk_measure_expectation(graph, abs_c, events)
    z_ratio = (spins.partition_function(graph, couplings)
               / spins.partition_function(graph, abs_c))
    rep = {
        "ff_prob": out["ff"],
        "z_ratio_spin": z_ratio,
        "z_match": abs(out["ff"] - z_ratio),
    }
    if u is not None:
        corr = spins.expectation(graph, couplings, [u, v])
        rep["corr_fk"] = out["sgn"] / out["ff"]
        rep["corr_spin"] = corr
        rep["corr_match"] = abs(rep["corr_fk"] - corr)
    return rep


def fk_boundary_report(graph, couplings, boundary_spec, x=None):
    """Mixed-boundary FK formulas against the clamped spin oracle.

    Computes Z^pm/Z^+ = P^{FK,+}(bdry- not<-> bdry+) and, for an interior x,
    <s_x>^pm = P(x<->bdry+ | FF) - P(x<->bdry- | FF) and
    <s_x>^+ = P(x<->bdry).
    """
    plus = boundary_spec.plus_set
    minus = boundary_spec.minus_set
    bdry = plus | minus
    events = {
        "ff": lambda sv: 0.0 if sv.connects_sets(minus, plus) else 1.0,
    }
    if x is not None:
        events["x_bdry"] = lambda sv: 1.0 if sv.connects_sets([x], bdry) else 0.0
        events["x_plus"] = lambda sv: (
            (1.0 if sv.connects_sets([x], plus) else 0.0)
            * (0.0 if sv.connects_sets(minus, plus) else 1.0))
        events["x_minus"] = lambda sv: (
            (1.0 if sv.connects_sets([x], minus) else 0.0)
            * (0.0 if sv.connects_sets(minus, plus) else 1.0))
    out = fk_measure_expectation(graph, couplings, events, boundary=bdry)
    z_pm = spins.partition_function(graph, couplings, boundary=boundary_spec)
    z_p = spins.partition_function(graph, couplings,
                                   boundary=boundary_spec.all_plus())
    rep = {"ratio_fk": out["ff"], "ratio_spin": z_pm / z_p}
    if x is not None:
        rep["mag_pm_fk"] = (out["x_plus"] - out["x_minus"]) / out["ff"]
        rep["mag_pm_spin"] = spins.expectation(graph, couplings, [x],
                                               boundary=boundary_spec)
        rep["mag_plus_fk"] = out["x_bdry"]
        rep["mag_plus_spin"] = spins.expectation(
            graph, couplings, [x], boundary=boundary_spec.all_plus())
    return rep


# ---------------------------------------------------------------------------
# monotone event library and FKG spot checks


def monotone_event(event_id, *args):
    """Built-in increasing functions of the open edge set.

    ids: 'connect' (u, v), 'connect_sets' (U, V), 'open_count',
    'all_open' (edge list).
    """
    if event_id == "connect":
        u, v = args
        return lambda sv: 1.0 if sv.connected(u, v) else 0.0
    if event_id == "connect_sets":
        U, V = args
        return lambda sv: 1.0 if sv.connects_sets(U, V) else 0.0
    if event_id == "open_count":
        return lambda sv: float(len(sv.edge_ids))
    if event_id == "all_open":
        (edges,) = args
        need = frozenset(edges)
        return lambda sv: 1.0 if need <= sv.edge_ids else 0.0
    raise ValueError("unknown or non-monotone event id %r" % event_id)


def fkg_spot_check(graph, couplings, spec_f, spec_g, boundary=None):
    """(covariance, pass): positive association of two increasing events.

    spec_f / spec_g: (event_id, *args) tuples resolved via monotone_event.
    """
    if not couplings.is_ferromagnetic:
        raise ValueError("FKG spot checks assume ferromagnetic couplings")
    F = monotone_event(*spec_f)
    G = monotone_event(*spec_g)
    out = fk_measure_expectation(
        graph, couplings,
        {"f": F, "g": G, "fg": lambda sv: F(sv) * G(sv)}, boundary=boundary)
    cov = out["fg"] - out["f"] * out["g"]
    return cov, cov >= -1e-12
