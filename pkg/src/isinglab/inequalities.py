"""Correlation inequality suites with exact left/right sides.

Every check returns IneqReport records; `ok` means slack = rhs - lhs is at
least -1e-10.  All sides are computed with the exact spin oracle (or the
exact current/folding engines), so a failure is a genuine counterexample,
not noise.  A seeded fuzzer generates small random instances and keeps the
worst case in serialized graph form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graphs import Couplings, FieldSpec, Graph, serialize_graph
from . import spins

TOL = 1e-10


@dataclass
class IneqReport:
    ineq_id: str
    descriptor: str
    lhs: float
    rhs: float

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def ok(self):
        return self.slack >= -TOL


def _report(ineq_id, descriptor, lhs, rhs):
    return IneqReport(ineq_id, descriptor, float(lhs), float(rhs))


# ---------------------------------------------------------------------------
# Griffiths


def griffiths_suite(graph, couplings, fields=None, max_sets=None):
    """First and second Griffiths inequalities on a ferromagnetic instance.

    <s_A> >= 0 for every even multiset A (odd ones too when a nonnegative
    field is present), and <s_A s_B> >= <s_A><s_B>.  Vertex subsets up to
    size 2 are used, optionally truncated to `max_sets` pairs.
    """
    if not couplings.is_ferromagnetic:
        raise ValueError("Griffiths inequalities require J >= 0")
    if fields is not None and any(g != 0.0 for g in fields.g):
        raise ValueError("Griffiths inequalities require nonnegative fields")
    V = list(graph.vertices)
    sets = [(v,) for v in V] + list(itertools.combinations(V, 2))
    has_field = fields is not None and not fields.is_zero()
    reports = []
    for A in sets:
        if len(A) % 2 and not has_field:
            continue
        val = spins.expectation(graph, couplings, A, fields=fields)
        reports.append(_report("griffiths1", "<s_%s> >= 0" % (A,), 0.0, val))
    pairs = list(itertools.combinations(sets, 2))
    if max_sets is not None:
        pairs = pairs[:max_sets]
    for A, B in pairs:
        if (len(A) + len(B)) % 2 and not has_field:
            continue
        ab = spins.expectation(graph, couplings, list(A) + list(B),
                               fields=fields)
        a = spins.expectation(graph, couplings, A, fields=fields)
        b = spins.expectation(graph, couplings, B, fields=fields)
        reports.append(_report("griffiths2",
                               "<s_%s s_%s> >= product" % (A, B), a * b, ab))
    return reports


# ---------------------------------------------------------------------------
# GHS


def ghs_suite(graph, couplings, x=0, h_grid=(0.0, 0.1, 0.2, 0.3, 0.5, 0.8)):
    """Concavity of the magnetization in a uniform field, h >= 0.

    Checks -u4 >= 0 at zero field for all quadruples, and that the second
    difference of <s_x> along `h_grid` (uniform field) is nonpositive.
    Also computes, for the lexicographically first quadruple, the ratio

        (-u4/2) / (<s1 s2><s1 s3><s1 s4>)

    which the tree-diagram picture suggests should be O(1); the ratio is
    reported in the descriptor but NOT asserted.
    """
    if not couplings.is_ferromagnetic:
        raise ValueError("GHS requires J >= 0")
    V = list(graph.vertices)
    reports = []
    first_ratio = None
    for quad in itertools.combinations(V, 4):
        u4 = spins.ursell4(graph, couplings, *quad)
        if first_ratio is None:
            denom = math.prod(
                spins.expectation(graph, couplings, [quad[0], q])
                if q != quad[0] else 1.0 for q in quad[1:])
            first_ratio = (-u4 / 2.0) / denom if denom else float("nan")
        reports.append(_report("ghs_u4", "-u4%s >= 0" % (quad,), 0.0, -u4))
    if reports:
        reports[0].descriptor += " [tree-ratio %.6g, informational]" % first_ratio
    h_grid = sorted(h_grid)
    mags = []
    for h in h_grid:
        f = FieldSpec(graph.n, h={v: h for v in V})
        mags.append(spins.expectation(graph, couplings, [x], fields=f))
    for i in range(1, len(h_grid) - 1):
        # non-uniform grid second difference via divided differences
        d1 = (mags[i] - mags[i - 1]) / (h_grid[i] - h_grid[i - 1])
        d2 = (mags[i + 1] - mags[i]) / (h_grid[i + 1] - h_grid[i])
        reports.append(_report(
            "ghs_concave",
            "slope drop of <s_%d> at h=%g" % (x, h_grid[i]), d2, d1))
    return reports


# ---------------------------------------------------------------------------
# Simon-Lieb


def _reachable_subgraph(graph, couplings, S, x):
    """The subgraph of sites reachable from x by paths that stop on first
    arrival at S, with no S-S edges."""
    S = frozenset(S)
    seen = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        for e in graph.incident(v):
            u = graph.other_end(e, v)
            if u not in seen:
                seen.add(u)
                if u not in S:
                    stack.append(u)
    keep = sorted(seen)
    vmap = {v: i for i, v in enumerate(keep)}
    edges = []
    J = []
    for e, (u, v) in enumerate(graph.edges):
        if u in seen and v in seen and not (u in S and v in S):
            edges.append((vmap[u], vmap[v]))
            J.append(couplings.J[e])
    sub = Graph(len(keep), edges)
    return sub, Couplings(sub, J, couplings.beta), vmap


def _is_cut(graph, S, x, y):
    S = frozenset(S)
    if x in S or y in S:
        return True
    seen = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        for e in graph.incident(v):
            u = graph.other_end(e, v)
            if u == y:
                return False
            if u not in seen and u not in S:
                seen.add(u)
                stack.append(u)
    return True


def simon_lieb_suite(graph, couplings, x, y, S):
    """Both cut-set bounds on <s_x s_y>, verifying S separates x from y.

    Site form: <s_x s_y> <= sum_{u in S} <s_x s_u>_{G_{S,x}} <s_u s_y>,
    with G_{S,x} the x-side subgraph whose paths stop at S.
    Edge form (B = the x-side of the cut, including S): <s_x s_y> <=
    sum over cut edges (u,v) of <s_x s_u>_B tanh(beta J_uv) <s_v s_y>.
    """
    if not couplings.is_ferromagnetic:
        raise ValueError("Simon-Lieb requires J >= 0")
    S = frozenset(S)
    if not _is_cut(graph, S, x, y):
        raise ValueError("S does not separate x from y")
    lhs = spins.expectation(graph, couplings, [x, y])

    sub, subc, vmap = _reachable_subgraph(graph, couplings, S, x)
    rhs_site = 0.0
    for u in S:
        if u not in vmap:
            continue
        rhs_site += (spins.expectation(sub, subc, [vmap[x], vmap[u]])
                     * spins.expectation(graph, couplings, [u, y]))
    reports = [_report("simon_lieb_site",
                       "cut S=%s, x=%d, y=%d" % (sorted(S), x, y),
                       lhs, rhs_site)]

    # edge form: B = vertices reachable from x without leaving through S,
    # interactions restricted to edges inside B
    B = set()
    stack = [x]
    seen = {x}
    while stack:
        v = stack.pop()
        B.add(v)
        for e in graph.incident(v):
            u = graph.other_end(e, v)
            if u not in seen and u not in S:
                seen.add(u)
                stack.append(u)
    B |= S
    inside = [e for e, (u, v) in enumerate(graph.edges)
              if u in B and v in B]
    restricted = couplings.with_depleted(
        set(range(graph.n_edges)) - set(inside))
    rhs_edge = 0.0
    for e, (u, v) in enumerate(graph.edges):
        for a, b in ((u, v), (v, u)):
            if a in B and b not in B:
                rhs_edge += (spins.expectation(graph, restricted, [x, a])
                             * math.tanh(couplings.K(e))
                             * spins.expectation(graph, couplings, [b, y]))
    reports.append(_report("simon_lieb_edge",
                           "cut B=%s, x=%d, y=%d" % (sorted(B), x, y),
                           lhs, rhs_edge))
    return reports


# ---------------------------------------------------------------------------
# field-splitting (DSS) inequality


def dss_suite(graph, couplings, x, fields):
    """Field-splitting concavity checks.

    With field h + g (h >= 0 entrywise, g arbitrary):
        <s_x>_{g+h} - <s_x>_{g-h} <= <s_x>_h - <s_x>_{-h},
    plus the equivalent ghost-graph form
        <s_x s_ghost>_{h+g} + <s_x s_ghost>_{h-g} <= 2 <s_x s_ghost>_h
    evaluated on the graph enhanced with doubled ghost edges, and the
    second-order consequence <s_x; s_y>_g <= <s_x; s_y>_{g=0} (stated here
    with a zero field on the right; presumed reading of the degenerate
    original formulation).
    """
    if not couplings.is_ferromagnetic:
        raise ValueError("the field-splitting inequality requires J >= 0")
    n = graph.n

    def mag(hv, gv):
        f = FieldSpec(n, h={v: val for v, val in enumerate(hv)},
                      g={v: val for v, val in enumerate(gv)})
        return spins.expectation(graph, couplings, [x], fields=f)

    h = fields.h
    g = fields.g
    zero = [0.0] * n
    neg = lambda vec: [-v for v in vec]
    lhs = mag(h, g) - mag(zero, [gi - hi for gi, hi in zip(g, h)])
    rhs = mag(h, zero) - mag(zero, neg(h))
    reports = [_report("dss_main", "split field at x=%d" % x, lhs, rhs)]

    # ghost form on the doubled-edge graph: ghost vertex n, one h-edge and
    # one g-edge per site
    edges = list(graph.edges)
    J = list(couplings.J)
    scale = couplings.beta
    for v in range(n):
        edges.append((v, n))
        J.append(h[v])
    for v in range(n):
        edges.append((v, n))
        J.append(g[v])
    ghosted = Graph(n + 1, edges)

    def ghost_corr(gsign):
        Jg = list(J)
        for i, v in enumerate(range(n)):
            Jg[len(graph.edges) + n + i] *= gsign
        return spins.expectation(ghosted, Couplings(ghosted, Jg, scale),
                                 [x, n])

    lhs_g = ghost_corr(+1.0) + ghost_corr(-1.0)
    rhs_g = 2.0 * ghost_corr(0.0)
    reports.append(_report("dss_ghost", "ghost-edge form at x=%d" % x,
                           lhs_g, rhs_g))

    f_g = FieldSpec(n, g={v: val for v, val in enumerate(g)})
    for y in graph.vertices:
        if y == x:
            continue
        lhs_t = spins.truncated_pair(graph, couplings, x, y, fields=f_g)
        rhs_t = spins.truncated_pair(graph, couplings, x, y)
        reports.append(_report(
            "dss_truncated_presumed",
            "<s_%d; s_%d>_g <= zero-field value [presumed form]" % (x, y),
            lhs_t, rhs_t))
    return reports


# ---------------------------------------------------------------------------
# reflection-based suites (delegate to the folding engine)


def smms_suite(reflection, x, y):
    """Correlation decrease under reflection: <s_x s_y> >= <s_x s_{R(y)}>,
    together with the exact remainder identity (reported as an equality
    pair)."""
    from .folding import reflection_monotonicity_report
    rep = reflection_monotonicity_report(reflection, x, y)
    return [
        _report("smms_monotone", "x=%d, y=%d vs mirror" % (x, y),
                rep["corr_far"], rep["corr_near"]),
        _report("smms_remainder_le", "remainder = miss probability (<=)",
                rep["remainder_lhs"], rep["miss_prob"]),
        _report("smms_remainder_ge", "remainder = miss probability (>=)",
                rep["miss_prob"], rep["remainder_lhs"]),
    ]


def van_beijeren_suite(box, couplings, axis=None, x=None):
    """Antisymmetric-boundary magnetization dominates the lower-dimensional
    one on the symmetry plane."""
    from .folding import dobrushin_identities
    rep = dobrushin_identities(box, couplings, axis=axis, x=x)
    return [_report("van_beijeren", "x=%d plane lower bound" % rep["x"],
                    rep["mag_plane_lower"], rep["mag_spin"])]


# ---------------------------------------------------------------------------
# fuzzer


def _random_instance(rng, max_vertices=6, ferro=True):
    n = int(rng.integers(2, max_vertices + 1))
    pairs = list(itertools.combinations(range(n), 2))
    keep = [p for p in pairs if rng.random() < 0.7]
    if not keep:
        keep = [pairs[int(rng.integers(len(pairs)))]]
    graph = Graph(n, keep)
    J = rng.uniform(0.0 if ferro else -1.0, 1.0, size=len(keep))
    beta = float(rng.uniform(0.1, 1.5))
    return graph, Couplings(graph, list(J), beta)


def fuzz_inequalities(n_trials=50, seed=0, max_vertices=6):
    """Random-instance sweep of all suites; returns (reports, worst).

    `worst` is (slack, serialized instance, report) for the smallest slack
    seen, ready to be written to a graph file for replay.
    """
    rng = np.random.default_rng(seed)
    all_reports = []
    worst = (math.inf, None, None)
    for _ in range(n_trials):
        graph, couplings = _random_instance(rng, max_vertices)
        n = graph.n
        h = rng.uniform(0.0, 1.0, size=n)
        g = rng.uniform(-1.0, 1.0, size=n)
        f = FieldSpec(n, h=list(h), g=list(g))
        fh = FieldSpec(n, h=list(h))
        batch = []
        batch += griffiths_suite(graph, couplings, fields=fh, max_sets=10)
        batch += ghs_suite(graph, couplings)
        batch += dss_suite(graph, couplings, 0, f)
        if n >= 3:
            x, y = 0, n - 1
            if _is_cut(graph, [v for v in range(1, n - 1)], x, y):
                batch += simon_lieb_suite(graph, couplings, x, y,
                                          range(1, n - 1))
        for rep in batch:
            all_reports.append(rep)
            if rep.slack < worst[0]:
                worst = (rep.slack, serialize_graph(graph, couplings), rep)
    return all_reports, worst
