"""Single random-current sums via the per-edge trichotomy.

A current n: E -> Z+ with weight prod (beta J)^n / n! is pushed forward onto
its per-edge (parity, support) class:

    Zero      weight 1
    Odd       weight sinh K
    EvenPos   weight cosh K - 1          with K = beta |J|.

Every event in scope is measurable with respect to (parity, support), so the
infinite flux sum collapses to a finite 3^|E| enumeration.  Signs of
antiferromagnetic couplings are tracked separately: a configuration picks up
(-1) for each Odd negative edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .spins import SizeError
from .unionfind import ParityUnionFind, UnionFind

ZERO, ODD, EVENPOS = 0, 1, 2

SINGLE_EDGE_CAP = 20


class ConstraintError(ValueError):
    pass


class SourceConstraint:
    """Exact sources, or sources free on a boundary set."""

    def __init__(self, mode, sources, boundary=frozenset()):
        if mode not in ("exact", "relaxed"):
            raise ValueError(mode)
        sources = frozenset(sources)
        if mode == "exact" and len(sources) % 2 == 1:
            raise ConstraintError("odd source set %r" % (set(sources),))
        if mode == "relaxed" and sources & frozenset(boundary):
            raise ConstraintError("relaxed sources must lie off the boundary")
        self.mode = mode
        self.sources = sources
        self.boundary = frozenset(boundary)

    @classmethod
    def exact(cls, A):
        return cls("exact", A)

    @classmethod
    def relaxed_on_boundary(cls, A_interior, boundary):
        return cls("relaxed", A_interior, boundary)

    def satisfied_by(self, odd_vertices):
        if self.mode == "exact":
            return frozenset(odd_vertices) == self.sources
        return frozenset(odd_vertices) - self.boundary == self.sources


@dataclass(frozen=True)
class EdgeStateConfig:
    """One trichotomy state over the edges of a graph."""
    graph: object
    states: tuple

    @property
    def odd_edges(self):
        return frozenset(e for e, s in enumerate(self.states) if s == ODD)

    @property
    def support(self):
        return frozenset(e for e, s in enumerate(self.states) if s != ZERO)

    def odd_vertices(self):
        deg = [0] * self.graph.n
        for e, s in enumerate(self.states):
            if s == ODD:
                u, v = self.graph.edges[e]
                deg[u] ^= 1
                deg[v] ^= 1
        return frozenset(v for v in self.graph.vertices if deg[v])


class SignTracker:
    """(-1)^{total Odd flux over the tracked edge set}."""

    def __init__(self, edges):
        self.edges = frozenset(edges)

    def sign(self, odd_edges):
        return -1.0 if len(self.edges & odd_edges) % 2 else 1.0

    @classmethod
    def for_couplings(cls, couplings):
        return cls(couplings.negative_edges())


def edge_weight_table(couplings):
    """Per edge: (1, sinh K, cosh K - 1) with K = beta |J|."""
    out = []
    for e in range(couplings.graph.n_edges):
        K = couplings.K_abs(e)
        out.append((1.0, math.sinh(K), math.cosh(K) - 1.0))
    return out


def current_sum(graph, couplings, constraint, signed=False, event=None,
                sign_edges=None, cap=SINGLE_EDGE_CAP):
    """Sum of trichotomy weights over states meeting the source constraint.

    With exact empty sources, unsigned, no event this equals the spin-oracle
    partition function (for ferromagnetic J); the signed variant multiplies
    each term by (-1)^{Odd flux over sign_edges} (default: negative edges).
    """
    E = graph.n_edges
    if E > cap:
        raise SizeError("3^%d current states exceed the cap 3^%d" % (E, cap))
    weights = edge_weight_table(couplings)
    if sign_edges is None:
        sign_edges = couplings.negative_edges()
    sign_edges = frozenset(sign_edges)
    ends = graph.edges
    terms = []
    states = [ZERO] * E

    def rec(e, w, parity, neg_parity):
        if e == E:
            odd = frozenset(v for v in range(graph.n) if parity & (1 << v))
            if not constraint.satisfied_by(odd):
                return
            t = w
            if signed and (neg_parity & 1):
                t = -t
            if event is not None:
                cfg = EdgeStateConfig(graph, tuple(states))
                ev = event(cfg)
                if ev is False or ev == 0:
                    return
                if ev is not True:
                    t *= ev
            terms.append(t)
            return
        w0, wo, we = weights[e]
        u, v = ends[e]
        states[e] = ZERO
        rec(e + 1, w * w0, parity, neg_parity)
        if wo:
            states[e] = ODD
            rec(e + 1, w * wo, parity ^ (1 << u) ^ (1 << v),
                neg_parity + (1 if e in sign_edges else 0))
        if we:
            states[e] = EVENPOS
            rec(e + 1, w * we, parity, neg_parity)
        states[e] = ZERO

    rec(0, 1.0, 0, 0)
    return math.fsum(terms)


def correlation_via_currents(graph, couplings, A, cap=SINGLE_EDGE_CAP):
    """<sigma_A> as a ratio of source-constrained current sums."""
    A = frozenset(A)
    signed = not couplings.is_ferromagnetic
    num = current_sum(graph, couplings, SourceConstraint.exact(A),
                      signed=signed, cap=cap)
    den = current_sum(graph, couplings, SourceConstraint.exact(frozenset()),
                      signed=signed, cap=cap)
    return num / den


def truncated_flux_sum(graph, couplings, A, cutoff=40):
    """Independent oracle for the trichotomy: sum w(n) over integer currents
    with per-edge flux <= cutoff and exact sources A, via truncated series
    of cosh/sinh split by flux parity."""
    A = frozenset(A)
    if len(A) % 2:
        raise ConstraintError("odd source set")
    even_s, odd_s = [], []
    for e in range(graph.n_edges):
        K = couplings.K_abs(e)
        ev = od = 0.0
        term = 1.0
        for n in range(cutoff + 1):
            if n > 0:
                term *= K / n
            if n % 2 == 0:
                ev += term
            else:
                od += term
        even_s.append(ev)
        odd_s.append(od)
    E = graph.n_edges
    terms = []
    for mask in range(1 << E):
        parity = 0
        w = 1.0
        for e in range(E):
            if mask & (1 << e):
                u, v = graph.edges[e]
                parity ^= (1 << u) ^ (1 << v)
                w *= odd_s[e]
            else:
                w *= even_s[e]
        odd = frozenset(v for v in range(graph.n) if parity & (1 << v))
        if odd == A:
            terms.append(w)
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# support views shared by the double-current and FK engines


class SupportView:
    """Connectivity/parity queries against a fixed edge subset."""

    def __init__(self, graph, edge_ids):
        self.graph = graph
        self.edge_ids = frozenset(edge_ids)
        uf = UnionFind(graph.n)
        touched = set()
        for e in self.edge_ids:
            u, v = graph.edges[e]
            uf.union(u, v)
            touched.add(u)
            touched.add(v)
        self._uf = uf
        self.touched = touched

    def connected(self, u, v):
        return self._uf.connected(u, v)

    def connects_sets(self, U, V):
        roots = {self._uf.find(u) for u in U}
        return any(self._uf.find(v) in roots for v in V)

    def vertex_connected_to(self, targets):
        """Set of vertices support-connected (possibly trivially) to targets."""
        roots = {self._uf.find(t) for t in targets}
        return {v for v in self.graph.vertices if self._uf.find(v) in roots}

    def pairable(self, B):
        """Existence of k <= m with boundary B inside this support: every
        B-vertex is touched and each component holds an even number of them."""
        B = frozenset(B)
        if not B:
            return True
        if not B <= self.touched:
            return False
        counts = {}
        for b in B:
            r = self._uf.find(b)
            counts[r] = counts.get(r, 0) + 1
        return all(c % 2 == 0 for c in counts.values())

    def parity_labels(self, flagged_edges):
        """ParityUnionFind of the support with parity 1 on flagged edges;
        .consistent is False iff some support cycle is odd over the flags."""
        puf = ParityUnionFind(self.graph.n)
        for e in self.edge_ids:
            u, v = self.graph.edges[e]
            puf.union(u, v, 1 if e in flagged_edges else 0)
        return puf

    def is_ff(self, negative_edges):
        return self.parity_labels(negative_edges).consistent

    def sgn(self, u, v, negative_edges):
        """Relative-parity sign of the u-v connection; 0 unless the support
        is frustration-free and actually connects u to v."""
        puf = self.parity_labels(negative_edges)
        if not puf.consistent:
            return 0.0
        p = puf.relative_parity(u, v)
        if p is None or not (u in self.touched and v in self.touched):
            return 0.0
        return -1.0 if p else 1.0
