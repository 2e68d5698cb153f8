"""Brute-force Gibbs oracle: exact 2^|V| spin sums.

Partition values carry the 1/2^{#unclamped} normalization, i.e.

    Z = 2^{-|free|} sum_{sigma on free} exp( sum_b K_b s s + sum_x H_x s )

with K_b = beta*J_b, H_x = beta*(h_x + g_x), and clamped spins held fixed.
Accumulation uses math.fsum, so results are independent of chunking.
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_CAP = 26
_CHUNK = 1 << 16


class SizeError(ValueError):
    pass


def _clamped_from(boundary):
    if boundary is None:
        return {}
    return boundary.clamped()


def _spin_chunks(n_free):
    """Yield (lo, spins) with spins in {-1,+1}, shape (chunk, n_free)."""
    total = 1 << n_free
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        idx = np.arange(lo, hi, dtype=np.uint64)
        bits = ((idx[:, None] >> np.arange(n_free, dtype=np.uint64)) & 1)
        yield lo, bits.astype(np.int8) * 2 - 1


def _weights_and_spins(graph, couplings, fields=None, boundary=None, cap=DEFAULT_CAP):
    clamp = _clamped_from(boundary)
    free = [v for v in graph.vertices if v not in clamp]
    if len(free) > cap:
        raise SizeError("2^%d spin configurations exceed the cap 2^%d"
                        % (len(free), cap))
    beta = couplings.beta
    H = np.zeros(graph.n)
    if fields is not None:
        for v in graph.vertices:
            H[v] = beta * fields.total(v)
    K = np.array([beta * j for j in couplings.J])
    e_u = np.array([u for (u, _) in graph.edges], dtype=np.intp)
    e_v = np.array([v for (_, v) in graph.edges], dtype=np.intp)
    free_idx = np.array(free, dtype=np.intp)

    base = np.zeros(graph.n, dtype=np.float64)
    for v, s in clamp.items():
        base[v] = s

    for lo, spins in _spin_chunks(len(free)):
        full = np.tile(base, (spins.shape[0], 1))
        if len(free):
            full[:, free_idx] = spins
        energy = full @ H
        if graph.n_edges:
            energy = energy + (full[:, e_u] * full[:, e_v]) @ K
        yield full, np.exp(energy)


def partition_function(graph, couplings, fields=None, boundary=None, cap=DEFAULT_CAP):
    clamp = _clamped_from(boundary)
    n_free = graph.n - len(clamp)
    parts = []
    for _, w in _weights_and_spins(graph, couplings, fields, boundary, cap):
        parts.append(math.fsum(w.tolist()))
    return math.fsum(parts) / (1 << n_free)


def _reduce_multiset(A):
    """sigma^2 = 1: keep vertices appearing an odd number of times."""
    out = {}
    for v in A:
        out[v] = out.get(v, 0) ^ 1
    return [v for v, p in out.items() if p]


def expectation(graph, couplings, A, fields=None, boundary=None, cap=DEFAULT_CAP):
    """< prod_{x in A} sigma_x > ; A is a vertex multiset."""
    sites = _reduce_multiset(A)
    num, den = [], []
    for spins, w in _weights_and_spins(graph, couplings, fields, boundary, cap):
        obs = np.ones(len(w))
        for v in sites:
            obs = obs * spins[:, v]
        num.append(math.fsum((w * obs).tolist()))
        den.append(math.fsum(w.tolist()))
    return math.fsum(num) / math.fsum(den)


def ursell4(graph, couplings, x1, x2, x3, x4, boundary=None, cap=DEFAULT_CAP):
    """U4 = <1234> - <12><34> - <13><24> - <14><23>  (zero field)."""
    if len({x1, x2, x3, x4}) != 4:
        raise ValueError("ursell4 needs four distinct sites")
    s4 = expectation(graph, couplings, [x1, x2, x3, x4], boundary=boundary, cap=cap)
    p = lambda a, b: expectation(graph, couplings, [a, b], boundary=boundary, cap=cap)
    return s4 - (p(x1, x2) * p(x3, x4) + p(x1, x3) * p(x2, x4)
                 + p(x1, x4) * p(x2, x3))


def truncated_pair(graph, couplings, x, y, fields=None, boundary=None, cap=DEFAULT_CAP):
    """<sigma_x sigma_y> - <sigma_x><sigma_y>."""
    return (expectation(graph, couplings, [x, y], fields, boundary, cap)
            - expectation(graph, couplings, [x], fields, boundary, cap)
            * expectation(graph, couplings, [y], fields, boundary, cap))
