"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import decimal
from decimal import Decimal
from fractions import Fraction
from math import comb

import numpy as np

from essc.graph import MultiGraph


def two_cliques(k: int = 10) -> MultiGraph:
    """Two disjoint k-cliques on vertices 0..k-1 and k..2k-1."""
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges += [(i, j) for i in range(k, 2 * k) for j in range(i + 1, 2 * k)]
    return MultiGraph.from_edges(2 * k, edges)


def triangle() -> MultiGraph:
    return MultiGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def random_multigraph(rng: np.random.Generator, n: int, m: int) -> MultiGraph:
    """Random multigraph with m edges, self-loops and repeats allowed."""
    u = rng.integers(0, n, size=m)
    v = rng.integers(0, n, size=m)
    return MultiGraph.from_pair_arrays(n, u, v)


def random_simple_gnp(rng: np.random.Generator, n: int, p: float) -> MultiGraph:
    mask = rng.random((n, n)) < p
    us, vs = [], []
    for i in range(n):
        for j in range(i + 1, n):
            if mask[i, j]:
                us.append(i)
                vs.append(j)
    return MultiGraph.from_pair_arrays(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64))


def survival_exact(k: int, p: float, x: int) -> Fraction:
    """P(Bin(k, p) >= x) in exact rational arithmetic (p taken as the
    exact binary64 rational)."""
    if x <= 0:
        return Fraction(1)
    if x > k:
        return Fraction(0)
    pf = Fraction(p)
    qf = 1 - pf
    return sum(
        (comb(k, j) * pf ** j * qf ** (k - j) for j in range(x, k + 1)),
        start=Fraction(0),
    )


def survival_reference(k: int, p: float, x: int, digits: int = 60) -> Decimal:
    """High-precision P(Bin(k, p) >= x) via a Decimal term recurrence.

    Sums the shorter, numerically safe side: the upper tail directly when
    x is above the mean (terms decay, early stop), else one minus the
    lower tail. Accurate to far better than 1e-30 for the sizes used in
    the tests; independent of scipy.
    """
    if x <= 0:
        return Decimal(1)
    if x > k:
        return Decimal(0)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.Emax = 10 ** 9
        ctx.Emin = -(10 ** 9)
        pd = Decimal(p)
        qd = 1 - pd
        if pd == 0:
            return Decimal(0)
        if qd == 0:
            return Decimal(1)
        mean = pd * k
        if Decimal(x) > mean:
            term = Decimal(comb(k, x)) * pd ** x * qd ** (k - x)
            total = term
            j = x
            cutoff = Decimal(10) ** (-(digits - 10))
            while j < k:
                term = term * (k - j) * pd / ((j + 1) * qd)
                j += 1
                total += term
                if term < total * cutoff:
                    break
            return +total
        term = qd ** k
        total = term
        for j in range(x - 1):
            term = term * (k - j) * pd / ((j + 1) * qd)
            total += term
        return +(1 - total)


def bh_bruteforce(pvalues, alpha: float) -> frozenset[int]:
    """Reference FDR selection: test the threshold inequality at every k."""
    p = list(map(float, pvalues))
    n = len(p)
    order = sorted(range(n), key=lambda i: (p[i], i))
    best = 0
    for k in range(1, n + 1):
        if p[order[k - 1]] <= (k / n) * alpha:
            best = k
    return frozenset(order[:best])


def flatten_to_partition(communities, background, n: int) -> list[set[int]]:
    """Detection output as a partition: first-containment assignment plus
    one background block."""
    assigned: dict[int, int] = {}
    for ci, c in enumerate(communities):
        for v in c:
            assigned.setdefault(v, ci)
    blocks: list[set[int]] = [set() for _ in range(len(communities))]
    for v, ci in assigned.items():
        blocks[ci].add(v)
    blocks = [b for b in blocks if b]
    rest = set(range(n)) - set(assigned)
    if rest:
        blocks.append(rest)
    return blocks
