"""Random-graph benchmark generators with planted ground truth.

Families provided:

- ``er``: Erdos-Renyi G(n, p) with p chosen for a target mean degree;
  truth is all background.
- ``config``: uniform stub pairing against a fixed degree sequence
  (power-law sampled for the CLI); truth is all background.
- ``sbm_single``: a two-block model with one denser block planted in a
  uniform background.
- ``lfr``: power-law degrees and community sizes with a per-vertex
  internal/external degree split, wired by stub matching.
- ``lfr_bg``: the ``lfr`` construction on a random pi-fraction of the
  vertices, plus background vertices connected uniformly to everyone.

All generators are deterministic given their seed; one generator call
consumes a single RNG stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import GenerationError, ParameterError
from .graph import MultiGraph, VertexSet

KINDS = ("er", "config", "sbm_single", "lfr", "lfr_bg")

_REWIRE_PASSES = 100
_ASSIGN_ATTEMPTS = 100


@dataclass(frozen=True)
class BenchmarkSpec:
    """Parameter bundle for one benchmark family.

    Fields must be present exactly when relevant to `kind`; `validate`
    enforces that.
    """

    kind: str
    n: int
    dbar: float | None = None
    tau1: float | None = None
    tau2: float | None = None
    mu: float | None = None
    s1: int | None = None
    s2: int | None = None
    rho: float | None = None
    pi: float | None = None
    kappa: float | None = None
    theta: float | None = None
    rng_seed: int | None = None

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ParameterError(f"unknown benchmark kind {self.kind!r}")
        if self.n < 0:
            raise ParameterError("n must be >= 0")
        required = {
            "er": ("dbar",),
            "config": ("dbar", "tau1"),
            "sbm_single": ("pi", "kappa", "theta"),
            "lfr": ("dbar", "tau1", "tau2", "mu", "s1", "s2", "rho"),
            "lfr_bg": ("dbar", "tau1", "tau2", "mu", "s1", "s2", "pi"),
        }[self.kind]
        optional = ("rng_seed",)
        for name in ("dbar", "tau1", "tau2", "mu", "s1", "s2", "rho", "pi", "kappa", "theta"):
            value = getattr(self, name)
            if name in required and value is None:
                raise ParameterError(f"{self.kind} spec requires {name}")
            if name not in required and name not in optional and value is not None:
                raise ParameterError(f"{name} is not a parameter of kind {self.kind}")
        if self.pi is not None and not 0.0 < self.pi < 1.0:
            raise ParameterError("pi must lie in (0, 1)")
        if self.mu is not None and not 0.0 < self.mu < 1.0:
            raise ParameterError("mu must lie in (0, 1)")
        if self.rho is not None and not 0.0 <= self.rho < 1.0:
            raise ParameterError("rho must lie in [0, 1)")
        if self.s1 is not None and not 1 <= self.s1 <= self.s2:
            raise ParameterError("community size range requires 1 <= s1 <= s2")


@dataclass(frozen=True)
class GroundTruth:
    """Planted communities plus the vertices left outside all of them."""

    communities: list[VertexSet]
    background: VertexSet


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _unrank_pair(t: int, n: int) -> tuple[int, int]:
    # invert the row-major enumeration of pairs (i, j), i < j
    i = int((2 * n - 1 - math.isqrt((2 * n - 1) ** 2 - 8 * t)) // 2)
    while (i + 1) * (2 * n - i - 2) // 2 <= t:
        i += 1
    while i * (2 * n - i - 1) // 2 > t:
        i -= 1
    j = t - i * (2 * n - i - 1) // 2 + i + 1
    return i, j


def _bernoulli_indices(space: int, p: float, rng: np.random.Generator) -> list[int]:
    """Indices of successes among `space` independent Bernoulli(p) slots."""
    if space <= 0 or p <= 0.0:
        return []
    if p >= 1.0:
        return list(range(space))
    out: list[int] = []
    logq = math.log1p(-p)
    t = -1
    while True:
        t += 1 + int(math.log1p(-rng.random()) / logq)
        if t >= space:
            return out
        out.append(t)


def _pairs_within(members: np.ndarray, p: float, rng) -> tuple[list[int], list[int]]:
    m = len(members)
    us, vs = [], []
    for t in _bernoulli_indices(m * (m - 1) // 2, p, rng):
        i, j = _unrank_pair(t, m)
        us.append(int(members[i]))
        vs.append(int(members[j]))
    return us, vs


def _pairs_between(a: np.ndarray, b: np.ndarray, p: float, rng) -> tuple[list[int], list[int]]:
    us, vs = [], []
    for t in _bernoulli_indices(len(a) * len(b), p, rng):
        us.append(int(a[t // len(b)]))
        vs.append(int(b[t % len(b)]))
    return us, vs


def gen_erdos_renyi(n: int, dbar: float, rng_seed=None) -> tuple[MultiGraph, GroundTruth]:
    """Erdos-Renyi graph where each pair is linked with probability dbar/(n-1).

    Ground truth: no communities, every vertex background.
    """
    if n < 0:
        raise ParameterError("n must be >= 0")
    if dbar < 0:
        raise ParameterError("dbar must be >= 0")
    if n > 1 and dbar > n - 1:
        raise ParameterError(f"dbar={dbar} exceeds n-1={n - 1}")
    rng = _rng(rng_seed)
    p = dbar / (n - 1) if n > 1 else 0.0
    us, vs = _pairs_within(np.arange(n), p, rng)
    g = MultiGraph.from_pair_arrays(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64))
    return g, GroundTruth(communities=[], background=frozenset(range(n)))


def pair_stubs(degrees: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Uniform stub pairing: the sampling core of `gen_configuration`.

    Returns endpoint arrays of the matched edges; self-loops and
    multi-edges are kept.
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    stubs = np.repeat(np.arange(len(degrees), dtype=np.int64), degrees)
    perm = rng.permutation(stubs)
    return perm[0::2], perm[1::2]


def gen_configuration(degrees: Sequence[int] | np.ndarray, rng_seed=None) -> MultiGraph:
    """Uniform random multigraph with exactly the given degree sequence."""
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.size and degrees.min() < 0:
        raise ParameterError("degrees must be >= 0")
    if int(degrees.sum()) % 2 != 0:
        raise ParameterError("degree sum must be even")
    rng = _rng(rng_seed)
    a, b = pair_stubs(degrees, rng)
    return MultiGraph.from_pair_arrays(len(degrees), a, b)


def _powerlaw_mean_table(tau: float, d_max: int) -> tuple[np.ndarray, np.ndarray]:
    # suffix sums give the truncated-distribution mean for every d_min at once
    support = np.arange(1, d_max + 1, dtype=np.float64)
    w = support ** (-float(tau))
    sw = np.cumsum(w[::-1])[::-1]
    sdw = np.cumsum((support * w)[::-1])[::-1]
    return support, sdw / sw


def sample_powerlaw_degrees(
    n: int, tau: float, dbar: float, rng_seed=None, d_max: int | None = None
) -> np.ndarray:
    """Degree sequence from a truncated discrete power law P(d) ~ d^-tau.

    The support is [d_min, d_max] with d_max defaulting to
    min(n - 1, 10 * dbar); the lower cutoff d_min is chosen so the
    distribution mean is as close as possible to dbar. An odd total is
    fixed by incrementing the smallest-degree vertex.
    """
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if tau <= 1.0:
        raise ParameterError("tau must be > 1")
    if dbar < 1.0:
        raise ParameterError("dbar must be >= 1")
    if d_max is None:
        d_max = min(n - 1, int(round(10 * dbar)))
    else:
        d_max = min(n - 1, int(d_max))
    if d_max < 1:
        raise ParameterError(f"no feasible degree support for n={n}, dbar={dbar}")
    support, means = _powerlaw_mean_table(tau, d_max)
    if dbar > d_max or dbar < means[0] - 0.5:
        raise ParameterError(
            f"mean degree {dbar} unreachable on support [1, {d_max}] with tau={tau}"
        )
    d_min = int(np.argmin(np.abs(means - dbar))) + 1
    rng = _rng(rng_seed)
    sub = np.arange(d_min, d_max + 1, dtype=np.int64)
    w = sub.astype(np.float64) ** (-float(tau))
    degrees = rng.choice(sub, size=n, p=w / w.sum())
    if int(degrees.sum()) % 2 != 0:
        degrees[int(np.argmin(degrees))] += 1
    return degrees.astype(np.int64)


def single_embedded_theta(n: int, pi: float, kappa: float, dbar: float) -> float:
    """Base edge probability theta giving expected mean degree dbar."""
    if n < 2:
        raise ParameterError("n must be >= 2")
    return dbar / ((n - 1) * (1.0 + (kappa - 1.0) * pi * pi))


def gen_single_embedded(
    n: int, pi: float, kappa: float, theta: float, rng_seed=None
) -> tuple[MultiGraph, GroundTruth]:
    """Two-block model with one embedded community in a uniform background.

    Vertices land in the community block with probability pi; pairs
    inside it are linked with probability theta * kappa and every other
    pair with probability theta. Ground truth: the community block,
    background the rest.
    """
    if not 0.0 < pi < 1.0:
        raise ParameterError("pi must lie in (0, 1)")
    if kappa < 1.0:
        # kappa = 1 is admitted as the degenerate uniform (no-contrast) case
        raise ParameterError("kappa must be >= 1")
    if theta <= 0.0 or theta * kappa > 1.0:
        raise ParameterError("theta must satisfy 0 < theta * kappa <= 1")
    rng = _rng(rng_seed)
    in_comm = rng.random(n) < pi
    c1 = np.nonzero(in_comm)[0]
    c2 = np.nonzero(~in_comm)[0]
    us, vs = _pairs_within(c1, theta * kappa, rng)
    for part in (_pairs_between(c1, c2, theta, rng) if len(c1) and len(c2) else ([], []),
                 _pairs_within(c2, theta, rng)):
        us += part[0]
        vs += part[1]
    g = MultiGraph.from_pair_arrays(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64))
    truth = GroundTruth(
        communities=[frozenset(int(v) for v in c1)],
        background=frozenset(int(v) for v in c2),
    )
    return g, truth


def _sample_community_sizes(slots: int, tau2: float, s1: int, s2: int, rng) -> list[int]:
    """Power-law community sizes covering exactly `slots` membership seats."""
    support = np.arange(s1, s2 + 1, dtype=np.int64)
    w = support.astype(np.float64) ** (-float(tau2))
    w /= w.sum()
    sizes: list[int] = []
    total = 0
    while total < slots:
        s = int(rng.choice(support, p=w))
        if total + s <= slots:
            sizes.append(s)
            total += s
            continue
        deficit = slots - total
        if deficit >= s1:
            sizes.append(deficit)
        else:
            # spread the leftover seats over communities with room
            while deficit > 0:
                progressed = False
                for i in range(len(sizes)):
                    if deficit == 0:
                        break
                    if sizes[i] < s2:
                        sizes[i] += 1
                        deficit -= 1
                        progressed = True
                if not progressed:
                    raise GenerationError(
                        f"cannot cover {slots} membership seats with sizes in [{s1}, {s2}]"
                    )
        total = slots
    return sizes


def _assign_memberships(
    sizes: list[int],
    internal: np.ndarray,
    doubles: np.ndarray,
    rng,
) -> tuple[np.ndarray, np.ndarray] | None:
    """Random community assignment honoring capacities.

    Prefers communities large enough to host a member's internal degree;
    falls back to any community with free seats (the wiring step then
    uses multi-edges). Doubly-assigned vertices go first so two distinct
    communities with capacity are still available. Returns (m1, m2) with
    -1 for absent second memberships, or None if the pass wedged.
    """
    n = len(internal)
    k = len(sizes)
    capacity = np.array(sizes, dtype=np.int64)
    size_arr = np.array(sizes, dtype=np.int64)
    m1 = np.full(n, -1, dtype=np.int64)
    m2 = np.full(n, -1, dtype=np.int64)

    is_double = np.zeros(n, dtype=bool)
    is_double[doubles] = True
    order = np.concatenate([
        rng.permutation(doubles),
        rng.permutation(np.nonzero(~is_double)[0]),
    ]).astype(np.int64)

    for v in order:
        need = int(internal[v])
        if is_double[v]:
            open_c = np.nonzero(capacity > 0)[0]
            if len(open_c) < 2:
                return None
            half = need - need // 2
            fit = open_c[size_arr[open_c] > half]
            pool = fit if len(fit) >= 2 else open_c
            pick = rng.choice(pool, size=2, replace=False)
            m1[v], m2[v] = int(pick[0]), int(pick[1])
            capacity[pick[0]] -= 1
            capacity[pick[1]] -= 1
        else:
            open_c = np.nonzero(capacity > 0)[0]
            if len(open_c) < 1:
                return None
            fit = open_c[size_arr[open_c] > need]
            pool = fit if len(fit) >= 1 else open_c
            c = int(rng.choice(pool))
            m1[v] = c
            capacity[c] -= 1
    return m1, m2


def _fix_self_pairs(a: np.ndarray, b: np.ndarray, rng, passes: int = 20) -> None:
    """Swap partners until no edge pairs a stub with its own vertex.

    Leaves irreducible self-pairs in place (legal in a multigraph);
    callers treating them as collisions must re-check.
    """
    for _ in range(passes):
        bad = np.nonzero(a == b)[0]
        if bad.size == 0:
            return
        partners = rng.integers(0, len(a), size=bad.size)
        for i, j in zip(bad, partners):
            b[i], b[j] = b[j], b[i]


def _wire_internal(owners: np.ndarray, rng) -> tuple[np.ndarray, np.ndarray]:
    assert owners.size % 2 == 0, "internal stub count must be even"
    stubs = rng.permutation(owners)
    a, b = stubs[0::2].copy(), stubs[1::2].copy()
    _fix_self_pairs(a, b, rng)
    return a, b


def _wire_external(
    owners: np.ndarray, m1: np.ndarray, m2: np.ndarray, rng
) -> tuple[np.ndarray, np.ndarray]:
    """Globally match external stubs, rejecting within-community pairings."""
    assert owners.size % 2 == 0, "external stub count must be even"
    stubs = rng.permutation(owners)
    a, b = stubs[0::2].copy(), stubs[1::2].copy()

    def collisions() -> np.ndarray:
        bad = a == b
        bad |= m1[a] == m1[b]
        bad |= (m2[b] >= 0) & (m1[a] == m2[b])
        bad |= (m2[a] >= 0) & (m2[a] == m1[b])
        bad |= (m2[a] >= 0) & (m2[a] == m2[b])
        return bad

    for _ in range(_REWIRE_PASSES):
        bad = np.nonzero(collisions())[0]
        if bad.size == 0:
            return a, b
        partners = rng.integers(0, len(a), size=bad.size)
        for i, j in zip(bad, partners):
            b[i], b[j] = b[j], b[i]
    remaining = int(collisions().sum())
    raise GenerationError(
        f"external wiring kept {remaining} within-community pairs after "
        f"{_REWIRE_PASSES} rewiring passes ({len(a)} edges total)"
    )


def gen_lfr(spec: BenchmarkSpec, rng_seed=None) -> tuple[MultiGraph, GroundTruth]:
    """Power-law benchmark graph with planted communities.

    Construction: sample degrees (exponent tau1, mean dbar) and community
    sizes (exponent tau2 on [s1, s2]); assign vertices to communities,
    with a rho fraction belonging to exactly two; split each vertex's
    degree into an internal share (1 - mu) and external share mu, the
    external share counted outside all of the vertex's communities; wire
    internal stubs within each community and external stubs globally,
    rejecting external pairs that land inside a community.
    """
    spec.validate()
    if spec.kind != "lfr":
        raise ParameterError(f"expected an lfr spec, got kind {spec.kind!r}")
    rng = _rng(rng_seed if rng_seed is not None else spec.rng_seed)
    n = spec.n
    if n == 0:
        return (
            MultiGraph.from_pair_arrays(0, np.zeros(0, np.int64), np.zeros(0, np.int64)),
            GroundTruth(communities=[], background=frozenset()),
        )

    # upper degree limit: internal degrees must stay hostable by the largest
    # community, else no community-sized wiring exists; the lower limit then
    # follows from the mean constraint
    fit_cap = int((spec.s2 - 1) / (1.0 - spec.mu))
    degrees = sample_powerlaw_degrees(n, spec.tau1, spec.dbar, rng, d_max=fit_cap)
    internal = np.rint((1.0 - spec.mu) * degrees).astype(np.int64)
    n_double = int(round(spec.rho * n))
    doubles = np.sort(rng.choice(n, size=n_double, replace=False)) if n_double else \
        np.zeros(0, dtype=np.int64)
    slots = n + n_double
    sizes = _sample_community_sizes(slots, spec.tau2, spec.s1, spec.s2, rng)

    assignment = None
    for _ in range(_ASSIGN_ATTEMPTS):
        assignment = _assign_memberships(sizes, internal, doubles, rng)
        if assignment is not None:
            break
    if assignment is None:
        raise GenerationError(
            f"could not assign {n} vertices to {len(sizes)} communities in "
            f"{_ASSIGN_ATTEMPTS} attempts"
        )
    m1, m2 = assignment

    k = len(sizes)
    comm_members: list[list[int]] = [[] for _ in range(k)]
    comm_share: list[list[int]] = [[] for _ in range(k)]
    for v in range(n):
        y = int(internal[v])
        if m2[v] >= 0:
            comm_members[m1[v]].append(v)
            comm_share[m1[v]].append(y - y // 2)
            comm_members[m2[v]].append(v)
            comm_share[m2[v]].append(y // 2)
        else:
            comm_members[m1[v]].append(v)
            comm_share[m1[v]].append(y)

    external = degrees - internal
    edge_us: list[np.ndarray] = []
    edge_vs: list[np.ndarray] = []
    for c in range(k):
        members = comm_members[c]
        share = comm_share[c]
        if sum(share) % 2 == 1:
            # move one stub to the external pool to make the count even
            j = max(range(len(share)), key=lambda i: (share[i], -members[i]))
            share[j] -= 1
            external[members[j]] += 1
        owners = np.repeat(np.array(members, dtype=np.int64), np.array(share, dtype=np.int64))
        if owners.size:
            a, b = _wire_internal(owners, rng)
            edge_us.append(a)
            edge_vs.append(b)

    ext_owners = np.repeat(np.arange(n, dtype=np.int64), external)
    if ext_owners.size:
        a, b = _wire_external(ext_owners, m1, m2, rng)
        edge_us.append(a)
        edge_vs.append(b)

    us = np.concatenate(edge_us) if edge_us else np.zeros(0, dtype=np.int64)
    vs = np.concatenate(edge_vs) if edge_vs else np.zeros(0, dtype=np.int64)
    g = MultiGraph.from_pair_arrays(n, us, vs)
    truth = GroundTruth(
        communities=[frozenset(members) for members in comm_members],
        background=frozenset(),
    )
    return g, truth


def gen_lfr_background(spec: BenchmarkSpec, rng_seed=None) -> tuple[MultiGraph, GroundTruth]:
    """Planted communities on a pi-fraction of vertices, background elsewhere.

    Community-block vertices are wired by the ``lfr`` construction with
    size and mean degree scaled by pi; every background vertex connects
    to every other vertex independently with probability dbar / n, so the
    whole network keeps mean degree dbar.
    """
    spec.validate()
    if spec.kind != "lfr_bg":
        raise ParameterError(f"expected an lfr_bg spec, got kind {spec.kind!r}")
    rng = _rng(rng_seed if rng_seed is not None else spec.rng_seed)
    n = spec.n
    p2 = spec.dbar / n if n else 0.0
    if p2 > 1.0:
        raise ParameterError("dbar must not exceed n")

    in_block = rng.random(n) < spec.pi
    c1 = np.nonzero(in_block)[0]
    c2 = np.nonzero(~in_block)[0]

    communities: list[VertexSet] = []
    edge_us: list[np.ndarray] = []
    edge_vs: list[np.ndarray] = []
    edge_ms: list[np.ndarray] = []
    if len(c1):
        if len(c1) < spec.s1:
            raise GenerationError(
                f"community block has {len(c1)} vertices, fewer than s1={spec.s1}"
            )
        sub = replace(
            spec,
            kind="lfr",
            n=int(len(c1)),
            dbar=spec.dbar * spec.pi,
            rho=0.0,
            pi=None,
            rng_seed=None,
        )
        g1, t1 = gen_lfr(sub, rng)
        if g1.edge_count:
            sub_u, sub_v, sub_m = map(np.array, zip(*g1.edge_classes()))
            edge_us.append(c1[sub_u])
            edge_vs.append(c1[sub_v])
            edge_ms.append(sub_m.astype(np.int64))
        communities = [frozenset(int(c1[v]) for v in comm) for comm in t1.communities]

    if len(c2):
        us, vs = _pairs_within(c2, p2, rng)
        if len(c1):
            cross = _pairs_between(c2, c1, p2, rng)
            us += cross[0]
            vs += cross[1]
        edge_us.append(np.array(us, dtype=np.int64))
        edge_vs.append(np.array(vs, dtype=np.int64))
        edge_ms.append(np.ones(len(us), dtype=np.int64))

    us = np.concatenate(edge_us) if edge_us else np.zeros(0, dtype=np.int64)
    vs = np.concatenate(edge_vs) if edge_vs else np.zeros(0, dtype=np.int64)
    ms = np.concatenate(edge_ms) if edge_ms else np.zeros(0, dtype=np.int64)
    g = MultiGraph.from_pair_arrays(n, us, vs, ms)
    truth = GroundTruth(
        communities=communities,
        background=frozenset(int(v) for v in c2),
    )
    return g, truth


def generate(spec: BenchmarkSpec) -> tuple[MultiGraph, GroundTruth]:
    """Dispatch a spec to its generator."""
    spec.validate()
    if spec.kind == "er":
        return gen_erdos_renyi(spec.n, spec.dbar, spec.rng_seed)
    if spec.kind == "config":
        rng = _rng(spec.rng_seed)
        degrees = sample_powerlaw_degrees(spec.n, spec.tau1, spec.dbar, rng)
        g = gen_configuration(degrees, rng)
        return g, GroundTruth(communities=[], background=frozenset(range(spec.n)))
    if spec.kind == "sbm_single":
        return gen_single_embedded(spec.n, spec.pi, spec.kappa, spec.theta, spec.rng_seed)
    if spec.kind == "lfr":
        return gen_lfr(spec)
    return gen_lfr_background(spec)
