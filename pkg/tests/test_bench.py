"""Benchmark generators: parameters, structure, and reproducibility."""

import math

import numpy as np
import pytest

from essc.bench import (
    BenchmarkSpec,
    gen_configuration,
    gen_erdos_renyi,
    gen_lfr,
    gen_lfr_background,
    gen_single_embedded,
    generate,
    pair_stubs,
    sample_powerlaw_degrees,
    single_embedded_theta,
)
from essc.errors import ParameterError
from essc.graph import write_edge_list


def test_spec_validation():
    BenchmarkSpec(kind="er", n=10, dbar=3.0).validate()
    with pytest.raises(ParameterError):
        BenchmarkSpec(kind="nope", n=10).validate()
    with pytest.raises(ParameterError):
        BenchmarkSpec(kind="er", n=10).validate()  # dbar missing
    with pytest.raises(ParameterError):
        BenchmarkSpec(kind="er", n=10, dbar=3.0, mu=0.5).validate()  # irrelevant
    with pytest.raises(ParameterError):
        BenchmarkSpec(
            kind="lfr", n=10, dbar=3.0, tau1=2, tau2=1, mu=1.5, s1=2, s2=5, rho=0.0
        ).validate()


def test_pair_unranking_is_a_bijection():
    from essc.bench import _unrank_pair

    for n in (2, 3, 5, 11, 40):
        seen = set()
        for t in range(n * (n - 1) // 2):
            i, j = _unrank_pair(t, n)
            assert 0 <= i < j < n
            seen.add((i, j))
        assert len(seen) == n * (n - 1) // 2


def test_erdos_renyi_edges_and_truth():
    g, truth = gen_erdos_renyi(0, 0, 1)
    assert g.n == 0 and g.edge_count == 0

    g, truth = gen_erdos_renyi(1000, 0, 1)
    assert g.edge_count == 0

    g, truth = gen_erdos_renyi(1000, 10, 1)
    assert 9 <= g.degrees.mean() <= 11
    assert truth.communities == [] and len(truth.background) == 1000

    with pytest.raises(ParameterError):
        gen_erdos_renyi(100, 120, 1)


def test_erdos_renyi_edge_count_concentrates():
    n, dbar = 600, 8
    p = dbar / (n - 1)
    pairs = n * (n - 1) // 2
    mean = pairs * p
    sigma = math.sqrt(pairs * p * (1 - p))
    for seed in range(5):
        g, _ = gen_erdos_renyi(n, dbar, 70_000 + seed)
        assert abs(g.edge_count - mean) < 4 * sigma


def test_configuration_forced_cases():
    g = gen_configuration([1, 1], 3)
    assert g.edge_count == 1 and g.degrees.tolist() == [1, 1]

    g = gen_configuration([2], 3)
    assert g.edge_count == 1
    assert g.degree(0) == 2
    assert g.boundary_count(0, {0}) == 2


def test_configuration_preserves_degrees():
    rng = np.random.default_rng(13)
    assert gen_configuration([3, 3, 2, 2], 5).degrees.tolist() == [3, 3, 2, 2]
    for _ in range(20):
        degrees = rng.integers(0, 9, size=int(rng.integers(2, 40)))
        if degrees.sum() % 2 == 1:
            degrees[0] += 1
        g = gen_configuration(degrees, rng)
        assert g.degrees.tolist() == degrees.tolist()
    with pytest.raises(ParameterError):
        gen_configuration([1, 1, 1], 2)


def test_pair_stubs_matches_graph_counts():
    degrees = sample_powerlaw_degrees(50, 2.0, 6, 1)
    rng1 = np.random.default_rng(77)
    rng2 = np.random.default_rng(77)
    a, b = pair_stubs(degrees, rng1)
    g = gen_configuration(degrees, rng2)
    members = set(range(10, 30))
    in_b = np.zeros(len(degrees), dtype=bool)
    in_b[list(members)] = True
    for u in (0, 5, 12):
        fast = int(((a == u) & in_b[b]).sum() + ((b == u) & in_b[a]).sum())
        assert fast == g.boundary_count(u, members)


def test_powerlaw_degrees_basics():
    assert sample_powerlaw_degrees(0, 2.0, 10, 1).size == 0
    d = sample_powerlaw_degrees(2000, 2.0, 30, 7)
    assert 27 <= d.mean() <= 33
    assert d.sum() % 2 == 0
    assert d.min() >= 1 and d.max() <= min(1999, 300)
    with pytest.raises(ParameterError):
        sample_powerlaw_degrees(100, 2.0, 100, 1)
    with pytest.raises(ParameterError):
        sample_powerlaw_degrees(100, 0.9, 5, 1)


def test_single_embedded_parameters():
    with pytest.raises(ParameterError):
        gen_single_embedded(100, 0.1, 10, 0.15, 1)  # theta*kappa = 1.5
    with pytest.raises(ParameterError):
        gen_single_embedded(100, 0.0, 10, 0.01, 1)
    with pytest.raises(ParameterError):
        gen_single_embedded(100, 0.1, 0.9, 0.01, 1)


def test_single_embedded_unit_contrast_is_uniform():
    # kappa = 1 removes the block contrast entirely
    g, truth = gen_single_embedded(2000, 0.5, 1.0, 0.01, 17)
    inside = set(truth.communities[0])
    within1 = within2 = cross = 0
    for u, v, m in g.edge_classes():
        if u in inside and v in inside:
            within1 += m
        elif u not in inside and v not in inside:
            within2 += m
        else:
            cross += m
    n1, n2 = len(inside), g.n - len(inside)
    d1 = within1 / (n1 * (n1 - 1) / 2)
    d2 = within2 / (n2 * (n2 - 1) / 2)
    dc = cross / (n1 * n2)
    for a, b in ((d1, d2), (d1, dc), (d2, dc)):
        assert abs(a - b) / b < 0.10


def test_single_embedded_density_contrast():
    theta = single_embedded_theta(2000, 0.1, 10, 30)
    g, truth = gen_single_embedded(2000, 0.1, 10, theta, 3)
    c1 = sorted(truth.communities[0])
    inside = set(c1)
    within = sum(m for u, v, m in g.edge_classes() if u in inside and v in inside)
    cross = sum(m for u, v, m in g.edge_classes() if (u in inside) != (v in inside))
    n1 = len(c1)
    n2 = g.n - n1
    density_in = within / (n1 * (n1 - 1) / 2)
    density_cross = cross / (n1 * n2)
    assert abs(density_in / density_cross - 10) / 10 < 0.15
    assert 27 <= g.degrees.mean() <= 33


def test_single_embedded_empty_block_degenerates_to_noise():
    # pi small enough that no vertex lands in the community block
    for seed in range(50):
        g, truth = gen_single_embedded(300, 1e-5, 10, 0.02, seed)
        if not truth.communities[0]:
            assert truth.background == frozenset(range(300))
            return
    pytest.fail("no realization with an empty block found")


_LFR = BenchmarkSpec(
    kind="lfr", n=2000, dbar=30, tau1=2.0, tau2=1.0, mu=0.1, s1=20, s2=100,
    rho=0.0, rng_seed=11,
)


def _membership_index(truth, n):
    member_of = [set() for _ in range(n)]
    for ci, c in enumerate(truth.communities):
        for v in c:
            member_of[v].add(ci)
    return member_of


def _internal_fraction(g, truth):
    member_of = _membership_index(truth, g.n)
    internal = np.zeros(g.n)
    for u, v, m in g.edge_classes():
        if u == v:
            internal[u] += 2 * m
        elif member_of[u] & member_of[v]:
            internal[u] += m
            internal[v] += m
    degs = np.maximum(g.degrees, 1)
    return internal / degs


def test_lfr_partitions_without_overlap():
    g, truth = gen_lfr(_LFR)
    counts = np.zeros(g.n, dtype=int)
    for c in truth.communities:
        counts[list(c)] += 1
    assert np.all(counts == 1)
    assert truth.background == frozenset()


def test_lfr_realizes_mixing_parameter():
    g, truth = gen_lfr(_LFR)
    frac = _internal_fraction(g, truth)
    assert 0.85 <= frac.mean() <= 0.95


def test_lfr_sizes_within_range():
    for seed in (11, 12, 13):
        g, truth = gen_lfr(_LFR, seed)
        for c in truth.communities:
            assert _LFR.s1 * 0.9 <= len(c) <= _LFR.s2 * 1.1


def test_lfr_overlap_fraction():
    spec = BenchmarkSpec(
        kind="lfr", n=1000, dbar=20, tau1=2.0, tau2=1.0, mu=0.2, s1=15, s2=60,
        rho=0.2, rng_seed=4,
    )
    g, truth = gen_lfr(spec)
    counts = np.zeros(g.n, dtype=int)
    for c in truth.communities:
        counts[list(c)] += 1
    assert int((counts == 2).sum()) == 200
    assert np.all(counts >= 1)
    frac = _internal_fraction(g, truth)
    assert 0.72 <= frac.mean() <= 0.88  # target 1 - mu = 0.8


def test_lfr_mean_degree_tracks_dbar():
    g, _ = gen_lfr(_LFR)
    assert 27 <= g.degrees.mean() <= 33


_LFR_BG = BenchmarkSpec(
    kind="lfr_bg", n=2000, dbar=30, tau1=2.0, tau2=1.0, mu=0.2, s1=20, s2=100,
    pi=0.5, rng_seed=5,
)


def test_lfr_background_degree_audit():
    g, truth = gen_lfr_background(_LFR_BG)
    assert 27 <= g.degrees.mean() <= 33
    covered = set().union(*truth.communities) if truth.communities else set()
    assert covered.isdisjoint(truth.background)
    assert covered | truth.background == set(range(g.n))


def test_lfr_background_nearly_all_block_reduces_to_lfr():
    spec = BenchmarkSpec(
        kind="lfr_bg", n=800, dbar=20, tau1=2.0, tau2=1.0, mu=0.2, s1=15, s2=60,
        pi=0.999, rng_seed=8,
    )
    g, truth = gen_lfr_background(spec)
    assert len(truth.background) <= 5
    counts = np.zeros(g.n, dtype=int)
    for c in truth.communities:
        counts[list(c)] += 1
    assert np.all(counts[sorted(set(range(g.n)) - truth.background)] == 1)


def test_generators_are_reproducible():
    specs = [
        BenchmarkSpec(kind="er", n=200, dbar=6, rng_seed=21),
        BenchmarkSpec(kind="config", n=200, dbar=8, tau1=2.0, rng_seed=21),
        BenchmarkSpec(kind="sbm_single", n=200, pi=0.2, kappa=5, theta=0.02, rng_seed=21),
        BenchmarkSpec(kind="lfr", n=400, dbar=12, tau1=2.0, tau2=1.0, mu=0.2,
                      s1=10, s2=40, rho=0.1, rng_seed=21),
        BenchmarkSpec(kind="lfr_bg", n=400, dbar=12, tau1=2.0, tau2=1.0, mu=0.2,
                      s1=10, s2=40, pi=0.6, rng_seed=21),
    ]
    for spec in specs:
        g1, t1 = generate(spec)
        g2, t2 = generate(spec)
        assert write_edge_list(g1) == write_edge_list(g2)
        assert t1.communities == t2.communities
        assert t1.background == t2.background


def test_generate_dispatch_covers_all_kinds():
    for spec in (
        BenchmarkSpec(kind="er", n=50, dbar=4, rng_seed=1),
        BenchmarkSpec(kind="config", n=50, dbar=5, tau1=2.0, rng_seed=1),
        BenchmarkSpec(kind="sbm_single", n=50, pi=0.3, kappa=4, theta=0.05, rng_seed=1),
    ):
        g, truth = generate(spec)
        assert g.n == 50
        assert set().union(truth.background, *([set()] + truth.communities)) == set(range(50))
