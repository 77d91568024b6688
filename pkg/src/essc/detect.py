"""Community extraction by iterated FDR selection.

A community is a fixed point of the update map that keeps exactly the
vertices significantly connected to the current candidate set. The
search iterates that map from a seed neighborhood; the outer loop
re-seeds at the highest-degree uncovered vertex until a search comes
back empty, then everything not in a detected community is background.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateGraphError
from .graph import MultiGraph, VertexSet, as_vertex_set
from .significance import bh_select

TERM_FIXED_POINT = "fixed_point"
TERM_EMPTY = "empty"
TERM_CYCLE = "cycle"
TERM_ITERATION_CAP = "iteration_cap"

SEED_MAX_DEGREE = "max_degree"
SEED_ALL_NEIGHBORHOODS = "all_neighborhoods"

DEFAULT_ALPHA = 0.05
DEFAULT_MAX_ITER = 100


@dataclass(frozen=True)
class SearchOutcome:
    """Result of one fixed-point search from a seed set."""

    community: VertexSet
    iterations: int
    termination: str
    trace: list[int]


@dataclass(frozen=True)
class SeedRecord:
    """One outer-loop extraction attempt, for the run log."""

    anchor: int
    seed_size: int
    termination: str
    iterations: int
    community_size: int
    accepted: bool
    forced_progress: bool = False


@dataclass(frozen=True)
class DetectionResult:
    """Detected communities, the leftover background, and the run log."""

    communities: list[VertexSet]
    background: VertexSet
    alpha: float
    seed_log: list[SeedRecord] = field(default_factory=list)


@dataclass(frozen=True)
class SummaryStats:
    """Headline statistics of a detection result.

    Fields are None where undefined (no communities, or no background).
    """

    community_count: int
    mean_size: float | None
    size_stddev: float | None
    mean_membership: float | None
    mean_degree_community: float | None
    mean_degree_background: float | None
    background_proportion: float


def community_search(
    g: MultiGraph,
    seed: Iterable[int],
    alpha: float = DEFAULT_ALPHA,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SearchOutcome:
    """Iterate the selection map from `seed` until it stops moving.

    Termination is one of:

    - ``fixed_point``: the update returned its own input,
    - ``empty``: the update emptied out (the empty set is always fixed),
    - ``cycle``: a previously visited set recurred and the deterministic
      escapes (reseeding from the cycle's intersection, then union) were
      exhausted; the smallest set of the first cycle (by size, then
      lexicographic members) is returned,
    - ``iteration_cap``: `max_iter` updates ran without settling; the
      last set is returned.
    """
    seed = as_vertex_set(seed, g.n)
    if not seed:
        raise ValueError("seed set must be non-empty")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    visited: dict[VertexSet, int] = {seed: 0}
    history: list[VertexSet] = [seed]
    trace: list[int] = [len(seed)]
    current = seed
    first_cycle: list[VertexSet] | None = None
    for step in range(1, max_iter + 1):
        new = bh_select(g, current, alpha)
        trace.append(len(new))
        if new == current:
            return SearchOutcome(new, step, TERM_FIXED_POINT, trace)
        if not new:
            return SearchOutcome(new, step, TERM_EMPTY, trace)
        if new in visited:
            # threshold flutter often traps the orbit in a short cycle
            # around a genuine fixed point; restart deterministically from
            # the cycle's intersection (then union) before conceding
            cycle_sets = history[visited[new]:]
            if first_cycle is None:
                first_cycle = cycle_sets
            escape = None
            for candidate in (
                frozenset.intersection(*cycle_sets),
                frozenset.union(*cycle_sets),
            ):
                if candidate and candidate not in visited:
                    escape = candidate
                    break
            if escape is None:
                pick = min(first_cycle, key=lambda s: (len(s), tuple(sorted(s))))
                return SearchOutcome(pick, step, TERM_CYCLE, trace)
            new = escape
            trace[-1] = len(new)
        visited[new] = len(history)
        history.append(new)
        current = new
    return SearchOutcome(current, max_iter, TERM_ITERATION_CAP, trace)


def _max_degree_anchor(g: MultiGraph, uncovered_mask: np.ndarray) -> int:
    # ties break toward the smallest id (argmax returns first occurrence)
    masked = np.where(uncovered_mask, g.degrees, -1)
    return int(np.argmax(masked))


def _closed_neighborhood(g: MultiGraph, u: int) -> VertexSet:
    return frozenset(int(v) for v in g.neighbors(u)) | {u}


def next_seed(g: MultiGraph, uncovered: Iterable[int]) -> VertexSet:
    """Seed set for the next extraction: the closed neighborhood of the
    smallest-id maximal-degree uncovered vertex.

    Neighbors are taken from the whole graph, whether or not they already
    lie in a detected community.
    """
    members = as_vertex_set(uncovered, g.n)
    if not members:
        raise ValueError("uncovered set is empty; no seed exists")
    mask = np.zeros(g.n, dtype=bool)
    mask[list(members)] = True
    return _closed_neighborhood(g, _max_degree_anchor(g, mask))


def essc(
    g: MultiGraph,
    alpha: float = DEFAULT_ALPHA,
    seed_strategy: str = SEED_MAX_DEGREE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> DetectionResult:
    """Extract all statistically stable communities of the graph.

    With the ``max_degree`` strategy, searches are seeded from the
    highest-degree vertex not yet inside a detected community and the
    loop stops at the first search that returns no community (or when
    every vertex is covered). With ``all_neighborhoods``, one search runs
    from every vertex's closed neighborhood and the distinct non-empty
    fixed points are kept. Duplicate communities are dropped; overlap
    between distinct communities is preserved as-is.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if g.edge_count == 0:
        raise DegenerateGraphError("graph has no edges; reference model is undefined")
    if seed_strategy not in (SEED_MAX_DEGREE, SEED_ALL_NEIGHBORHOODS):
        raise ValueError(f"unknown seed strategy {seed_strategy!r}")

    communities: list[VertexSet] = []
    seen: set[VertexSet] = set()
    seed_log: list[SeedRecord] = []

    if seed_strategy == SEED_MAX_DEGREE:
        uncovered = np.ones(g.n, dtype=bool)
        while uncovered.any():
            anchor = _max_degree_anchor(g, uncovered)
            seed = _closed_neighborhood(g, anchor)
            outcome = community_search(g, seed, alpha, max_iter)
            accepted = outcome.termination == TERM_FIXED_POINT and bool(outcome.community)
            forced = False
            if accepted:
                if outcome.community not in seen:
                    seen.add(outcome.community)
                    communities.append(outcome.community)
                removed = [v for v in outcome.community if uncovered[v]]
                uncovered[list(outcome.community)] = False
                if not removed:
                    # a fixed point disjoint from the uncovered set would
                    # reselect the same anchor forever; retire the anchor
                    # so the loop always makes progress
                    uncovered[anchor] = False
                    forced = True
            elif outcome.termination != TERM_EMPTY:
                # a cycling or capped search yields no community, but only an
                # empty search says the rest of the graph holds nothing more;
                # retire the anchor and keep extracting
                uncovered[anchor] = False
                forced = True
            seed_log.append(
                SeedRecord(
                    anchor=anchor,
                    seed_size=len(seed),
                    termination=outcome.termination,
                    iterations=outcome.iterations,
                    community_size=len(outcome.community),
                    accepted=accepted,
                    forced_progress=forced,
                )
            )
            if outcome.termination == TERM_EMPTY:
                break
    else:
        for u in range(g.n):
            seed = _closed_neighborhood(g, u)
            outcome = community_search(g, seed, alpha, max_iter)
            accepted = outcome.termination == TERM_FIXED_POINT and bool(outcome.community)
            if accepted and outcome.community not in seen:
                seen.add(outcome.community)
                communities.append(outcome.community)
            seed_log.append(
                SeedRecord(
                    anchor=u,
                    seed_size=len(seed),
                    termination=outcome.termination,
                    iterations=outcome.iterations,
                    community_size=len(outcome.community),
                    accepted=accepted,
                )
            )

    background = background_of(g.n, communities)
    return DetectionResult(
        communities=communities,
        background=background,
        alpha=alpha,
        seed_log=seed_log,
    )


def background_of(n: int, communities: Sequence[Iterable[int]]) -> VertexSet:
    """Vertices of ``[0, n)`` that belong to no community."""
    covered: set[int] = set()
    for c in communities:
        covered.update(as_vertex_set(c, n))
    return frozenset(range(n)) - covered


def summarize(g: MultiGraph, result: DetectionResult) -> SummaryStats:
    """Compute headline statistics for a detection result."""
    sizes = np.array([len(c) for c in result.communities], dtype=np.float64)
    k = len(result.communities)
    membership = np.zeros(g.n, dtype=np.int64)
    for c in result.communities:
        membership[list(c)] += 1
    covered = membership > 0
    n_background = len(result.background)

    if k == 0:
        mean_size = None
        size_stddev = None
    else:
        mean_size = float(sizes.mean())
        size_stddev = float(sizes.std(ddof=1)) if k >= 2 else 0.0
    mean_membership = float(membership[covered].mean()) if covered.any() else None
    mean_degree_community = float(g.degrees[covered].mean()) if covered.any() else None
    if n_background:
        bg = np.fromiter(result.background, dtype=np.int64, count=n_background)
        mean_degree_background = float(g.degrees[bg].mean())
    else:
        mean_degree_background = None
    background_proportion = n_background / g.n if g.n else 0.0

    return SummaryStats(
        community_count=k,
        mean_size=mean_size,
        size_stddev=size_stddev,
        mean_membership=mean_membership,
        mean_degree_community=mean_degree_community,
        mean_degree_background=mean_degree_background,
        background_proportion=background_proportion,
    )


def write_communities(
    communities: Sequence[Iterable[int]],
    background: Iterable[int],
    labels: Sequence[str] | None = None,
) -> str:
    """Serialize a detection result or ground truth to the community format.

    One community per line (members space-separated, ascending), in the
    given order, then a final ``background:`` line. Vertex labels default
    to the numeric ids.
    """
    def name(v: int) -> str:
        return labels[v] if labels is not None else str(v)

    lines = [" ".join(name(v) for v in sorted(c)) for c in communities]
    lines.append("background: " + " ".join(name(v) for v in sorted(background)))
    return "".join(line.rstrip() + "\n" for line in lines)


def read_communities(text: str) -> tuple[list[list[str]], list[str]]:
    """Parse the community file format back into label lists.

    Returns (communities, background) as lists of label tokens; the final
    line must start with ``background:``.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[-1].startswith("background:"):
        raise ValueError("community file must end with a 'background:' line")
    communities = [ln.split() for ln in lines[:-1]]
    background = lines[-1][len("background:"):].split()
    return communities, background
