"""Undirected multigraph with degree bookkeeping and edge-list I/O.

Vertices are dense integer ids ``0..n-1``. Edges form a multiset of
unordered pairs; self-loops are allowed and contribute 2 to their
endpoint's degree. Adjacency is stored CSR-style (one row per vertex)
so boundary counts against a vertex set vectorize over the whole graph.
Instances are immutable after construction and safe to share between
workers.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import EdgeListParseError

VertexSet = frozenset[int]


def as_vertex_set(members: Iterable[int], n: int) -> VertexSet:
    """Normalize `members` to a frozenset, validating ids against ``[0, n)``."""
    out = frozenset(int(v) for v in members)
    for v in out:
        if v < 0 or v >= n:
            raise ValueError(f"vertex id {v} out of range for graph with n={n}")
    return out


class MultiGraph:
    """Immutable undirected multigraph over vertices ``0..n-1``.

    `degrees[u]` counts edge endpoints at `u` (a self-loop counts 2);
    `edge_count` counts edges with multiplicity (a self-loop counts 1).
    """

    __slots__ = (
        "n",
        "edge_count",
        "degrees",
        "labels",
        "_indptr",
        "_indices",
        "_data",
        "_row_of",
        "_pair_u",
        "_pair_v",
        "_pair_mult",
    )

    def __init__(
        self,
        n: int,
        pair_u: np.ndarray,
        pair_v: np.ndarray,
        pair_mult: np.ndarray,
        labels: Sequence[str] | None = None,
    ):
        # pair arrays must already be canonical: u <= v, (u, v) strictly
        # increasing, multiplicities >= 1. Use the classmethods to build.
        self.n = int(n)
        self._pair_u = pair_u
        self._pair_v = pair_v
        self._pair_mult = pair_mult
        self.edge_count = int(pair_mult.sum()) if pair_mult.size else 0
        if labels is not None:
            if len(labels) != self.n:
                raise ValueError("labels must have one entry per vertex")
            self.labels = [str(x) for x in labels]
        else:
            self.labels = [str(i) for i in range(self.n)]

        loops = pair_u == pair_v
        # adjacency entry values: a self-loop row stores 2x multiplicity so
        # that row sums equal degrees and membership sums equal boundary counts
        rows = np.concatenate([pair_u, pair_v[~loops]])
        cols = np.concatenate([pair_v, pair_u[~loops]])
        vals = np.concatenate([np.where(loops, 2 * pair_mult, pair_mult), pair_mult[~loops]])
        order = np.lexsort((cols, rows))
        self._indices = cols[order].astype(np.int64, copy=False)
        self._data = vals[order].astype(np.int64, copy=False)
        counts = np.bincount(rows, minlength=self.n).astype(np.int64)
        self._indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.degrees = np.bincount(rows, weights=vals, minlength=self.n).astype(np.int64)
        self._row_of = np.repeat(np.arange(self.n, dtype=np.int64), counts)

    @classmethod
    def from_pair_arrays(
        cls,
        n: int,
        u: np.ndarray,
        v: np.ndarray,
        mult: np.ndarray | None = None,
        labels: Sequence[str] | None = None,
    ) -> "MultiGraph":
        """Build from parallel endpoint arrays, accumulating multiplicity."""
        n = int(n)
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape:
            raise ValueError("endpoint arrays must have equal length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise ValueError("vertex id out of range")
        if mult is None:
            mult = np.ones(u.size, dtype=np.int64)
        else:
            mult = np.asarray(mult, dtype=np.int64)
            if np.any(mult < 1):
                raise ValueError("multiplicity must be >= 1")
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        if u.size == 0:
            empty = np.empty(0, dtype=np.int64)
            return cls(n, empty, empty.copy(), empty.copy(), labels)
        key = lo * n + hi
        uniq, inverse = np.unique(key, return_inverse=True)
        pair_mult = np.bincount(inverse, weights=mult).astype(np.int64)
        return cls(n, uniq // n, uniq % n, pair_mult, labels)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple],
        labels: Sequence[str] | None = None,
    ) -> "MultiGraph":
        """Build from an iterable of ``(u, v)`` or ``(u, v, multiplicity)``."""
        us, vs, ms = [], [], []
        for e in edges:
            if len(e) == 2:
                a, b = e
                m = 1
            else:
                a, b, m = e
            us.append(a)
            vs.append(b)
            ms.append(m)
        return cls.from_pair_arrays(
            n,
            np.asarray(us, dtype=np.int64),
            np.asarray(vs, dtype=np.int64),
            np.asarray(ms, dtype=np.int64),
            labels,
        )

    def degree(self, u: int) -> int:
        if u < 0 or u >= self.n:
            raise ValueError(f"vertex id {u} out of range")
        return int(self.degrees[u])

    def neighbors(self, u: int) -> np.ndarray:
        """Distinct neighbors of `u` (includes `u` itself if it has a loop)."""
        if u < 0 or u >= self.n:
            raise ValueError(f"vertex id {u} out of range")
        return self._indices[self._indptr[u]:self._indptr[u + 1]]

    def member_mask(self, members: Iterable[int]) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        for v in members:
            v = int(v)
            if v < 0 or v >= self.n:
                raise ValueError(f"vertex id {v} out of range")
            mask[v] = True
        return mask

    def boundary_count(self, u: int, members: Iterable[int]) -> int:
        """Edges between `u` and the set, with multiplicity.

        A self-loop at `u` contributes 2 when `u` is itself a member.
        """
        if u < 0 or u >= self.n:
            raise ValueError(f"vertex id {u} out of range")
        mask = self.member_mask(members)
        lo, hi = self._indptr[u], self._indptr[u + 1]
        return int(self._data[lo:hi][mask[self._indices[lo:hi]]].sum())

    def boundary_counts(self, members: Iterable[int]) -> np.ndarray:
        """Boundary count against the set for every vertex at once."""
        mask = members if isinstance(members, np.ndarray) and members.dtype == bool \
            else self.member_mask(members)
        sel = mask[self._indices]
        return np.bincount(
            self._row_of[sel], weights=self._data[sel], minlength=self.n
        ).astype(np.int64)

    def volume(self, members: Iterable[int]) -> int:
        """Sum of member degrees."""
        mask = self.member_mask(members)
        return int(self.degrees[mask].sum())

    def edge_classes(self) -> Iterator[tuple[int, int, int]]:
        """Distinct edges as ``(u, v, multiplicity)``, sorted by ``(u, v)``."""
        for u, v, m in zip(self._pair_u, self._pair_v, self._pair_mult):
            yield int(u), int(v), int(m)

    def simplified(self) -> "MultiGraph":
        """Copy with multi-edges collapsed to single edges and loops dropped."""
        keep = self._pair_u != self._pair_v
        return MultiGraph(
            self.n,
            self._pair_u[keep],
            self._pair_v[keep],
            np.ones(int(keep.sum()), dtype=np.int64),
            self.labels,
        )

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, edges={self.edge_count})"


def parse_edge_list(text: str | Iterable[str]) -> MultiGraph:
    """Parse an edge list with one edge per line.

    Each non-comment line holds two whitespace-separated vertex labels and
    an optional integer multiplicity (default 1). Labels are arbitrary
    strings mapped to dense ids in first-seen order; repeated lines
    accumulate multiplicity. Lines starting with '#' and blank lines are
    skipped.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    id_of: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    ms: list[int] = []

    def intern(label: str) -> int:
        if label not in id_of:
            id_of[label] = len(id_of)
        return id_of[label]

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise EdgeListParseError(lineno, f"expected 2 or 3 tokens, got {len(tokens)}")
        mult = 1
        if len(tokens) == 3:
            try:
                mult = int(tokens[2])
            except ValueError:
                raise EdgeListParseError(lineno, f"multiplicity {tokens[2]!r} is not an integer") from None
            if mult < 1:
                raise EdgeListParseError(lineno, f"multiplicity must be >= 1, got {mult}")
        us.append(intern(tokens[0]))
        vs.append(intern(tokens[1]))
        ms.append(mult)

    labels = list(id_of)
    return MultiGraph.from_pair_arrays(
        len(labels),
        np.asarray(us, dtype=np.int64),
        np.asarray(vs, dtype=np.int64),
        np.asarray(ms, dtype=np.int64),
        labels,
    )


def write_edge_list(g: MultiGraph) -> str:
    """Serialize as ``label_u label_v multiplicity`` lines sorted by id pair.

    Isolated vertices carry no edges and are not representable in this
    format.
    """
    lines = [f"{g.labels[u]} {g.labels[v]} {m}" for u, v, m in g.edge_classes()]
    return "".join(line + "\n" for line in lines)
