"""Developer x file edit records and their projection onto a co-edit graph.

Two developers are joined when both touched the same file inside the same
interval; the edge weight is the number of distinct files they share.
"""

from __future__ import annotations

import bisect
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from datetime import datetime
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .affiliation import AffiliationTable, Developer, canonicalize_email, resolve_affiliation
from .changelog import Contribution
from .timeline import Slice

DEFAULT_EXCLUDES = ("**/ChangeLog*",)

Interval = tuple[datetime, datetime]


def _glob_to_regex(pattern: str) -> str:
    out, i = [], 0
    while i < len(pattern):
        if pattern.startswith("**/", i):
            out.append("(?:.*/)?")
            i += 3
        elif pattern.startswith("**", i):
            out.append(".*")
            i += 2
        elif pattern[i] == "*":
            out.append("[^/]*")
            i += 1
        elif pattern[i] == "?":
            out.append("[^/]")
            i += 1
        else:
            out.append(re.escape(pattern[i]))
            i += 1
    return "".join(out)


def compile_excludes(patterns: Iterable[str]):
    """Return a predicate ``path -> bool`` for ``**``-aware glob patterns.

    ``*`` stays within one path component; ``**/`` spans zero or more
    directories.
    """
    patterns = list(patterns)
    if not patterns:
        return lambda path: False
    rx = re.compile("|".join(f"(?:{_glob_to_regex(p)})" for p in patterns))
    return lambda path: rx.fullmatch(path) is not None


def _bounds(interval: Slice | Interval) -> Interval:
    if isinstance(interval, Slice):
        return interval.start, interval.end
    return interval


@dataclass(frozen=True)
class BipartiteEdits:
    developers: tuple[Developer, ...]
    files: tuple[str, ...]
    edits: frozenset[tuple[int, int]]
    interval: Interval

    def __post_init__(self):
        nd, nf = len(self.developers), len(self.files)
        for d, f in self.edits:
            if not (0 <= d < nd and 0 <= f < nf):
                raise ValueError(f"edit ({d}, {f}) references an unknown id")


@dataclass(frozen=True)
class CollabGraph:
    """Undirected co-edit graph; edges are ``(u, v, weight)`` with ``u < v``,
    sorted lexicographically. Node ids are dense and equal to list positions."""

    nodes: tuple[Developer, ...]
    edges: tuple[tuple[int, int, int], ...]
    interval: Interval

    def __post_init__(self):
        n = len(self.nodes)
        for i, dev in enumerate(self.nodes):
            if dev.id != i:
                raise ValueError(f"node at position {i} has id {dev.id}")
        prev = None
        for u, v, w in self.edges:
            if not (0 <= u < v < n) or w < 1:
                raise ValueError(f"bad edge ({u}, {v}, {w})")
            if prev is not None and (u, v) <= prev:
                raise ValueError("edges must be unique and sorted by (u, v)")
            prev = (u, v)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], interval: Interval | None = None,
                   affiliations: Sequence[str] | None = None) -> "CollabGraph":
        """Build a graph over synthetic developers ``dev<i>@example.org``.

        ``edges`` holds ``(u, v)`` or ``(u, v, weight)`` items in any order.
        """
        merged: dict[tuple[int, int], int] = {}
        for e in edges:
            u, v = sorted(e[:2])
            merged[(u, v)] = e[2] if len(e) > 2 else 1
        nodes = tuple(
            Developer(i, f"dev{i}@example.org", affiliations[i] if affiliations else "other")
            for i in range(n)
        )
        if interval is None:
            interval = (datetime.fromisoformat("1970-01-01T00:00:00+00:00"),
                        datetime.fromisoformat("2100-01-01T00:00:00+00:00"))
        return cls(nodes, tuple((u, v, w) for (u, v), w in sorted(merged.items())), interval)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` of the unweighted adjacency, neighbours sorted."""
        n = self.n
        if not self.edges:
            return np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
        e = np.asarray(self.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return indptr, np.ascontiguousarray(cols)

    def adjacency(self) -> sp.csr_matrix:
        indptr, indices = self.csr
        data = np.ones(len(indices), dtype=np.int64)
        return sp.csr_matrix((data, indices, indptr), shape=(self.n, self.n))

    def edge_set(self) -> frozenset[tuple[str, str, int]]:
        """Edges keyed by email, independent of node numbering."""
        out = set()
        for u, v, w in self.edges:
            a, b = sorted((self.nodes[u].email, self.nodes[v].email))
            out.add((a, b, w))
        return frozenset(out)


def build_bipartite(contribs: Iterable[Contribution], interval: Slice | Interval,
                    table: AffiliationTable,
                    exclude: Iterable[str] = DEFAULT_EXCLUDES) -> BipartiteEdits:
    """Collect deduplicated (developer, file) edits with timestamps in
    ``[start, end)``. Developer and file ids follow sorted email / path order,
    so the result does not depend on input order."""
    start, end = _bounds(interval)
    excluded = compile_excludes(exclude)
    skip: dict[str, bool] = {}
    canon: dict[str, str] = {}
    pairs: set[tuple[str, str]] = set()
    for c in contribs:
        if not start <= c.timestamp < end:
            continue
        path = c.file_path
        if path not in skip:
            skip[path] = excluded(path)
        if skip[path]:
            continue
        if c.email not in canon:
            canon[c.email] = canonicalize_email(c.email)
        pairs.add((canon[c.email], path))

    emails = sorted({e for e, _ in pairs})
    files = sorted({f for _, f in pairs})
    dev_id = {e: i for i, e in enumerate(emails)}
    file_id = {f: i for i, f in enumerate(files)}
    developers = tuple(Developer(i, e, resolve_affiliation(e, table)) for i, e in enumerate(emails))
    edits = frozenset((dev_id[e], file_id[f]) for e, f in pairs)
    return BipartiteEdits(developers, tuple(files), edits, (start, end))


def project_collaboration(b: BipartiteEdits) -> CollabGraph:
    nd, nf = len(b.developers), len(b.files)
    if not b.edits or nd < 2:
        return CollabGraph(b.developers, (), b.interval)
    e = np.array(sorted(b.edits), dtype=np.int64)
    inc = sp.csr_matrix((np.ones(len(e), dtype=np.int64), (e[:, 0], e[:, 1])), shape=(nd, nf))
    shared = sp.triu(inc @ inc.T, k=1).tocoo()
    order = np.lexsort((shared.col, shared.row))
    edges = tuple(
        (int(u), int(v), int(w))
        for u, v, w in zip(shared.row[order], shared.col[order], shared.data[order])
        if w > 0
    )
    return CollabGraph(b.developers, edges, b.interval)


def build_graph(contribs: Iterable[Contribution], interval: Slice | Interval,
                table: AffiliationTable, exclude: Iterable[str] = DEFAULT_EXCLUDES) -> CollabGraph:
    return project_collaboration(build_bipartite(contribs, interval, table, exclude))


def slice_graphs(contribs: Sequence[Contribution], slices: Sequence[Slice],
                 table: AffiliationTable,
                 exclude: Iterable[str] = DEFAULT_EXCLUDES) -> list[CollabGraph]:
    """One graph per slice; co-editing only counts inside a single slice."""
    exclude = tuple(exclude)
    buckets: list[list[Contribution]] = [[] for _ in slices]
    starts = [s.start for s in slices]
    for c in contribs:
        if slices and slices[0].start <= c.timestamp < slices[-1].end:
            i = bisect.bisect_right(starts, c.timestamp) - 1
            buckets[i].append(c)
    return [build_graph(bucket, s, table, exclude) for bucket, s in zip(buckets, slices)]
