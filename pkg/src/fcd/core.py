"""Colored-graph data model, margin-of-victory arithmetic and verification.

Everything downstream (solvers, generators, the brute-force oracle) is
measured against the definitions in this module:

* a *district* is a vertex set; in a solution it must induce a connected
  subgraph,
* the margin of victory (MOV) of a district is the difference between the
  largest and second largest entry of its color-count vector, taken over the
  full length-``num_colors`` vector (so a singleton district has MOV 1
  whenever there are at least two colors); a length-1 vector's MOV is its
  single entry,
* a district is ``ell``-fair if its MOV is at most ``ell``.

All types are immutable after construction and all operations are pure
functions, so everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque
from typing import Iterable, Iterator, Sequence

ColorVector = tuple[int, ...]


@dataclass(frozen=True)
class ColoredGraph:
    """Undirected simple graph with one color index per vertex.

    ``adjacency[v]`` is the sorted tuple of neighbors of ``v``.  Color
    indices live in ``[0, num_colors)``; indices may be unused (generators
    produce sparse palettes), which is harmless because MOV is computed over
    the full-length count vector.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]
    num_colors: int

    def __post_init__(self):
        if self.n < 0 or len(self.adjacency) != self.n or len(self.colors) != self.n:
            raise ValueError("inconsistent vertex count")
        if self.num_colors < 1 and self.n > 0:
            raise ValueError("need at least one color")
        for v, nbrs in enumerate(self.adjacency):
            if any(u == v for u in nbrs):
                raise ValueError(f"self-loop at vertex {v}")
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"duplicate edge at vertex {v}")
            if tuple(sorted(nbrs)) != nbrs:
                raise ValueError(f"adjacency of vertex {v} not sorted")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise ValueError(f"neighbor {u} of {v} out of range")
                if v not in self.adjacency[u]:
                    raise ValueError(f"edge {{{v},{u}}} not symmetric")
        for v, c in enumerate(self.colors):
            if not 0 <= c < self.num_colors:
                raise ValueError(f"color {c} of vertex {v} out of range")

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]],
                   colors: Sequence[int], num_colors: int) -> "ColoredGraph":
        adj: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        return ColoredGraph(n, tuple(tuple(sorted(a)) for a in adj),
                            tuple(colors), num_colors)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class Instance:
    """A districting problem: graph, district count ``k``, fairness bound ``ell``."""

    graph: ColoredGraph
    k: int
    ell: int

    def __post_init__(self):
        if not 1 <= self.k <= self.graph.n:
            raise ValueError(f"k={self.k} outside [1, n={self.graph.n}]")
        if self.ell < 0:
            raise ValueError("ell must be non-negative")


@dataclass(frozen=True)
class Districting:
    """Ordered partition of the vertices into ``k`` districts.

    Stored as a per-vertex district index in ``[0, k)``.  Non-emptiness of
    every district is a *verification* predicate (see
    :func:`verify_districting`), not a construction invariant, so that
    solver intermediates and user-supplied solutions can be represented.
    """

    assignment: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        for v, d in enumerate(self.assignment):
            if not 0 <= d < self.k:
                raise ValueError(f"district {d} of vertex {v} outside [0,{self.k})")

    @staticmethod
    def from_sets(districts: Sequence[Iterable[int]], n: int) -> "Districting":
        assignment = [-1] * n
        for i, dist in enumerate(districts):
            for v in dist:
                if assignment[v] != -1:
                    raise ValueError(f"vertex {v} assigned twice")
                assignment[v] = i
        if any(d == -1 for d in assignment):
            raise ValueError("not every vertex assigned")
        return Districting(tuple(assignment), len(districts))

    def districts(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, d in enumerate(self.assignment):
            out[d].append(v)
        return out

    def canonical(self) -> "Districting":
        """Relabel districts in first-occurrence order (stable file output)."""
        relabel: dict[int, int] = {}
        new = []
        for d in self.assignment:
            if d not in relabel:
                relabel[d] = len(relabel)
            new.append(relabel[d])
        return Districting(tuple(new), self.k)


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of :func:`verify_districting`.

    On failure, ``district`` is the first failing district index and
    ``reason`` one of ``"empty"``, ``"disconnected"``, ``"unfair"`` (with the
    offending MOV in ``mov``).
    """

    ok: bool
    district: int = -1
    reason: str = ""
    mov: int = -1

    def __bool__(self) -> bool:
        return self.ok


def color_vector(graph: ColoredGraph, subset: Iterable[int]) -> ColorVector:
    """Count vertices of each color in ``subset`` (full-length vector)."""
    counts = [0] * graph.num_colors
    for v in subset:
        if not 0 <= v < graph.n:
            raise ValueError(f"vertex {v} out of range")
        counts[graph.colors[v]] += 1
    return tuple(counts)


def mov(counts: Sequence[int]) -> int:
    """Margin of victory of a count vector.

    Largest minus second largest entry; the second largest is taken over the
    multiset with one copy of the maximum removed, so two tied maxima give 0.
    A length-1 vector's MOV is its single entry.
    """
    if len(counts) == 0:
        raise ValueError("empty color vector")
    if len(counts) == 1:
        return counts[0]
    top = second = -1
    for x in counts:
        if x > top:
            second = top
            top = x
        elif x > second:
            second = x
    return top - second


def connected_components(graph: ColoredGraph, subset: Iterable[int]) -> list[list[int]]:
    """Maximal connected sets of the subgraph induced by ``subset``.

    Components are ordered by their smallest vertex id and internally sorted.
    """
    sub = set()
    for v in subset:
        if not 0 <= v < graph.n:
            raise ValueError(f"vertex {v} out of range")
        sub.add(v)
    seen: set[int] = set()
    comps: list[list[int]] = []
    for start in sorted(sub):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in graph.adjacency[u]:
                if w in sub and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected_subset(graph: ColoredGraph, subset: Iterable[int]) -> bool:
    """True iff ``subset`` is non-empty and induces a connected subgraph."""
    sub = set(subset)
    if not sub:
        return False
    start = next(iter(sub))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in graph.adjacency[u]:
            if w in sub and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(sub)


def verify_districting(instance: Instance, d: Districting) -> VerificationResult:
    """Check that ``d`` solves ``instance``.

    Valid iff every district is non-empty, induces a connected subgraph and
    has MOV at most ``ell``.  The report names the first failing district
    (checking, per district, emptiness, then connectivity, then fairness).
    """
    g = instance.graph
    if d.k != instance.k:
        raise ValueError(f"districting has k={d.k}, instance wants k={instance.k}")
    if len(d.assignment) != g.n:
        raise ValueError("assignment length does not match vertex count")
    members: list[list[int]] = [[] for _ in range(d.k)]
    for v, i in enumerate(d.assignment):
        members[i].append(v)
    for i in range(d.k):
        dist = members[i]
        if not dist:
            return VerificationResult(False, i, "empty")
        if not is_connected_subset(g, dist):
            return VerificationResult(False, i, "disconnected")
        m = mov(color_vector(g, dist))
        if m > instance.ell:
            return VerificationResult(False, i, "unfair", m)
    return VerificationResult(True)
