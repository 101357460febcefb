"""Ground-truth brute force: enumerate all connected k-partitions and test them.

The enumeration grows one district at a time around the smallest unassigned
vertex, yielding each partition exactly once with districts labeled in
first-occurrence (canonical) order.  It prunes far better than filtering the
Bell-number stream of all set partitions, but the intended working range is
still desk-size only (default cap 12 vertices).
"""

from __future__ import annotations

from typing import Iterator

from .budget import Budget, BudgetExceededError
from .core import ColoredGraph, Districting, Instance, color_vector, mov

DEFAULT_VERTEX_CAP = 12


def _connected_supersets(graph: ColoredGraph, v: int,
                         allowed: frozenset[int]) -> Iterator[frozenset[int]]:
    """All connected subsets of ``allowed`` containing ``v``, each exactly once.

    Classic include/exclude recursion over the neighbor frontier: each subset
    is emitted at the unique leaf where all its vertices are included and all
    its outside neighbors explicitly excluded.
    """

    def rec(current: frozenset[int], frontier: list[int],
            forbidden: frozenset[int]) -> Iterator[frozenset[int]]:
        fresh = [u for u in frontier if u not in forbidden and u not in current]
        if not fresh:
            yield current
            return
        u = fresh[0]
        grown = [w for w in graph.adjacency[u] if w in allowed]
        yield from rec(current | {u}, fresh[1:] + grown, forbidden)
        yield from rec(current, fresh[1:], forbidden | {u})

    start_frontier = [w for w in graph.adjacency[v] if w in allowed]
    yield from rec(frozenset([v]), start_frontier, frozenset())


def enumerate_connected_partitions(graph: ColoredGraph, k: int,
                                   cap: int = DEFAULT_VERTEX_CAP) -> Iterator[Districting]:
    """Yield every partition of V into exactly ``k`` non-empty connected parts."""
    if graph.n > cap:
        raise BudgetExceededError(
            f"oracle enumeration capped at {cap} vertices, got {graph.n}")
    if not 1 <= k <= graph.n:
        return

    assignment = [-1] * graph.n

    def rec(remaining: frozenset[int], parts_left: int) -> Iterator[Districting]:
        if not remaining:
            if parts_left == 0:
                yield Districting(tuple(assignment), k)
            return
        if parts_left == 0 or parts_left > len(remaining):
            return
        v = min(remaining)
        label = k - parts_left
        for subset in _connected_supersets(graph, v, remaining):
            for u in subset:
                assignment[u] = label
            yield from rec(remaining - subset, parts_left - 1)
        # no cleanup needed: labels are overwritten on the next subset

    yield from rec(frozenset(range(graph.n)), k)


def brute_force_solve(instance: Instance, cap: int = DEFAULT_VERTEX_CAP,
                      budget: Budget | None = None) -> tuple[bool, Districting | None]:
    """Decide the instance exhaustively; return the first witness in canonical order."""
    g = instance.graph
    for d in enumerate_connected_partitions(g, instance.k, cap):
        if budget is not None:
            budget.tick()
        members: list[list[int]] = [[] for _ in range(d.k)]
        for v, i in enumerate(d.assignment):
            members[i].append(v)
        if all(mov(color_vector(g, dist)) <= instance.ell for dist in members):
            return True, d
    return False, None


def feasible_district_counts(graph: ColoredGraph, ell: int,
                             cap: int = DEFAULT_VERTEX_CAP) -> set[int]:
    """All k for which the graph splits into k fair connected districts."""
    out = set()
    for k in range(1, graph.n + 1):
        yes, _ = brute_force_solve(Instance(graph, k, ell), cap)
        if yes:
            out.add(k)
    return out
