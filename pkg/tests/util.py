"""Shared helpers for the test suite: independent re-implementations used as
oracles, plus random-instance plumbing.  Everything here deliberately avoids
the code paths it is used to check."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterator

from fcd.classify import apex_tree_decomposition, feedback_edge_set
from fcd.core import ColoredGraph, Districting, Instance, color_vector, mov
from fcd.generators import gen_random_instance
from fcd.oracle import enumerate_connected_partitions


def naive_mov(counts) -> int:
    """Definition-following margin of victory, written independently."""
    values = sorted(counts, reverse=True)
    if len(values) == 1:
        return values[0]
    return values[0] - values[1]


def all_set_partitions(items: list[int], k: int) -> Iterator[list[list[int]]]:
    """Every partition of items into exactly k non-empty blocks (no pruning)."""
    if k < 1 or k > len(items):
        return

    def rec(i: int, blocks: list[list[int]]) -> Iterator[list[list[int]]]:
        if i == len(items):
            if len(blocks) == k:
                yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(items[i])
            yield from rec(i + 1, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([items[i]])
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def subset_is_connected(graph: ColoredGraph, subset: list[int]) -> bool:
    """Plain DFS connectivity, independent of fcd.core helpers."""
    if not subset:
        return False
    sub = set(subset)
    stack = [subset[0]]
    seen = {subset[0]}
    while stack:
        u = stack.pop()
        for w in graph.adjacency[u]:
            if w in sub and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(sub)


def naive_valid_partitions(graph: ColoredGraph, k: int, ell: int) -> set[frozenset]:
    """All valid districtings via unpruned set-partition filtering (n small)."""
    out = set()
    for blocks in all_set_partitions(list(range(graph.n)), k):
        if all(subset_is_connected(graph, b) for b in blocks):
            if all(naive_mov(color_vector(graph, b)) <= ell for b in blocks):
                out.add(frozenset(frozenset(b) for b in blocks))
    return out


def random_instance(rng: random.Random, class_tag: str, n_range=(2, 9),
                    max_colors=3, max_k=None, max_ell=2, param=None) -> Instance:
    lows = {"cycle": 3, "star": 4, "caterpillar": 5, "tree": 7, "unicyclic": 3}
    lo = max(n_range[0], lows.get(class_tag, 1))
    n = rng.randint(lo, max(lo, n_range[1]))
    k_hi = min(n, max_k) if max_k else n
    return gen_random_instance(class_tag, n, rng.randint(1, max_colors),
                               rng.randint(1, k_hi), rng.randint(0, max_ell),
                               rng.randrange(10 ** 9), param)


def min_cross_edges_over_witnesses(instance: Instance) -> int | None:
    """Smallest cross-district edge count over all valid districtings."""
    g = instance.graph
    best = None
    for d in enumerate_connected_partitions(g, instance.k):
        members = d.districts()
        if any(mov(color_vector(g, dist)) > instance.ell for dist in members):
            continue
        cross = sum(1 for u, v in g.edges() if d.assignment[u] != d.assignment[v])
        if best is None or cross < best:
            best = cross
    return best


def unicyclic_nice_td(graph: ColoredGraph):
    """Width-2 nice decomposition of a unicyclic graph via a one-vertex apex."""
    from fcd.classify import nice_tree_decomposition
    apex = {min(u, v) for (u, v) in feedback_edge_set(graph)}
    return nice_tree_decomposition(graph, apex_tree_decomposition(graph, apex))


def forced_star_feasible_ks(graph: ColoredGraph, center: int,
                            forced: set[int], ell: int) -> set[int]:
    """Exhaustive feasible district counts for a star with a forced center set.

    Every non-center district is a single leaf, so enumerate which leaves
    leave the center district (leaves in ``forced`` may not).
    """
    leaves = [v for v in range(graph.n) if v != center]
    movable = [v for v in leaves if v not in forced]
    feasible = set()
    for r in range(len(movable) + 1):
        for out in combinations(movable, r):
            stay = [v for v in range(graph.n) if v not in out]
            if naive_mov(color_vector(graph, stay)) > ell:
                continue
            if any(naive_mov(color_vector(graph, [v])) > ell for v in out):
                continue
            feasible.add(1 + len(out))
    return feasible


def all_matchings_max_weight(left: int, right: int, edges) -> int:
    """Exhaustive maximum matching weight (oracle for the Hungarian routine)."""
    best = 0
    edges = list(edges)

    def rec(i: int, used_l: set, used_r: set, weight: int) -> None:
        nonlocal best
        best = max(best, weight)
        if i == len(edges):
            return
        l, r, w = edges[i]
        rec(i + 1, used_l, used_r, weight)
        if l not in used_l and r not in used_r:
            rec(i + 1, used_l | {l}, used_r | {r}, weight + w)

    rec(0, set(), set(), 0)
    return best
