"""Branch-enumeration solver for graphs whose branch decomposition is small.

A branch is a maximal path whose inner vertices have degree two (or a cycle
with one designated endpoint).  Every district containing a branch endpoint
intersects each branch in a prefix, a suffix, or both; districts containing
no endpoint live strictly inside a single branch.  The solver guesses how
the endpoints partition into districts and one cut pair per branch, checks
the guessed endpoint districts for fairness and connectivity, and solves the
leftover disjoint paths with the path solver plus the disjoint-union
combinator.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .budget import Budget, ensure_budget
from .classify import BranchDecomposition
from .core import Instance, color_vector, is_connected_subset, mov
from .solvers_poly import path_feasible_counts, solve_disjoint_union


def set_partitions(items: Sequence[int], blocks: int) -> Iterator[list[list[int]]]:
    """All partitions of ``items`` into exactly ``blocks`` non-empty lists.

    Deterministic: items are assigned in order, a new block may only be
    opened by the smallest unplaced item (restricted-growth enumeration).
    """
    n = len(items)
    if blocks < 1 or blocks > n:
        return

    parts: list[list[int]] = []

    def rec(i: int) -> Iterator[list[list[int]]]:
        if i == n:
            if len(parts) == blocks:
                yield [list(p) for p in parts]
            return
        if len(parts) + (n - i) < blocks:
            return
        for p in parts:
            p.append(items[i])
            yield from rec(i + 1)
            p.pop()
        if len(parts) < blocks:
            parts.append([items[i]])
            yield from rec(i + 1)
            parts.pop()

    yield from rec(0)


def solve_mln(instance: Instance, bd: BranchDecomposition,
              budget: Budget | None = None) -> bool:
    """Decide the instance by exhausting branch-cut guesses (decision only).

    Guessed endpoint districts are explicitly checked for connectivity:
    a raw guess may assemble segments that do not join up, and such guesses
    are rejected rather than trusted.
    """
    g = instance.graph
    if g.n >= 2 and not is_connected_subset(g, range(g.n)):
        raise ValueError("branch enumeration requires a connected graph")
    budget = ensure_budget(budget)
    k, ell = instance.k, instance.ell
    if g.n == 1:
        return k == 1 and mov(color_vector(g, [0])) <= ell

    branches = bd.branches
    endpoints = sorted(bd.endpoints)
    owner_of = {}

    def segments_of_guess(cuts: Sequence[tuple[int, int]]
                          ) -> tuple[list[set[int]], list[list[int]]]:
        """District vertex sets for the current owner map, plus leftovers."""
        districts: list[set[int]] = [set() for _ in range(k_prime)]
        leftovers: list[list[int]] = []
        for b, (j, j2) in zip(branches, cuts):
            verts = b.vertices
            l = len(verts)
            first, last = verts[0], verts[-1]
            districts[owner_of[first]].update(verts[:j])
            districts[owner_of[last]].update(verts[l - j2:])
            middle = verts[j:l - j2]
            if middle:
                leftovers.append(list(middle))
        return districts, leftovers

    for k_prime in range(1, min(k, len(endpoints)) + 1):
        for partition in set_partitions(endpoints, k_prime):
            for i, block in enumerate(partition):
                for v in block:
                    owner_of[v] = i
            cut_ranges = []
            for b in branches:
                l = len(b.vertices)
                cut_ranges.append([(j, j2) for j in range(1, l)
                                   for j2 in range(1, l - j + 1)])
            # iterate the cartesian product of per-branch cuts
            idx = [0] * len(branches)
            while True:
                budget.tick()
                cuts = [cut_ranges[b][idx[b]] for b in range(len(branches))]
                districts, leftovers = segments_of_guess(cuts)
                ok = True
                for dist in districts:
                    if mov(color_vector(g, dist)) > ell or not is_connected_subset(g, dist):
                        ok = False
                        break
                if ok:
                    residual_k = k - k_prime
                    tables = [
                        _bits_to_set(path_feasible_counts(
                            [g.colors[v] for v in seg], g.num_colors, ell,
                            min(residual_k, len(seg))))
                        for seg in leftovers
                    ]
                    if not leftovers:
                        if residual_k == 0:
                            return True
                    elif solve_disjoint_union(tables, residual_k):
                        return True
                # advance the mixed-radix counter
                pos = 0
                while pos < len(branches):
                    idx[pos] += 1
                    if idx[pos] < len(cut_ranges[pos]):
                        break
                    idx[pos] = 0
                    pos += 1
                if pos == len(branches):
                    break
    return False


def _bits_to_set(mask: int) -> set[int]:
    out = set()
    t = 0
    while mask:
        if mask & 1:
            out.add(t)
        mask >>= 1
        t += 1
    return out
