"""Polynomial-time solvers: paths, cycles, stars, caterpillars, disjoint unions.

The path solver fills a prefix table over fair segments; the cycle solver
iterates the path solver over all cut points; the star solver rests on an
exact interval characterization of the feasible district counts (with the
forced center set generalized to a weighted center); the caterpillar solver
plugs star intervals of spine segments into the path-style table; the
disjoint-union combinator distributes districts over components by
subset-sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (ColorVector, ColoredGraph, Districting, Instance,
                   color_vector, mov)


@dataclass(frozen=True)
class StarInterval:
    """Feasible district counts for a star with a forced center set.

    When ``feasible`` holds, exactly the counts in ``[lo, hi]`` admit a
    partition into fair connected districts keeping the center set together.
    """

    feasible: bool
    lo: int = 0
    hi: int = -1

    def contains(self, k: int) -> bool:
        return self.feasible and self.lo <= k <= self.hi


class _TopTwoTracker:
    """Incrementally maintains the two largest entries of a count vector.

    Supports only increments, which is all the segment sweep needs; each
    update is O(1), giving the amortized-quadratic fair-segment table.
    """

    __slots__ = ("num_colors", "counts", "cnt_at", "max1", "sec")

    def __init__(self, num_colors: int):
        self.num_colors = num_colors
        self.counts = [0] * num_colors
        self.cnt_at = {0: num_colors}
        self.max1 = 0
        self.sec = 0

    def add(self, color: int) -> None:
        a = self.counts[color]
        self.counts[color] = a + 1
        self.cnt_at[a] -= 1
        self.cnt_at[a + 1] = self.cnt_at.get(a + 1, 0) + 1
        if a == self.max1:
            # a maximum moved up; another color may still sit at the old max
            if self.cnt_at[a]:
                self.sec = a
            self.max1 = a + 1
        elif a + 1 == self.max1:
            self.sec = self.max1
        elif a + 1 > self.sec:
            self.sec = a + 1

    def mov(self) -> int:
        if self.num_colors == 1:
            return self.max1
        return self.max1 - self.sec


def _fair_segment_table(colors: Sequence[int], num_colors: int,
                        ell: int) -> list[list[bool]]:
    """fair[i][j] == True iff the segment colors[i..j] has MOV <= ell."""
    n = len(colors)
    fair = [[False] * n for _ in range(n)]
    for i in range(n):
        tracker = _TopTwoTracker(num_colors)
        row = fair[i]
        for j in range(i, n):
            tracker.add(colors[j])
            row[j] = tracker.mov() <= ell
    return fair


def _suffix_counts(fair: list[list[bool]], n: int, kmax: int) -> list[int]:
    """suffix[i] = bitmask of t such that colors[i..] splits into t fair segments."""
    full = (1 << (kmax + 1)) - 1
    suffix = [0] * (n + 1)
    suffix[n] = 1
    for i in range(n - 1, -1, -1):
        acc = 0
        row = fair[i]
        for j in range(i, n):
            if row[j]:
                acc |= suffix[j + 1] << 1
        suffix[i] = acc & full
    return suffix


def path_feasible_counts(colors: Sequence[int], num_colors: int, ell: int,
                         kmax: int) -> int:
    """Bitmask of all t <= kmax such that the color path splits into t fair parts."""
    n = len(colors)
    if n == 0:
        return 1
    fair = _fair_segment_table(colors, num_colors, ell)
    return _suffix_counts(fair, n, kmax)[0]


def _check_path_order(graph: ColoredGraph, order: Sequence[int]) -> None:
    if sorted(order) != list(range(graph.n)):
        raise ValueError("order is not a permutation of the vertices")
    for a, b in zip(order, order[1:]):
        if b not in graph.adjacency[a]:
            raise ValueError(f"order not a path: {a} and {b} not adjacent")
    if graph.m != graph.n - 1:
        raise ValueError("graph has extra edges; not a path")


def _leftmost_split_witness(order: Sequence[int], fair: list[list[bool]],
                            suffix: list[int], k: int) -> Districting:
    n = len(order)
    assignment = [0] * n
    pos, district, remaining = 0, 0, k
    while pos < n:
        for j in range(pos, n):
            if fair[pos][j] and (suffix[j + 1] >> (remaining - 1)) & 1:
                for t in range(pos, j + 1):
                    assignment[order[t]] = district
                pos, district, remaining = j + 1, district + 1, remaining - 1
                break
    return Districting(tuple(assignment), k).canonical()


def solve_path(instance: Instance,
               order: Sequence[int]) -> tuple[bool, Districting | None]:
    """Decide a path instance along the Hamiltonian order; witness on YES.

    The witness uses the leftmost feasible splits, so it is deterministic.
    """
    g = instance.graph
    _check_path_order(g, order)
    n, k, ell = g.n, instance.k, instance.ell
    colors = [g.colors[v] for v in order]
    fair = _fair_segment_table(colors, g.num_colors, ell)
    suffix = _suffix_counts(fair, n, k)
    if not (suffix[0] >> k) & 1:
        return False, None
    return True, _leftmost_split_witness(order, fair, suffix, k)


def _check_cycle_order(graph: ColoredGraph, order: Sequence[int]) -> None:
    if sorted(order) != list(range(graph.n)):
        raise ValueError("order is not a permutation of the vertices")
    if graph.n < 3 or graph.m != graph.n:
        raise ValueError("graph is not a cycle")
    for a, b in zip(order, list(order[1:]) + [order[0]]):
        if b not in graph.adjacency[a]:
            raise ValueError(f"order not a cycle: {a} and {b} not adjacent")


def solve_cycle(instance: Instance,
                order: Sequence[int]) -> tuple[bool, Districting | None]:
    """Decide a cycle instance: try every cut point, then solve the path."""
    g = instance.graph
    _check_cycle_order(g, order)
    n, k, ell = g.n, instance.k, instance.ell
    if k == 1:
        if mov(color_vector(g, range(n))) <= ell:
            return True, Districting((0,) * n, 1)
        return False, None
    colors = [g.colors[v] for v in order]
    for cut in range(n):
        rot_colors = colors[cut:] + colors[:cut]
        rot_order = [order[(cut + t) % n] for t in range(n)]
        fair = _fair_segment_table(rot_colors, g.num_colors, ell)
        suffix = _suffix_counts(fair, n, k)
        if (suffix[0] >> k) & 1:
            return True, _leftmost_split_witness(rot_order, fair, suffix, k)
    return False, None


def _argmax_color(counts: Sequence[int], skip: int = -1) -> int:
    """Index of the largest entry, lowest index on ties, optionally skipping one."""
    best = -1
    for c, x in enumerate(counts):
        if c == skip:
            continue
        if best == -1 or x > counts[best]:
            best = c
    return best


@dataclass(frozen=True)
class _StarCase:
    """Internals of the star characterization, shared with witness building."""

    interval: StarInterval
    case: str  # "ell0" | "one_color" | "center_overfull" | "general"
    c1: int = -1
    cs2: int = -1
    b_l: int = 0
    b_u: int = 0


def _star_case(x_counts: Sequence[int], y_counts: Sequence[int],
               ell: int) -> _StarCase:
    num_colors = len(x_counts)
    xy = [a + b for a, b in zip(x_counts, y_counts)]
    size_y = sum(y_counts)
    if ell == 0:
        # singleton districts are never 0-fair, so everything stays together
        if mov(xy) == 0:
            return _StarCase(StarInterval(True, 1, 1), "ell0")
        return _StarCase(StarInterval(False), "ell0")
    if num_colors == 1:
        # the center district keeps total-(k-1) vertices of the single color
        lo = max(1, xy[0] - ell + 1)
        hi = size_y + 1
        if lo <= hi:
            return _StarCase(StarInterval(True, lo, hi), "one_color")
        return _StarCase(StarInterval(False), "one_color")
    c1 = _argmax_color(xy)
    c2 = _argmax_color(xy, skip=c1)
    if x_counts[c1] > xy[c2] + ell:
        return _StarCase(StarInterval(False), "center_overfull")
    cs1 = _argmax_color(x_counts)
    eligible = [c for c in range(num_colors)
                if c != cs1 and xy[c] >= x_counts[cs1] - ell]
    assert eligible, "second center color is always well-defined here"
    cs2 = max(eligible, key=lambda c: (x_counts[c], -c))
    b_l = max(0, xy[c1] - xy[c2] - ell)
    b_u = max(0, x_counts[cs1] - x_counts[cs2] - ell)
    lo, hi = b_l + 1, size_y + 1 - b_u
    if lo <= hi:
        return _StarCase(StarInterval(True, lo, hi), "general", c1, cs2, b_l, b_u)
    return _StarCase(StarInterval(False), "general", c1, cs2, b_l, b_u)


def star_interval_from_counts(x_counts: ColorVector, y_counts: ColorVector,
                              ell: int) -> StarInterval:
    """Interval of feasible district counts for a weighted-center star.

    ``x_counts`` is the color vector of the center set X (the center vertex
    may represent several vertices), ``y_counts`` the vector of the leaves.
    All vertices of X must stay in one district, so every further district is
    a single leaf.
    """
    if len(x_counts) != len(y_counts):
        raise ValueError("mismatched color vector lengths")
    if sum(x_counts) < 1:
        raise ValueError("center set X must be non-empty")
    return _star_case(x_counts, y_counts, ell).interval


def star_interval(x_counts: ColorVector, y_colors: Sequence[int],
                  ell: int) -> StarInterval:
    """Same as :func:`star_interval_from_counts`, leaves given as a color multiset."""
    y_counts = [0] * len(x_counts)
    for c in y_colors:
        y_counts[c] += 1
    return star_interval_from_counts(tuple(x_counts), tuple(y_counts), ell)


def _star_center(graph: ColoredGraph) -> int:
    if graph.n == 1:
        return 0
    center = min(range(graph.n), key=lambda v: (-graph.degree(v), v))
    if graph.degree(center) != graph.n - 1 or graph.m != graph.n - 1:
        raise ValueError("graph is not a star")
    return center


def solve_star(instance: Instance) -> tuple[bool, Districting | None]:
    """Decide a star instance; the witness follows the interval construction.

    Start from the all-in-one solution minus the forced-out leaves of the
    top color, keep the upper-end center's leaves pinned, and move further
    leaves into their own districts one at a time, preferring a leaf of the
    center district's current most frequent color.
    """
    g = instance.graph
    center = _star_center(g)
    leaves = sorted(v for v in range(g.n) if v != center)
    k, ell = instance.k, instance.ell
    x_counts = color_vector(g, [center])
    y_counts = [0] * g.num_colors
    for v in leaves:
        y_counts[g.colors[v]] += 1
    case = _star_case(x_counts, y_counts, ell)
    if not case.interval.contains(k):
        return False, None
    if case.case == "ell0":
        return True, Districting((0,) * g.n, 1)
    if case.case == "one_color":
        singles = leaves[: k - 1]
    else:
        singles = [v for v in leaves if g.colors[v] == case.c1][: case.b_l]
        taken = set(singles)
        pinned = set()
        for v in leaves:
            if len(pinned) == case.b_u:
                break
            if g.colors[v] == case.cs2 and v not in taken:
                pinned.add(v)
        center_set = [v for v in leaves if v not in taken]
        counts = list(x_counts)
        for v in center_set:
            counts[g.colors[v]] += 1
        while 1 + len(singles) < k:
            movable = [v for v in center_set if v not in pinned]
            top = _argmax_color(counts)
            of_top = [v for v in movable if g.colors[v] == top]
            pick = of_top[0] if of_top else movable[0]
            singles.append(pick)
            center_set.remove(pick)
            counts[g.colors[pick]] -= 1
    assignment = [0] * g.n
    for i, v in enumerate(sorted(singles)):
        assignment[v] = i + 1
    return True, Districting(tuple(assignment), k).canonical()


def solve_caterpillar(instance: Instance, spine: Sequence[int]) -> bool:
    """Decide a caterpillar instance given its spine order (decision only).

    Segment table entries are star intervals: spine vertices ``i..j`` merge
    into a weighted center, their leaves form the leaf multiset.  The prefix
    table allows the first segment itself to host several districts (the
    whole prefix may be one center district plus singleton leaves).
    """
    g = instance.graph
    p = len(spine)
    spine_set = set(spine)
    if len(spine_set) != p or p == 0:
        raise ValueError("invalid spine: empty or repeated vertices")
    for a, b in zip(spine, spine[1:]):
        if b not in g.adjacency[a]:
            raise ValueError(f"invalid spine: {a} and {b} not adjacent")
    leaves_of: dict[int, list[int]] = {u: [] for u in spine}
    for v in range(g.n):
        if v in spine_set:
            continue
        if g.degree(v) != 1 or g.adjacency[v][0] not in spine_set:
            raise ValueError(f"invalid spine: vertex {v} is not a spine leaf")
        leaves_of[g.adjacency[v][0]].append(v)
    k, ell, C = instance.k, instance.ell, g.num_colors

    x_pref = [[0] * C]
    y_pref = [[0] * C]
    for u in spine:
        xrow = list(x_pref[-1])
        xrow[g.colors[u]] += 1
        x_pref.append(xrow)
        yrow = list(y_pref[-1])
        for v in leaves_of[u]:
            yrow[g.colors[v]] += 1
        y_pref.append(yrow)

    def interval(i: int, j: int) -> StarInterval:
        x = tuple(x_pref[j + 1][c] - x_pref[i][c] for c in range(C))
        y = tuple(y_pref[j + 1][c] - y_pref[i][c] for c in range(C))
        return star_interval_from_counts(x, y, ell)

    iv = [[interval(i, j) if i <= j else None for j in range(p)] for i in range(p)]
    # T[i][t]: the first i spine groups split into t fair connected districts
    T = [[False] * (k + 1) for _ in range(p + 1)]
    T[0][0] = True
    for i in range(1, p + 1):
        for t in range(1, k + 1):
            ok = False
            for j in range(i):
                seg = iv[j][i - 1]
                if not seg.feasible:
                    continue
                lo = max(seg.lo, 1)
                hi = min(seg.hi, t)
                for t2 in range(lo, hi + 1):
                    if T[j][t - t2]:
                        ok = True
                        break
                if ok:
                    break
            T[i][t] = ok
    return T[p][k]


def solve_disjoint_union(component_tables: Sequence[Sequence[int] | set[int]],
                         k: int) -> bool:
    """Combine per-component feasible district counts by subset-sum.

    ``component_tables[i]`` holds the j for which component i splits into j
    fair connected districts.  Districts cannot span components, so the
    instance is a YES iff the per-component counts can sum to ``k``.
    """
    if k < len(component_tables):
        return False
    reach = 1  # bit j set: the processed components together host j districts
    for table in component_tables:
        nxt = 0
        for j in set(table):
            if 1 <= j <= k:
                nxt |= reach << j
        reach = nxt & ((1 << (k + 1)) - 1)
        if reach == 0:
            return False
    return bool((reach >> k) & 1)
