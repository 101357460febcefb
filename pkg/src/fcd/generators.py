"""Instance generators: random graphs per class plus reduction constructions.

The two hardness constructions are implemented as generators together with
witness builders for their forward directions: a solution of the source
problem (a grid tiling, a not-all-equal assignment) maps to a districting of
the produced instance, which must then verify.  Color indices follow a fixed
documented order so generated files are byte-stable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .classify import classify_graph, minimum_vertex_cover
from .budget import BudgetExceededError
from .core import ColoredGraph, Districting, Instance


# ---------------------------------------------------------------------------
# random instances


def gen_random_instance(class_tag: str, n: int, num_colors: int, k: int,
                        ell: int, seed: int, param: float | None = None) -> Instance:
    """Random instance of the requested graph class, deterministic per seed.

    Classes: ``path``, ``cycle``, ``star``, ``caterpillar``, ``tree``,
    ``unicyclic``, ``bounded_vc`` (param: cover budget, default 3),
    ``general`` (param: edge probability, default 0.3).  The produced graph
    re-classifies as requested (for ``unicyclic``: connected with exactly one
    extra edge; for ``bounded_vc``: cover within budget).
    """
    if n < 1 or num_colors < 1:
        raise ValueError("need n >= 1 and at least one color")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    rng = random.Random(seed)
    builders: dict[str, Callable[[random.Random, int], list[tuple[int, int]]]] = {
        "path": _gen_path, "cycle": _gen_cycle, "star": _gen_star,
        "caterpillar": _gen_caterpillar, "tree": _gen_tree,
        "unicyclic": _gen_unicyclic, "bounded_vc": _gen_bounded_vc,
        "general": _gen_general,
    }
    if class_tag not in builders:
        raise ValueError(f"unknown graph class {class_tag!r}")
    _check_feasible(class_tag, n)
    for _attempt in range(200):
        if class_tag == "bounded_vc":
            edges = _gen_bounded_vc(rng, n, int(param) if param else 3)
        elif class_tag == "general":
            edges = _gen_general(rng, n, param if param is not None else 0.3)
        else:
            edges = builders[class_tag](rng, n)
        perm = list(range(n))
        rng.shuffle(perm)
        edges = [(perm[u], perm[v]) for u, v in edges]
        colors = [rng.randrange(num_colors) for _ in range(n)]
        graph = ColoredGraph.from_edges(n, edges, colors, num_colors)
        if _class_matches(class_tag, graph, param):
            return Instance(graph, k, ell)
    raise ValueError(f"could not realize class {class_tag!r} with n={n}")


def _check_feasible(class_tag: str, n: int) -> None:
    minimum = {"cycle": 3, "star": 4, "caterpillar": 5, "tree": 7, "unicyclic": 3}
    if n < minimum.get(class_tag, 1):
        raise ValueError(
            f"class {class_tag!r} needs at least {minimum[class_tag]} vertices")


def _gen_path(rng: random.Random, n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def _gen_cycle(rng: random.Random, n: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n) for i in range(n)]


def _gen_star(rng: random.Random, n: int) -> list[tuple[int, int]]:
    return [(0, i) for i in range(1, n)]


def _gen_caterpillar(rng: random.Random, n: int) -> list[tuple[int, int]]:
    s = rng.randint(2, n - 1)
    edges = [(i, i + 1) for i in range(s - 1)]
    for leaf in range(s, n):
        edges.append((rng.randrange(s), leaf))
    return edges


def _gen_tree(rng: random.Random, n: int) -> list[tuple[int, int]]:
    # random Pruefer sequence
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    import heapq
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def _gen_unicyclic(rng: random.Random, n: int) -> list[tuple[int, int]]:
    if n == 3:
        return [(0, 1), (1, 2), (0, 2)]
    edges = _gen_tree(rng, n) if n >= 4 else [(0, 1), (1, 2)]
    present = {(min(u, v), max(u, v)) for u, v in edges}
    candidates = [(u, v) for u in range(n) for v in range(u + 1, n)
                  if (u, v) not in present]
    edges.append(candidates[rng.randrange(len(candidates))])
    return edges


def _gen_bounded_vc(rng: random.Random, n: int, b: int) -> list[tuple[int, int]]:
    cover_size = rng.randint(1, min(b, max(1, n - 1)))
    cover = list(range(cover_size))  # relabeled by the caller's permutation
    edges = []
    for c in cover:
        for v in range(n):
            if v != c and (v >= cover_size or v > c) and rng.random() < 0.35:
                edges.append((min(c, v), max(c, v)))
    return sorted(set(edges))


def _gen_general(rng: random.Random, n: int, p: float) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)
            if rng.random() < p]


def _class_matches(class_tag: str, graph: ColoredGraph, param) -> bool:
    if class_tag in ("path", "cycle", "star", "caterpillar", "tree"):
        return classify_graph(graph).class_tag == class_tag
    rep = classify_graph(graph)
    if class_tag == "unicyclic":
        return rep.is_connected and rep.fen == 1
    if class_tag == "bounded_vc":
        try:
            minimum_vertex_cover(graph, int(param) if param else 3)
            return True
        except BudgetExceededError:
            return False
    return True


# ---------------------------------------------------------------------------
# grid tiling reduction


@dataclass(frozen=True)
class GridTilingInstance:
    """Tile sets S[i][j] (1-based keys) of n pairs each from [1,m]^2.

    Within every set the first entries sum to the same number and the second
    entries sum to the same number, across all sets.
    """

    t: int
    m: int
    n: int
    tiles: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]  # [i-1][j-1] -> pairs

    def __post_init__(self):
        if self.t < 1 or self.m < 1:
            raise ValueError("need t >= 1 and m >= 1")
        if self.n <= 2:
            raise ValueError("need more than two tiles per set")
        if len(self.tiles) != self.t or any(len(row) != self.t for row in self.tiles):
            raise ValueError("tile grid must be t x t")
        x_sum = y_sum = None
        for row in self.tiles:
            for tile_set in row:
                if len(set(tile_set)) != len(tile_set) or len(tile_set) != self.n:
                    raise ValueError(f"each tile set needs exactly {self.n} distinct pairs")
                for x, y in tile_set:
                    if not (1 <= x <= self.m and 1 <= y <= self.m):
                        raise ValueError(f"tile ({x},{y}) outside [1,{self.m}]^2")
                xs = sum(x for x, _ in tile_set)
                ys = sum(y for _, y in tile_set)
                if x_sum is None:
                    x_sum, y_sum = xs, ys
                elif (xs, ys) != (x_sum, y_sum):
                    raise ValueError("tile sets disagree on coordinate sums")

    def tile_set(self, i: int, j: int) -> tuple[tuple[int, int], ...]:
        return self.tiles[i - 1][j - 1]


@dataclass(frozen=True)
class GridTilingReduction:
    """Produced instance plus the forward-direction witness builder."""

    source: GridTilingInstance
    instance: Instance
    big_w: int
    big_z: int
    star_members: dict[tuple[int, int, int, int], tuple[int, int]]  # (i,j,x,y) -> vertex id range
    color_names: dict[str, int]

    def witness(self, selection: dict[tuple[int, int], tuple[int, int]]) -> Districting:
        """Districting from one selected tile per cell: each selected star
        becomes its own district, everything else joins the center district."""
        t = self.source.t
        if sorted(selection) != [(i, j) for i in range(1, t + 1) for j in range(1, t + 1)]:
            raise ValueError("selection must pick one tile per cell")
        assignment = [0] * self.instance.graph.n
        district = 1
        for i in range(1, t + 1):
            for j in range(1, t + 1):
                x, y = selection[(i, j)]
                if (x, y) not in self.source.tile_set(i, j):
                    raise ValueError(f"tile {(x, y)} not in set S[{i}][{j}]")
                lo, hi = self.star_members[(i, j, x, y)]
                for v in range(lo, hi):
                    assignment[v] = district
                district += 1
        return Districting(tuple(assignment), self.instance.k)

    def d_color(self, i: int, j: int) -> int:
        return 3 + 3 * ((i - 1) * self.source.t + (j - 1)) + 1

    def b_color(self, i: int, j: int) -> int:
        return 3 + 3 * ((i - 1) * self.source.t + (j - 1))

    def c_color(self, i: int, j: int) -> int:
        return 3 + 3 * ((i - 1) * self.source.t + (j - 1)) + 2


def reduce_grid_tiling(gt: GridTilingInstance) -> GridTilingReduction:
    """Build the districting instance encoding a grid tiling problem.

    One center vertex carries two large equal dummy leaf groups; every tile
    becomes a star hanging off the center whose leaf-group sizes encode the
    tile coordinates; the target district count forces exactly one star per
    tile set out of the center district.  Around the torus, cell indices wrap
    modulo t.  Each star's tie color group is sized to the star's largest
    color total so every star is exactly balanced (for t >= 2 this equals
    the direct two-term maximum of the coordinate groups).
    """
    t, m, n = gt.t, gt.m, gt.n
    big_w = 5 * n * (t * t + t) + 1
    big_z = 2 * (n - 1) * 4 * m * big_w
    base = 4 * m * big_w  # = Z / (2(n-1))

    def f(i: int, j: int) -> int:
        return i * t + j

    def g_(i: int, j: int) -> int:
        return t * t + t + i * t + j

    def b_color(i, j):
        return 3 + 3 * ((i - 1) * t + (j - 1))

    def d_color(i, j):
        return b_color(i, j) + 1

    def c_color(i, j):
        return b_color(i, j) + 2

    num_colors = 3 + 3 * t * t
    colors: list[int] = []
    edges: list[tuple[int, int]] = []
    colors.append(2)  # the center vertex, color c*
    center = 0
    for _ in range(big_z):
        colors.append(0)  # color c
        edges.append((center, len(colors) - 1))
    for _ in range(big_z):
        colors.append(1)  # color c'
        edges.append((center, len(colors) - 1))
    star_members: dict[tuple[int, int, int, int], tuple[int, int]] = {}
    for i in range(1, t + 1):
        for j in range(1, t + 1):
            i2 = i % t + 1
            j2 = j % t + 1
            for x, y in sorted(gt.tile_set(i, j)):
                start = len(colors)
                colors.append(2)  # star center, color c*
                star_center = start
                edges.append((center, star_center))
                groups = [
                    (d_color(i, j), base + big_w * x - f(i, j)),
                    (d_color(i2, j), base - big_w * x - f(i2, j)),
                    (b_color(i, j), base + big_w * y - g_(i, j)),
                    (b_color(i, j2), base - big_w * y - g_(i, j2)),
                ]
                per_color: dict[int, int] = {}
                for color, count in groups:
                    assert count >= 0, "leaf group sizes are non-negative for valid inputs"
                    per_color[color] = per_color.get(color, 0) + count
                groups.append((c_color(i, j), max(per_color.values())))
                for color, count in groups:
                    for _ in range(count):
                        colors.append(color)
                        edges.append((star_center, len(colors) - 1))
                star_members[(i, j, x, y)] = (start, len(colors))
    graph = ColoredGraph.from_edges(len(colors), edges, colors, num_colors)
    instance = Instance(graph, t * t + 1, 0)
    star_count = sum(1 for c in colors if c == 2)
    assert star_count == n * t * t + 1 <= big_z, "center-color total stays below Z"
    return GridTilingReduction(gt, instance, big_w, big_z, star_members,
                               {"c": 0, "c_prime": 1, "c_star": 2})


# ---------------------------------------------------------------------------
# not-all-equal 3-sat reduction


@dataclass(frozen=True)
class NAE3SatInstance:
    """Variables 1..num_vars; clauses of three distinct literals (+v / -v)."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3 or len(set(clause)) != 3:
                raise ValueError(f"clause {clause} must hold three different literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")


@dataclass(frozen=True)
class NAE3SatReduction:
    source: NAE3SatInstance
    instance: Instance
    big_z: int
    central: tuple[int, int]
    literal_vertex: dict[int, int]  # +i / -i -> vertex id
    attached: dict[int, tuple[int, int]]  # anchor vertex -> leaf id range

    def witness(self, assignment: Sequence[bool]) -> Districting:
        """Two districts from a truth assignment: the first central vertex,
        the satisfied literal vertices and all their leaves on one side."""
        if len(assignment) != self.source.num_vars:
            raise ValueError("assignment length mismatch")
        n = self.instance.graph.n
        member = [1] * n
        side_one = [self.central[0]]
        for i in range(1, self.source.num_vars + 1):
            side_one.append(self.literal_vertex[i if assignment[i - 1] else -i])
        for anchor in side_one:
            member[anchor] = 0
            lo, hi = self.attached[anchor]
            for v in range(lo, hi):
                member[v] = 0
        return Districting(tuple(member), 2)


def reduce_nae3sat(sat: NAE3SatInstance) -> NAE3SatReduction:
    """Build the districting instance encoding a not-all-equal formula.

    Two central vertices carry equal large leaf groups of two dummy colors;
    each literal gets a vertex adjacent to both centrals, with per-variable
    leaf groups forcing complementary literals apart and per-clause leaf
    groups forbidding a clause from falling entirely on one side.
    """
    n, clauses = sat.num_vars, sat.clauses
    m = len(clauses)
    big_z = 2 * n * m + 1
    num_colors = 3 + n + m

    def var_color(i: int) -> int:
        return 2 + i

    def clause_color(j: int) -> int:
        return 2 + n + j

    colors: list[int] = [0, 0]  # the two central vertices, color c
    edges: list[tuple[int, int]] = []
    attached: dict[int, tuple[int, int]] = {}

    def attach(anchor: int, color: int, count: int) -> None:
        for _ in range(count):
            colors.append(color)
            edges.append((anchor, len(colors) - 1))

    for central in (0, 1):
        start = len(colors)
        attach(central, 1, 3 * big_z)   # color c'
        attach(central, 2, 3 * big_z)   # color c''
        attached[central] = (start, len(colors))
    literal_vertex: dict[int, int] = {}
    occurrences: dict[int, list[int]] = {}
    for j, clause in enumerate(clauses, start=1):
        for lit in clause:
            occurrences.setdefault(lit, []).append(j)
    for i in range(1, n + 1):
        for lit in (i, -i):
            v = len(colors)
            colors.append(0)  # literal vertex, color c
            literal_vertex[lit] = v
            edges.append((0, v))
            edges.append((1, v))
            start = len(colors)
            attach(v, var_color(i), 3 * big_z - i)
            for j in sorted(occurrences.get(lit, ())):
                attach(v, clause_color(j), big_z + j)
            attached[v] = (start, len(colors))
    graph = ColoredGraph.from_edges(len(colors), edges, colors, num_colors)
    return NAE3SatReduction(sat, Instance(graph, 2, 0), big_z, (0, 1),
                            literal_vertex, attached)


# ---------------------------------------------------------------------------
# balanced-connected-partition reduction


def reduce_pbcp(n: int, edges: Sequence[tuple[int, int]], v: int,
                v2: int) -> Instance:
    """Attach n/2 second-color leaves to each of two anchor vertices.

    The original (uncolored) graph gets color 0 everywhere; with two target
    districts and margin 0, a solution must split the original vertex set
    into two equal connected halves separating the anchors.
    """
    if n % 2 != 0:
        raise ValueError("vertex count must be even")
    if v == v2:
        raise ValueError("anchors must differ")
    if not (0 <= v < n and 0 <= v2 < n):
        raise ValueError("anchor out of range")
    all_edges = list(edges)
    colors = [0] * n
    half = n // 2
    for idx in range(half):
        colors.append(1)
        all_edges.append((v, n + idx))
    for idx in range(half):
        colors.append(1)
        all_edges.append((v2, n + half + idx))
    graph = ColoredGraph.from_edges(2 * n, all_edges, colors, 2)
    return Instance(graph, 2, 0)
