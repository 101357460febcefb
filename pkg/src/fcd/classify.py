"""Structural analysis of colored graphs: the facts solver dispatch runs on.

Provides the graph-class report (path / cycle / star / caterpillar / tree /
forest / general), branch decompositions (maximal paths whose inner vertices
have degree two, plus cycles hanging off at most one higher-degree vertex),
feedback edge sets, exact small vertex covers, and nice tree decompositions
with the usual leaf / introduce-vertex / introduce-edge / forget / join node
types, every graph edge introduced exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .budget import Budget, BudgetExceededError
from .core import ColoredGraph, connected_components


@dataclass(frozen=True)
class StructureReport:
    class_tag: str  # path | cycle | star | caterpillar | tree | forest | general
    is_connected: bool
    num_components: int
    degree_ge2_count: int
    fen: int
    spine: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Branch:
    """A maximal path ``v_1..v_l`` with all inner vertices of degree two.

    For a cycle branch the vertex list repeats the designated endpoint, i.e.
    ``vertices[0] == vertices[-1]``; the designated endpoint is the unique
    vertex of degree at least three on the cycle, or vertex
    ``min(cycle)`` when the whole graph is a single cycle.
    """

    vertices: tuple[int, ...]
    is_cycle: bool = False

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise ValueError("branch needs at least two entries")
        if self.is_cycle and self.vertices[0] != self.vertices[-1]:
            raise ValueError("cycle branch must repeat its endpoint")

    @property
    def length(self) -> int:
        """The paper-style index bound l (entries including a repeat for cycles)."""
        return len(self.vertices)

    def endpoints(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]


@dataclass(frozen=True)
class BranchDecomposition:
    branches: tuple[Branch, ...]
    endpoints: frozenset[int]


class InvalidDecompositionError(ValueError):
    """A supplied tree decomposition violates one of the three axioms."""


@dataclass
class TreeDecomposition:
    """A raw (not nice) tree decomposition: per-node bags plus parent links.

    ``parents[i]`` is the parent node id or -1 for the single root.
    """

    bags: list[frozenset[int]]
    parents: list[int]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def validate(self, graph: ColoredGraph) -> None:
        num = len(self.bags)
        if len(self.parents) != num or num == 0:
            raise InvalidDecompositionError("node/parent count mismatch")
        roots = [i for i, p in enumerate(self.parents) if p == -1]
        if len(roots) != 1:
            raise InvalidDecompositionError("tree decomposition must have exactly one root")
        for i, p in enumerate(self.parents):
            if p != -1 and not 0 <= p < num:
                raise InvalidDecompositionError(f"parent of node {i} out of range")
        kid_lists: list[list[int]] = [[] for _ in range(num)]
        for i, p in enumerate(self.parents):
            if p != -1:
                kid_lists[p].append(i)
        reach = {roots[0]}
        frontier = [roots[0]]
        while frontier:
            i = frontier.pop()
            for j in kid_lists[i]:
                if j not in reach:
                    reach.add(j)
                    frontier.append(j)
        if len(reach) != num:
            raise InvalidDecompositionError("decomposition nodes do not form one tree")
        covered = set()
        for b in self.bags:
            for v in b:
                if not 0 <= v < graph.n:
                    raise InvalidDecompositionError(f"bag vertex {v} out of range")
            covered |= b
        if covered != set(range(graph.n)):
            missing = sorted(set(range(graph.n)) - covered)
            raise InvalidDecompositionError(
                f"axiom 1 violated: vertices {missing} in no bag")
        for u, v in graph.edges():
            if not any(u in b and v in b for b in self.bags):
                raise InvalidDecompositionError(
                    f"axiom 2 violated: edge {{{u},{v}}} in no bag")
        children: list[list[int]] = [[] for _ in range(num)]
        for i, p in enumerate(self.parents):
            if p != -1:
                children[p].append(i)
        for v in range(graph.n):
            nodes = [i for i in range(num) if v in self.bags[i]]
            # connectivity of the occurrence set in the node tree
            node_set = set(nodes)
            stack = [nodes[0]]
            reached = {nodes[0]}
            while stack:
                i = stack.pop()
                for j in children[i] + ([self.parents[i]] if self.parents[i] != -1 else []):
                    if j in node_set and j not in reached:
                        reached.add(j)
                        stack.append(j)
            if reached != node_set:
                raise InvalidDecompositionError(
                    f"axiom 3 violated: occurrences of vertex {v} not connected")


LEAF = "leaf"
INTRODUCE = "introduce"
INTRODUCE_EDGE = "introduce_edge"
FORGET = "forget"
JOIN = "join"


@dataclass
class NiceTreeDecomposition:
    """Nice tree decomposition stored as parallel arrays in post-order.

    ``kinds[i]`` is one of the node-type constants, ``data[i]`` the vertex or
    edge the node introduces/forgets (None for join), ``children[i]`` the
    child node ids, ``bags[i]`` the sorted bag.  The root is the last node.
    """

    kinds: list[str] = field(default_factory=list)
    data: list[object] = field(default_factory=list)
    children: list[list[int]] = field(default_factory=list)
    bags: list[tuple[int, ...]] = field(default_factory=list)

    def add(self, kind: str, data: object, children: list[int],
            bag: tuple[int, ...]) -> int:
        self.kinds.append(kind)
        self.data.append(data)
        self.children.append(children)
        self.bags.append(bag)
        return len(self.kinds) - 1

    @property
    def root(self) -> int:
        return len(self.kinds) - 1

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def validate(self, graph: ColoredGraph) -> None:
        """Independent axiom and node-shape checker."""
        introduced_edges: list[tuple[int, int]] = []
        is_child = [False] * len(self.kinds)
        for i, kind in enumerate(self.kinds):
            bag = set(self.bags[i])
            kids = self.children[i]
            for c in kids:
                if not 0 <= c < i:
                    raise InvalidDecompositionError("children must precede parents")
                is_child[c] = True
            if kind == LEAF:
                if kids or len(bag) != 1:
                    raise InvalidDecompositionError(f"bad leaf node {i}")
            elif kind == INTRODUCE:
                v = self.data[i]
                if len(kids) != 1 or bag != set(self.bags[kids[0]]) | {v} or v in self.bags[kids[0]]:
                    raise InvalidDecompositionError(f"bad introduce node {i}")
            elif kind == INTRODUCE_EDGE:
                u, v = self.data[i]  # type: ignore[misc]
                if len(kids) != 1 or bag != set(self.bags[kids[0]]) or u not in bag or v not in bag:
                    raise InvalidDecompositionError(f"bad introduce-edge node {i}")
                if v not in graph.adjacency[u]:
                    raise InvalidDecompositionError(f"node {i} introduces non-edge {(u, v)}")
                introduced_edges.append((min(u, v), max(u, v)))
            elif kind == FORGET:
                v = self.data[i]
                if len(kids) != 1 or bag != set(self.bags[kids[0]]) - {v} or v not in self.bags[kids[0]]:
                    raise InvalidDecompositionError(f"bad forget node {i}")
            elif kind == JOIN:
                if len(kids) != 2 or any(set(self.bags[c]) != bag for c in kids):
                    raise InvalidDecompositionError(f"bad join node {i}")
            else:
                raise InvalidDecompositionError(f"unknown node kind {kind!r}")
        if is_child[self.root] or any(not is_child[i] for i in range(len(self.kinds) - 1)):
            raise InvalidDecompositionError("nodes do not form a single rooted tree")
        if sorted(introduced_edges) != sorted(graph.edges()):
            raise InvalidDecompositionError(
                "edges not introduced exactly once each")
        # the three tree-decomposition axioms on the bag family
        parents = [-1] * len(self.kinds)
        for i, kids in enumerate(self.children):
            for c in kids:
                parents[c] = i
        TreeDecomposition([frozenset(b) for b in self.bags], parents).validate(graph)


def classify_graph(graph: ColoredGraph) -> StructureReport:
    """Most specific class tag plus the structural counters dispatch needs.

    Specificity order: path, cycle, star, caterpillar, tree, forest, general.
    A caterpillar's spine is the path left after deleting all degree-1
    vertices; bare paths report their full vertex order as the spine.
    """
    n = graph.n
    comps = connected_components(graph, range(n))
    num_components = len(comps)
    connected = num_components == 1
    fen = graph.m - n + num_components
    p = sum(1 for v in range(n) if graph.degree(v) >= 2)
    degrees = [graph.degree(v) for v in range(n)]

    def path_order() -> tuple[int, ...] | None:
        if not connected or graph.m != n - 1 or any(d > 2 for d in degrees):
            return None
        if n == 1:
            return (0,)
        ends = [v for v in range(n) if degrees[v] == 1]
        order = [min(ends)]
        prev = -1
        while len(order) < n:
            nxt = [u for u in graph.adjacency[order[-1]] if u != prev]
            prev = order[-1]
            order.append(nxt[0])
        return tuple(order)

    order = path_order()
    if order is not None:
        return StructureReport("path", connected, num_components, p, fen, order)
    if connected and n >= 3 and all(d == 2 for d in degrees):
        return StructureReport("cycle", connected, num_components, p, fen, None)
    is_forest = fen == 0
    if connected and is_forest and n >= 2 and max(degrees) == n - 1:
        return StructureReport("star", connected, num_components, p, fen, None)
    if connected and is_forest:
        inner = [v for v in range(n) if degrees[v] >= 2]
        inner_set = set(inner)
        inner_deg = {v: sum(1 for u in graph.adjacency[v] if u in inner_set) for v in inner}
        if inner and all(d <= 2 for d in inner_deg.values()):
            # the degree->=2 core of a connected tree is connected, so it is a path
            if len(inner) == 1:
                spine: tuple[int, ...] = (inner[0],)
            else:
                ends = [v for v in inner if inner_deg[v] <= 1]
                cur, prev = min(ends), -1
                chain = [cur]
                while len(chain) < len(inner):
                    nxt = [u for u in graph.adjacency[cur] if u in inner_set and u != prev]
                    prev, cur = cur, nxt[0]
                    chain.append(cur)
                spine = tuple(chain)
            return StructureReport("caterpillar", connected, num_components, p, fen, spine)
        return StructureReport("tree", connected, num_components, p, fen, None)
    if is_forest:
        return StructureReport("forest", connected, num_components, p, fen, None)
    return StructureReport("general", connected, num_components, p, fen, None)


def branch_decomposition(graph: ColoredGraph) -> BranchDecomposition:
    """Decompose a connected graph's edge set into branches.

    Walks from every vertex of degree != 2 along degree-two chains; a walk
    returning to its start becomes a cycle branch.  A graph that is itself a
    cycle yields a single cycle branch with vertex ``min(V)`` (vertex 0) as
    the designated endpoint.  Every edge ends up in exactly one branch.
    """
    n = graph.n
    if n == 0:
        raise ValueError("empty graph")
    if len(connected_components(graph, range(n))) != 1:
        raise ValueError("branch decomposition requires a connected graph")
    terminals = [v for v in range(n) if graph.degree(v) != 2]
    branches: list[Branch] = []
    used: set[tuple[int, int]] = set()

    def walk(start: int, first: int) -> Branch:
        path = [start, first]
        used.add((min(start, first), max(start, first)))
        prev, cur = start, first
        while cur != start and graph.degree(cur) == 2:
            nxt = [u for u in graph.adjacency[cur] if u != prev]
            if not nxt:  # cur has degree 1: dead end, cur is a terminal anyway
                break
            step = (min(cur, nxt[0]), max(cur, nxt[0]))
            if step in used:
                break
            used.add(step)
            path.append(nxt[0])
            prev, cur = cur, nxt[0]
        return Branch(tuple(path), is_cycle=path[0] == path[-1])

    if not terminals:
        # the whole (connected, all-degree-2) graph is a single cycle
        start = 0
        nxt = graph.adjacency[start][0]
        branches.append(walk(start, nxt))
    else:
        for t in terminals:
            for u in graph.adjacency[t]:
                if (min(t, u), max(t, u)) not in used:
                    branches.append(walk(t, u))
    endpoints = set()
    for b in branches:
        endpoints.add(b.vertices[0])
        endpoints.add(b.vertices[-1])
    covered = set()
    for b in branches:
        for a, c in zip(b.vertices, b.vertices[1:]):
            covered.add((min(a, c), max(a, c)))
    assert covered == set(graph.edges()), "branch walk failed to cover edge set"
    return BranchDecomposition(tuple(branches), frozenset(endpoints))


def feedback_edge_set(graph: ColoredGraph) -> set[tuple[int, int]]:
    """A minimum feedback edge set: the non-tree edges of a spanning forest."""
    parent = list(range(graph.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    fes: set[tuple[int, int]] = set()
    for u, v in graph.edges():
        ru, rv = find(u), find(v)
        if ru == rv:
            fes.add((u, v))
        else:
            parent[ru] = rv
    return fes


def minimum_vertex_cover(graph: ColoredGraph, budget_size: int) -> set[int]:
    """Exact minimum vertex cover via bounded branching on edges.

    Raises :class:`BudgetExceededError` if the minimum cover is larger than
    ``budget_size``.  Deterministic: branches on the smallest uncovered edge,
    lower endpoint first.
    """
    edges = list(graph.edges())

    def search(target: int) -> set[int] | None:
        def rec(cover: set[int], remaining: int) -> set[int] | None:
            uncovered = next(((u, v) for u, v in edges
                              if u not in cover and v not in cover), None)
            if uncovered is None:
                return set(cover)
            if remaining == 0:
                return None
            u, v = uncovered
            for pick in (u, v):
                cover.add(pick)
                found = rec(cover, remaining - 1)
                cover.discard(pick)
                if found is not None:
                    return found
            return None

        return rec(set(), target)

    for size in range(budget_size + 1):
        result = search(size)
        if result is not None:
            return result
    raise BudgetExceededError(
        f"vertex cover exceeds budget {budget_size}")


def _nicify_bag_chain(ntd: NiceTreeDecomposition, node: int, cur_bag: set[int],
                      target: set[int]) -> int:
    """Forget then introduce vertices one at a time to morph cur_bag into target."""
    for v in sorted(cur_bag - target):
        cur_bag.discard(v)
        node = ntd.add(FORGET, v, [node], tuple(sorted(cur_bag)))
    for v in sorted(target - cur_bag):
        cur_bag.add(v)
        node = ntd.add(INTRODUCE, v, [node], tuple(sorted(cur_bag)))
    return node


def _leaf_chain(ntd: NiceTreeDecomposition, bag: set[int]) -> int:
    """Build a chain introducing the vertices of a (non-empty) bag from a leaf."""
    verts = sorted(bag)
    node = ntd.add(LEAF, verts[0], [], (verts[0],))
    cur = {verts[0]}
    for v in verts[1:]:
        cur.add(v)
        node = ntd.add(INTRODUCE, v, [node], tuple(sorted(cur)))
    return node


def _forest_nice_td(graph: ColoredGraph) -> NiceTreeDecomposition:
    """Width-1 nice tree decomposition built directly for a forest."""
    ntd = NiceTreeDecomposition()
    comp_roots: list[int] = []
    for comp in connected_components(graph, range(graph.n)):
        root_v = comp[0]
        # iterative post-order over the tree component rooted at root_v
        order: list[tuple[int, int]] = []
        stack = [(root_v, -1)]
        while stack:
            v, par = stack.pop()
            order.append((v, par))
            for u in graph.adjacency[v]:
                if u != par:
                    stack.append((u, v))
        node_of: dict[int, int] = {}
        for v, par in reversed(order):
            kids = [u for u in graph.adjacency[v] if u != par]
            if not kids:
                node_of[v] = ntd.add(LEAF, v, [], (v,))
                continue
            chains = []
            for u in kids:
                c = node_of[u]
                bag = tuple(sorted((u, v)))
                c = ntd.add(INTRODUCE, v, [c], bag)
                c = ntd.add(INTRODUCE_EDGE, (min(u, v), max(u, v)), [c], bag)
                c = ntd.add(FORGET, u, [c], (v,))
                chains.append(c)
            node = chains[0]
            for c in chains[1:]:
                node = ntd.add(JOIN, None, [node, c], (v,))
            node_of[v] = node
        comp_roots.append(node_of[root_v])
    if len(comp_roots) == 1:
        return ntd
    tops = []
    for r in comp_roots:
        bag = set(ntd.bags[r])
        tops.append(_nicify_bag_chain(ntd, r, bag, set()))
    node = tops[0]
    for t in tops[1:]:
        node = ntd.add(JOIN, None, [node, t], ())
    return ntd


def nice_tree_decomposition(graph: ColoredGraph,
                            td: TreeDecomposition | None = None) -> NiceTreeDecomposition:
    """Turn a validated tree decomposition into a nice one of equal width.

    With ``td`` omitted the graph must be a forest (a width-1 decomposition
    is built directly).  Vertices of a bag are introduced before the bag's
    edges; forget nodes are emitted as soon as a vertex leaves.
    """
    if td is None:
        rep = classify_graph(graph)
        if rep.fen != 0:
            raise ValueError("graph is not a forest; supply a tree decomposition")
        ntd = _forest_nice_td(graph)
        ntd.validate(graph)
        return ntd
    td.validate(graph)
    root = next(i for i, p in enumerate(td.parents) if p == -1)
    kids: list[list[int]] = [[] for _ in td.bags]
    for i, p in enumerate(td.parents):
        if p != -1:
            kids[p].append(i)
    # assign every graph edge to the first node (post-order) whose bag holds it
    edge_at: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(td.bags))}
    unassigned = set(graph.edges())
    post: list[int] = []
    stack = [root]
    while stack:
        i = stack.pop()
        post.append(i)
        stack.extend(kids[i])
    for i in reversed(post):
        for e in sorted(unassigned):
            if e[0] in td.bags[i] and e[1] in td.bags[i]:
                edge_at[i].append(e)
        unassigned -= set(edge_at[i])
    assert not unassigned, "validated decomposition must cover every edge"

    ntd = NiceTreeDecomposition()

    def build(i: int) -> int:
        bag = set(td.bags[i])
        sub_nodes = []
        for c in kids[i]:
            node = build(c)
            node = _nicify_bag_chain(ntd, node, set(td.bags[c]), bag)
            sub_nodes.append(node)
        if not sub_nodes:
            if not bag:
                raise InvalidDecompositionError("leaf decomposition node with empty bag")
            node = _leaf_chain(ntd, bag)
        else:
            node = sub_nodes[0]
            for s in sub_nodes[1:]:
                node = ntd.add(JOIN, None, [node, s], tuple(sorted(bag)))
        for u, v in edge_at[i]:
            node = ntd.add(INTRODUCE_EDGE, (u, v), [node], tuple(sorted(bag)))
        return node

    import sys
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * len(td.bags) + 100))
    try:
        build(root)
    finally:
        sys.setrecursionlimit(old_limit)
    ntd.validate(graph)
    return ntd


def apex_tree_decomposition(graph: ColoredGraph, apex: set[int]) -> TreeDecomposition:
    """Tree decomposition from a forest decomposition of ``G - apex`` with the
    apex vertices added to every bag (width = forest width + |apex|).

    ``G - apex`` must be a forest.
    """
    rest = [v for v in range(graph.n) if v not in apex]
    rest_set = set(rest)
    bags: list[set[int]] = []
    parents: list[int] = []
    node_of: dict[int, int] = {}
    comp_roots = []
    for comp in connected_components(graph, rest):
        root_v = comp[0]
        stack = [(root_v, -1)]
        while stack:
            v, par = stack.pop()
            bag = {v} | set(apex)
            if par == -1:
                bags.append(bag)
                parents.append(-1)
                node_of[v] = len(bags) - 1
                comp_roots.append(node_of[v])
            else:
                bags.append(bag | {par})
                parents.append(node_of[par])
                node_of[v] = len(bags) - 1
            for u in graph.adjacency[v]:
                if u in rest_set and u != par:
                    stack.append((u, v))
    if not bags:
        bags = [set(apex)]
        parents = [-1]
        comp_roots = [0]
    # hang every later component root off the first root to get one tree
    for r in comp_roots[1:]:
        parents[r] = comp_roots[0]
    td = TreeDecomposition([frozenset(b) for b in bags], parents)
    td.validate(graph)
    return td
