"""Parameterized solvers: cut enumeration, vertex-cover guessing, degree-two.

* ``solve_fen_k``: a solution cuts at most fen+k-1 edges, so enumerate all
  small edge subsets and inspect the resulting components.
* ``solve_vc``: guess how a vertex cover spreads over districts, connector
  vertices, each district's two leading colors and their counts; the
  remaining distribution of independent-set vertices reduces to maximum
  weight bipartite matching over capacity slots.
* ``solve_vc_colors``: same guessing skeleton, but independent-set vertices
  collapse into (color, neighborhood) types and the distribution becomes an
  integer feasibility system, decided here by bounded exhaustive search with
  constraint propagation (correctness kept; no FPT guarantee claimed).
* ``solve_degree_two``: partition the vertices of degree at least two,
  close each block with its private leaves, and read off per-block district
  count intervals from the star characterization.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Sequence

from .budget import Budget, ensure_budget
from .core import (ColoredGraph, Districting, Instance, color_vector,
                   connected_components, is_connected_subset, mov)
from .solver_mln import set_partitions
from .solvers_poly import solve_disjoint_union, star_interval_from_counts


def solve_fen_k(instance: Instance, fes: set[tuple[int, int]],
                budget: Budget | None = None) -> tuple[bool, Districting | None]:
    """Enumerate edge cuts of size at most fen+k-1; accept exactly-k fair splits."""
    g = instance.graph
    budget = ensure_budget(budget)
    edges = list(g.edges())
    edge_set = set(edges)
    for e in fes:
        key = (min(e), max(e))
        if key not in edge_set:
            raise ValueError(f"feedback edge {e} not in the graph")
    if _has_cycle(g, set((min(e), max(e)) for e in fes)):
        raise ValueError("removing the given edge set does not yield a forest")
    comps0 = connected_components(g, range(g.n))
    fen = g.m - g.n + len(comps0)
    k, ell = instance.k, instance.ell
    max_cut = min(fen + k - 1, g.m)
    for size in range(max_cut + 1):
        for cut in combinations(edges, size):
            budget.tick()
            parts = _components_without(g, set(cut))
            if len(parts) != k:
                continue
            if all(mov(color_vector(g, part)) <= ell for part in parts):
                return True, Districting.from_sets(parts, g.n).canonical()
    return False, None


def _has_cycle(g: ColoredGraph, removed: set[tuple[int, int]]) -> bool:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        if (u, v) in removed:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            return True
        parent[ru] = rv
    return False


def _components_without(g: ColoredGraph, cut: set[tuple[int, int]]) -> list[list[int]]:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        if (u, v) in cut:
            continue
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups, key=lambda r: groups[r][0])]


def max_weight_bipartite_matching(
        left_size: int, right_size: int,
        weighted_edges: Sequence[tuple[int, int, int]],
) -> tuple[list[tuple[int, int]], int]:
    """Maximum-weight matching in a bipartite graph with positive weights.

    Runs the Hungarian potentials algorithm on a zero-padded square matrix;
    unmatched vertices ride on zero-weight pseudo-edges, so a maximum-weight
    perfect assignment of the padded matrix restricts to a maximum-weight
    matching of the given edges.  O(max(sizes)^3).
    """
    for l, r, w in weighted_edges:
        if not (0 <= l < left_size and 0 <= r < right_size):
            raise ValueError(f"edge ({l},{r}) out of range")
        if w <= 0:
            raise ValueError("weights must be positive integers")
    n = max(left_size, right_size)
    if n == 0:
        return [], 0
    weight = [[0] * n for _ in range(n)]
    for l, r, w in weighted_edges:
        weight[l][r] = max(weight[l][r], w)
    wmax = max(max(row) for row in weight)
    inf = float("inf")
    # minimize cost = wmax - weight over perfect assignments (1-based arrays)
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta, j1 = inf, -1
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = (wmax - weight[i0 - 1][j - 1]) - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    matching = []
    total = 0
    for j in range(1, n + 1):
        l, r = p[j] - 1, j - 1
        if l < left_size and r < right_size and weight[l][r] > 0:
            matching.append((l, r))
            total += weight[l][r]
    return sorted(matching), total


def _connector_sets(g: ColoredGraph, block: frozenset[int],
                    candidates: Sequence[int], max_extra: int) -> list[frozenset[int]]:
    """Connector sets J (from ``candidates``) with G[block | J] connected.

    Grows J one vertex at a time, only ever adding a vertex that merges at
    least two current components; by the island-merging argument this loses
    no feasible guess while pruning the subset lattice massively.
    """
    results: set[frozenset[int]] = set()
    seen: set[frozenset[int]] = set()

    def rec(j_set: frozenset[int]) -> None:
        if j_set in seen:
            return
        seen.add(j_set)
        comps = connected_components(g, block | j_set)
        if len(comps) == 1:
            results.add(j_set)
            return
        if len(j_set) >= max_extra:
            return
        comp_id = {}
        for idx, comp in enumerate(comps):
            for w in comp:
                comp_id[w] = idx
        for cand in candidates:
            if cand in j_set:
                continue
            touched = {comp_id[w] for w in g.adjacency[cand] if w in comp_id}
            if len(touched) >= 2:
                rec(j_set | {cand})

    rec(frozenset())
    return sorted(results, key=sorted)


def _color_pairs(num_colors: int) -> list[tuple[int, int]]:
    if num_colors == 1:
        return [(0, 0)]
    return [(a, b) for a in range(num_colors) for b in range(num_colors) if a != b]


def solve_vc(instance: Instance, cover: set[int],
             budget: Budget | None = None) -> bool:
    """Decide the instance by vertex-cover guessing plus weighted matching."""
    g = instance.graph
    _check_cover(g, cover)
    budget = ensure_budget(budget)
    k, ell, C = instance.k, instance.ell, g.num_colors
    S = sorted(cover)
    I = [v for v in range(g.n) if v not in cover]
    if not S:
        # edgeless graph: only the all-singletons districting exists
        return k == g.n and ell >= 1
    if ell == 0:
        kprimes = [k] if k <= len(S) else []
    else:
        kprimes = list(range(max(1, k - len(I)), min(k, len(S)) + 1))

    for k_prime in kprimes:
        for partition in set_partitions(S, k_prime):
            blocks = [frozenset(b) for b in partition]
            for js in _disjoint_connectors(g, blocks, I):
                budget.tick()
                if _vc_guess_feasible(instance, blocks, js, I, k_prime, budget):
                    return True
    return False


def _check_cover(g: ColoredGraph, cover: set[int]) -> None:
    for u, v in g.edges():
        if u not in cover and v not in cover:
            raise ValueError(f"not a vertex cover: edge ({u},{v}) uncovered")


def _disjoint_connectors(g: ColoredGraph, blocks: list[frozenset[int]],
                         I: Sequence[int]) -> Iterator[list[frozenset[int]]]:
    """All combos of pairwise-disjoint connector sets, one per block."""

    chosen: list[frozenset[int]] = []

    def rec(i: int, used: frozenset[int]) -> Iterator[list[frozenset[int]]]:
        if i == len(blocks):
            yield list(chosen)
            return
        candidates = [v for v in I if v not in used]
        for j_set in _connector_sets(g, blocks[i], candidates, len(blocks[i]) - 1):
            chosen.append(j_set)
            yield from rec(i + 1, used | j_set)
            chosen.pop()

    yield from rec(0, frozenset())


def _vc_guess_feasible(instance: Instance, blocks: list[frozenset[int]],
                       js: list[frozenset[int]], I: Sequence[int],
                       k_prime: int, budget: Budget) -> bool:
    g, k, ell, C = instance.graph, instance.k, instance.ell, instance.graph.num_colors
    used = frozenset().union(*js) if js else frozenset()
    i_rest = [v for v in I if v not in used]
    base = [color_vector(g, blocks[i] | js[i]) for i in range(k_prime)]
    # per district, which leftover vertices can join it (adjacency to the block)
    adj = [[v for v in i_rest if any(w in blocks[i] for w in g.adjacency[v])]
           for i in range(k_prime)]
    avail = [[0] * C for _ in range(k_prime)]
    for i in range(k_prime):
        for v in adj[i]:
            avail[i][g.colors[v]] += 1

    pair_options = []
    for i in range(k_prime):
        options = []
        for c1, c2 in _color_pairs(C):
            z1_lo = max(base[i][c1], 1)
            z1_hi = base[i][c1] + avail[i][c1]
            for z1 in range(z1_lo, z1_hi + 1):
                if C == 1:
                    # one color: the district MOV is its size
                    if z1 > ell:
                        continue
                    options.append((c1, c2, z1, z1))
                    continue
                z2_lo = max(z1 - ell, base[i][c2])
                z2_hi = min(z1, base[i][c2] + avail[i][c2])
                for z2 in range(z2_lo, z2_hi + 1):
                    if any(base[i][c] > z2 for c in range(C) if c != c1):
                        continue
                    options.append((c1, c2, z1, z2))
        if not options:
            return False
        pair_options.append(options)

    idx = [0] * k_prime
    while True:
        budget.tick()
        choice = [pair_options[i][idx[i]] for i in range(k_prime)]
        if _vc_matching_accepts(g, blocks, base, adj, i_rest, choice, k, k_prime):
            return True
        pos = 0
        while pos < k_prime:
            idx[pos] += 1
            if idx[pos] < len(pair_options[pos]):
                break
            idx[pos] = 0
            pos += 1
        if pos == k_prime:
            return False


def _vc_matching_accepts(g: ColoredGraph, blocks, base, adj, i_rest,
                         choice, k: int, k_prime: int) -> bool:
    """Build the slot graph of the current guess and test the weight target."""
    left_index = {v: idx for idx, v in enumerate(i_rest)}
    edges = []
    right_size = 0
    target = len(i_rest) + (k - k_prime)
    for i in range(k_prime):
        c1, c2, z1, z2 = choice[i]
        top_slots = {c1: z1 - base[i][c1]}
        if c2 != c1:
            top_slots[c2] = z2 - base[i][c2]
        adj_by_color: dict[int, list[int]] = {}
        for v in adj[i]:
            adj_by_color.setdefault(g.colors[v], []).append(v)
        for c, slots in top_slots.items():
            target += slots
            for _ in range(slots):
                for v in adj_by_color.get(c, ()):
                    edges.append((left_index[v], right_size, 2))
                right_size += 1
        for c in range(g.num_colors):
            if c in top_slots:
                continue
            slots = min(z2 - base[i][c], len(adj_by_color.get(c, ())))
            for _ in range(max(0, slots)):
                for v in adj_by_color.get(c, ()):
                    edges.append((left_index[v], right_size, 1))
                right_size += 1
    for _ in range(k - k_prime):
        for idx in range(len(i_rest)):
            edges.append((idx, right_size, 2))
        right_size += 1
    _, total = max_weight_bipartite_matching(len(i_rest), right_size, edges)
    return total >= target


def _types(g: ColoredGraph, I: Sequence[int]) -> dict[tuple[int, frozenset[int]], list[int]]:
    """Group independent-set vertices by (color, neighborhood-in-cover)."""
    groups: dict[tuple[int, frozenset[int]], list[int]] = {}
    for v in I:
        key = (g.colors[v], frozenset(g.adjacency[v]))
        groups.setdefault(key, []).append(v)
    return groups


def solve_vc_colors(instance: Instance, cover: set[int],
                    budget: Budget | None = None) -> bool:
    """Decide via type classes and a bounded integer-feasibility search.

    The integer system of each guess is solved by depth-first search over
    the per-type district distributions with running-count propagation, not
    by an FPT integer-programming routine; answers are exact either way.
    """
    g = instance.graph
    _check_cover(g, cover)
    budget = ensure_budget(budget)
    k, ell, C = instance.k, instance.ell, g.num_colors
    S = sorted(cover)
    I = [v for v in range(g.n) if v not in cover]
    if not S:
        # edgeless graph: only the all-singletons districting exists
        return k == g.n and ell >= 1
    type_groups = _types(g, I)
    type_list = sorted(type_groups, key=lambda t: (t[0], sorted(t[1])))
    n_t = {key: len(type_groups[key]) for key in type_list}
    if ell == 0:
        kprimes = [k] if k <= len(S) else []
    else:
        kprimes = list(range(max(1, k - len(I)), min(k, len(S)) + 1))

    for k_prime in kprimes:
        for partition in set_partitions(S, k_prime):
            blocks = [frozenset(b) for b in partition]
            for tsets in _disjoint_type_connectors(g, blocks, type_list, n_t):
                for pairs in _pair_product(C, k_prime):
                    budget.tick()
                    if _ilp_search(g, k, ell, blocks, tsets, pairs,
                                   type_list, n_t, k_prime, budget):
                        return True
    return False


def _disjoint_type_connectors(g, blocks, type_list, n_t):
    """Per-block connector type sets; multiplicity stays within type supply.

    Same island-merging growth as :func:`_connector_sets`, over types: only
    a type whose neighborhood touches at least two current components may be
    added.  Same-type vertices are twins, so checking one representative per
    chosen type suffices.
    """

    def connector_type_sets(block: frozenset[int], used: dict) -> list[frozenset]:
        results: set[frozenset] = set()
        seen: set[frozenset] = set()

        def rec(chosen: frozenset) -> None:
            if chosen in seen:
                return
            seen.add(chosen)
            # one phantom vertex per chosen type, adjacent to the type's hood
            comps = connected_components(g, block)
            merged = _merge_components(comps, [nbrs for (_, nbrs) in chosen])
            if len(merged) == 1:
                results.add(chosen)
                return
            if len(chosen) >= len(block) - 1:
                return
            comp_id = {}
            for idx, comp in enumerate(merged):
                for w in comp:
                    comp_id[w] = idx
            for t in type_list:
                if t in chosen or used.get(t, 0) + 1 > n_t[t]:
                    continue
                _, nbrs = t
                touched = {comp_id[w] for w in nbrs if w in comp_id}
                if len(touched) >= 2:
                    rec(chosen | {t})

        rec(frozenset())
        return sorted(results, key=lambda s: sorted((c, sorted(x)) for c, x in s))

    chosen: list[frozenset] = []

    def rec(i: int, used: dict) -> Iterator[list[frozenset]]:
        if i == len(blocks):
            yield list(chosen)
            return
        for tset in connector_type_sets(blocks[i], used):
            updated = dict(used)
            for t in tset:
                updated[t] = updated.get(t, 0) + 1
            chosen.append(tset)
            yield from rec(i + 1, updated)
            chosen.pop()

    yield from rec(0, {})


def _merge_components(comps: list[list[int]],
                      hoods: list[frozenset[int]]) -> list[set[int]]:
    """Union the components that any one neighborhood touches together."""
    sets = [set(c) for c in comps]
    for nbrs in hoods:
        touched = [s for s in sets if s & nbrs]
        if len(touched) > 1:
            merged = set().union(*touched)
            sets = [s for s in sets if s not in touched]
            sets.append(merged)
    return sets


def _pair_product(C: int, k_prime: int) -> Iterator[list[tuple[int, int]]]:
    options = _color_pairs(C)
    idx = [0] * k_prime
    while True:
        yield [options[i] for i in idx]
        pos = 0
        while pos < k_prime:
            idx[pos] += 1
            if idx[pos] < len(options):
                break
            idx[pos] = 0
            pos += 1
        if pos == k_prime:
            return


def _ilp_search(g, k, ell, blocks, tsets, pairs, type_list, n_t,
                k_prime: int, budget: Budget) -> bool:
    """DFS over type distributions x[i,T] with running-count pruning.

    Counts only ever grow along a branch, so a branch dies as soon as a
    grown count exceeds a static upper bound of the quantity that must end
    up at least as large (the leading or second color's best total).
    """
    C = g.num_colors
    totals = [list(color_vector(g, b)) for b in blocks]
    adj_ok = [[bool(nbrs & blocks[i]) for (_, nbrs) in type_list]
              for i in range(k_prime)]
    required = [[(type_list[t] in tsets[i]) for t in range(len(type_list))]
                for i in range(k_prime)]
    remaining_after = [0] * (len(type_list) + 1)
    for t in range(len(type_list) - 1, -1, -1):
        remaining_after[t] = remaining_after[t + 1] + n_t[type_list[t]]
    singles_needed = k - k_prime
    # maxfinal[i][c]: largest count color c could ever reach in district i
    maxfinal = [list(totals[i]) for i in range(k_prime)]
    for i in range(k_prime):
        for t, key in enumerate(type_list):
            if adj_ok[i][t]:
                maxfinal[i][key[0]] += n_t[key]

    def alive(i: int) -> bool:
        c1, c2 = pairs[i]
        if C == 1:
            return totals[i][0] <= ell
        if totals[i][c1] > maxfinal[i][c2] + ell:
            return False
        if totals[i][c2] > maxfinal[i][c1]:
            return False
        return all(totals[i][c] <= maxfinal[i][c2]
                   for c in range(C) if c not in (c1, c2))

    def fair_final(i: int) -> bool:
        c1, c2 = pairs[i]
        if C == 1:
            return totals[i][0] <= ell
        if not totals[i][c2] <= totals[i][c1] <= totals[i][c2] + ell:
            return False
        return all(totals[i][c] <= totals[i][c2] for c in range(C) if c != c1)

    def rec(t: int, leftover: int) -> bool:
        budget.tick()
        if leftover > singles_needed:
            return False
        if leftover + remaining_after[t] < singles_needed:
            return False
        if t == len(type_list):
            return leftover == singles_needed and all(
                fair_final(i) for i in range(k_prime))
        key = type_list[t]
        color = key[0]
        supply = n_t[key]
        eligible = [i for i in range(k_prime) if adj_ok[i][t]]
        if any(required[i][t] and not adj_ok[i][t] for i in range(k_prime)):
            return False
        if not eligible:
            return rec(t + 1, leftover + supply)

        def distribute(pos: int, left: int) -> bool:
            if pos == len(eligible):
                return rec(t + 1, leftover + left)
            i = eligible[pos]
            low = 1 if required[i][t] else 0
            for x in range(low, left + 1):
                totals[i][color] += x
                ok = x == 0 or alive(i)
                if ok and distribute(pos + 1, left - x):
                    totals[i][color] -= x
                    return True
                totals[i][color] -= x
            return False

        return distribute(0, supply)

    return rec(0, 0)


def solve_degree_two(instance: Instance, budget: Budget | None = None) -> bool:
    """Decide by partitioning the degree->=2 vertices of each component.

    Components of at most two vertices are enumerated directly; larger ones
    get their degree->=2 sets partitioned into connected blocks, each block
    scored by the star characterization with its private leaves, and the
    per-component district counts recombine by the disjoint-union DP.
    """
    g = instance.graph
    budget = ensure_budget(budget)
    k, ell = instance.k, instance.ell
    tables: list[set[int]] = []
    for comp in connected_components(g, range(g.n)):
        feasible: set[int] = set()
        if len(comp) == 1:
            if mov(color_vector(g, comp)) <= ell:
                feasible.add(1)
        elif len(comp) == 2:
            if mov(color_vector(g, comp)) <= ell:
                feasible.add(1)
            if all(mov(color_vector(g, [v])) <= ell for v in comp):
                feasible.add(2)
        else:
            xs = [v for v in comp if g.degree(v) >= 2]
            leaves_by_nbr: dict[int, list[int]] = {x: [] for x in xs}
            for v in comp:
                if g.degree(v) == 1:
                    leaves_by_nbr[g.adjacency[v][0]].append(v)
            for k_prime in range(1, min(k, len(xs)) + 1):
                for partition in set_partitions(xs, k_prime):
                    budget.tick()
                    lo_sum, hi_sum = 0, 0
                    ok = True
                    for block in partition:
                        if not is_connected_subset(g, block):
                            ok = False
                            break
                        ys = [v for x in block for v in leaves_by_nbr[x]]
                        iv = star_interval_from_counts(
                            color_vector(g, block), color_vector(g, ys), ell)
                        if not iv.feasible:
                            ok = False
                            break
                        lo_sum += iv.lo
                        hi_sum += iv.hi
                    if ok:
                        for t in range(lo_sum, min(hi_sum, k) + 1):
                            feasible.add(t)
        if not feasible:
            return False
        tables.append(feasible)
    return solve_disjoint_union(tables, k)
