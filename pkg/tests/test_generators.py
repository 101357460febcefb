import random

import pytest

from fcd.classify import classify_graph, minimum_vertex_cover
from fcd.core import color_vector, connected_components, verify_districting
from fcd.generators import (GridTilingInstance, NAE3SatInstance,
                            gen_random_instance, reduce_grid_tiling,
                            reduce_nae3sat, reduce_pbcp)
from fcd.oracle import brute_force_solve

TILES_A = ((1, 1), (1, 2), (2, 1))  # row sum 4, column sum 4


def grid_instance(t, tiles=TILES_A, m=2, n=3):
    grid = tuple(tuple(tiles for _ in range(t)) for _ in range(t))
    return GridTilingInstance(t, m, n, grid)


# ------------------------------------------------------------ random classes

def test_gen_deterministic_per_seed():
    a = gen_random_instance("path", 6, 2, 2, 0, 42)
    b = gen_random_instance("path", 6, 2, 2, 0, 42)
    assert a == b
    c = gen_random_instance("path", 6, 2, 2, 0, 43)
    assert a != c


@pytest.mark.parametrize("tag,n", [("path", 6), ("cycle", 7), ("star", 5),
                                   ("caterpillar", 7), ("tree", 9)])
def test_gen_matches_requested_class(tag, n):
    for seed in range(25):
        inst = gen_random_instance(tag, n, 3, 2, 1, seed)
        assert classify_graph(inst.graph).class_tag == tag


def test_gen_unicyclic_and_bounded_vc():
    for seed in range(25):
        inst = gen_random_instance("unicyclic", 8, 2, 2, 1, seed)
        rep = classify_graph(inst.graph)
        assert rep.is_connected and rep.fen == 1
        inst2 = gen_random_instance("bounded_vc", 8, 2, 2, 1, seed, 3)
        minimum_vertex_cover(inst2.graph, 3)  # must not raise


def test_gen_infeasible_requests_rejected():
    with pytest.raises(ValueError):
        gen_random_instance("cycle", 2, 2, 1, 0, 0)
    with pytest.raises(ValueError):
        gen_random_instance("star", 3, 2, 1, 0, 0)
    with pytest.raises(ValueError):
        gen_random_instance("nonsense", 5, 2, 1, 0, 0)


# -------------------------------------------------------------- grid tiling

def test_grid_tiling_validation():
    with pytest.raises(ValueError):
        GridTilingInstance(1, 2, 2, ((((1, 1), (1, 2)),),))  # n must exceed 2
    with pytest.raises(ValueError):
        grid = ((TILES_A, TILES_A), (TILES_A, ((1, 1), (1, 2), (2, 2))))
        GridTilingInstance(2, 2, 3, grid)  # first-entry sums differ across sets
    with pytest.raises(ValueError):
        GridTilingInstance(1, 2, 3, ((((1, 1), (1, 2), (3, 1)),),))  # outside [1,m]^2
    with pytest.raises(ValueError):
        GridTilingInstance(1, 2, 3, ((((1, 1), (1, 2), (1, 1)),),))  # repeated pair


def test_grid_tiling_t1_witness_verifies():
    red = reduce_grid_tiling(grid_instance(1))
    assert red.instance.k == 2 and red.instance.ell == 0
    for tile in TILES_A:
        w = red.witness({(1, 1): tile})
        assert verify_districting(red.instance, w).ok, tile


def test_grid_tiling_t2_witness_verifies():
    red = reduce_grid_tiling(grid_instance(2))
    sel = {(i, j): (1, 1) for i in range(1, 3) for j in range(1, 3)}
    w = red.witness(sel)
    assert red.instance.k == 5
    assert verify_districting(red.instance, w).ok


def test_grid_tiling_invalid_selection_fails_verification():
    red = reduce_grid_tiling(grid_instance(2))
    sel = {(i, j): (1, 1) for i in range(1, 3) for j in range(1, 3)}
    sel[(1, 1)] = (1, 2)   # y no longer matches the column neighbor
    sel[(2, 1)] = (2, 1)   # and x no longer matches the row neighbor
    w = red.witness(sel)
    assert not verify_districting(red.instance, w).ok


def test_grid_tiling_witness_rejects_foreign_tile():
    red = reduce_grid_tiling(grid_instance(1))
    with pytest.raises(ValueError):
        red.witness({(1, 1): (2, 2)})
    with pytest.raises(ValueError):
        red.witness({})


def test_grid_tiling_count_identities():
    # total of every coordinate color obeys the exact closed form
    for t in (1, 2):
        red = reduce_grid_tiling(grid_instance(t))
        g = red.instance.graph
        cv = color_vector(g, range(g.n))
        n, Z = 3, red.big_z
        for i in range(1, t + 1):
            for j in range(1, t + 1):
                f_ij = i * t + j
                g_ij = t * t + t + i * t + j
                assert cv[red.d_color(i, j)] == n * Z // (n - 1) - 2 * n * f_ij
                assert cv[red.b_color(i, j)] == n * Z // (n - 1) - 2 * n * g_ij
        # center-color total: one center per star plus the hub
        assert cv[2] == n * t * t + 1 <= Z
        # dummy colors: exactly Z each
        assert cv[0] == Z and cv[1] == Z


def test_grid_tiling_star_fairness_by_construction():
    # each star on its own is exactly balanced (margin zero)
    for t in (1, 2):
        red = reduce_grid_tiling(grid_instance(t))
        g = red.instance.graph
        from fcd.core import mov
        for (i, j, x, y), (lo, hi) in red.star_members.items():
            assert mov(color_vector(g, range(lo, hi))) == 0


def test_grid_tiling_c_group_equals_paper_form_for_t2():
    # for t >= 2 the tie group size equals the two-term maximum directly
    red = reduce_grid_tiling(grid_instance(2))
    g = red.instance.graph
    base = 4 * 2 * red.big_w
    for (i, j, x, y), (lo, hi) in red.star_members.items():
        f_ij = i * 2 + j
        g_ij = 6 + i * 2 + j
        expected = max(base + red.big_w * x - f_ij, base + red.big_w * y - g_ij)
        members = color_vector(g, range(lo, hi))
        assert members[red.c_color(i, j)] == expected


# ------------------------------------------------------------------ nae3sat

def test_nae_validation():
    with pytest.raises(ValueError):
        NAE3SatInstance(3, ((1, 1, 2),))
    with pytest.raises(ValueError):
        NAE3SatInstance(2, ((1, 2, 3),))
    NAE3SatInstance(3, ((1, -1, 2),))  # complementary literals are distinct


def test_nae_witness_verifies():
    sat = NAE3SatInstance(3, ((1, 2, -3),))
    red = reduce_nae3sat(sat)
    assert red.instance.k == 2 and red.instance.ell == 0
    w = red.witness([True, False, False])
    assert verify_districting(red.instance, w).ok


def test_nae_non_nae_assignment_fails():
    sat = NAE3SatInstance(3, ((1, 2, -3),))
    red = reduce_nae3sat(sat)
    w = red.witness([True, True, False])  # all three literals on one side
    assert not verify_districting(red.instance, w).ok


def test_nae_multiple_clauses_witnesses():
    rng = random.Random(171)
    for _ in range(8):
        nvars = rng.randint(3, 4)
        clauses = []
        for _ in range(rng.randint(1, 3)):
            lits = rng.sample(range(1, nvars + 1), 3)
            clause = tuple(l if rng.random() < 0.5 else -l for l in lits)
            clauses.append(clause)
        sat = NAE3SatInstance(nvars, tuple(clauses))
        red = reduce_nae3sat(sat)
        # scan assignments for an NAE-satisfying one; its witness must verify
        for bits in range(2 ** nvars):
            assign = [(bits >> i) & 1 == 1 for i in range(nvars)]
            ok = all(
                any((lit > 0) == assign[abs(lit) - 1] for lit in cl) and
                any((lit > 0) != assign[abs(lit) - 1] for lit in cl)
                for cl in clauses)
            if ok:
                w = red.witness(assign)
                assert verify_districting(red.instance, w).ok
                break


def test_nae_deleting_first_central_leaves_forest():
    sat = NAE3SatInstance(4, ((1, 2, -3), (2, 3, 4), (-1, -2, 4)))
    red = reduce_nae3sat(sat)
    g = red.instance.graph
    rest = [v for v in range(g.n) if v != 0]
    comps = connected_components(g, rest)
    edges_inside = sum(1 for (u, v) in g.edges() if u != 0 and v != 0)
    assert edges_inside == len(rest) - len(comps)


# --------------------------------------------------------------------- pbcp

def test_pbcp_examples():
    inst = reduce_pbcp(4, [(0, 1), (1, 2), (2, 3)], 1, 2)
    assert inst.k == 2 and inst.ell == 0 and inst.graph.n == 8
    assert brute_force_solve(inst)[0] is True
    inst2 = reduce_pbcp(4, [(0, 1), (1, 2), (2, 3)], 0, 1)
    assert brute_force_solve(inst2)[0] is False
    with pytest.raises(ValueError):
        reduce_pbcp(3, [(0, 1), (1, 2)], 0, 2)
    with pytest.raises(ValueError):
        reduce_pbcp(4, [(0, 1)], 1, 1)


def test_pbcp_matches_balanced_partition_semantics():
    # scanning all anchor pairs decides the balanced-partition question
    rng = random.Random(173)
    for _ in range(10):
        n = 6
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.45]
        try:
            from fcd.core import ColoredGraph
            g = ColoredGraph.from_edges(n, edges, [0] * n, 1)
        except ValueError:
            continue
        if not classify_graph(g).is_connected:
            continue
        from util import all_set_partitions, subset_is_connected
        balanced = any(
            len(blocks[0]) == n // 2 and
            all(subset_is_connected(g, b) for b in blocks)
            for blocks in all_set_partitions(list(range(n)), 2))
        reduced = any(
            brute_force_solve(reduce_pbcp(n, edges, v, v2), cap=2 * n)[0]
            for v in range(n) for v2 in range(n) if v != v2)
        assert reduced == balanced
