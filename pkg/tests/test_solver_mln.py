import random
from math import prod

import pytest

from fcd.budget import Budget, BudgetExceededError
from fcd.classify import branch_decomposition, classify_graph
from fcd.core import ColoredGraph, Instance
from fcd.oracle import brute_force_solve
from fcd.solver_mln import set_partitions, solve_mln
from fcd.solvers_poly import solve_cycle, solve_path

from util import random_instance


def star_instance(center_color, leaf_colors, k, ell, num_colors=2):
    colors = [center_color] + list(leaf_colors)
    g = ColoredGraph.from_edges(len(colors), [(0, i) for i in range(1, len(colors))],
                                colors, num_colors)
    return Instance(g, k, ell)


def test_set_partitions_counts():
    # Stirling numbers of the second kind for n=4: 1, 7, 6, 1
    items = [0, 1, 2, 3]
    assert len(list(set_partitions(items, 1))) == 1
    assert len(list(set_partitions(items, 2))) == 7
    assert len(list(set_partitions(items, 3))) == 6
    assert len(list(set_partitions(items, 4))) == 1
    assert list(set_partitions(items, 5)) == []


def test_mln_examples():
    inst = star_instance(0, [1, 1, 0], 1, 0)
    bd = branch_decomposition(inst.graph)
    assert solve_mln(inst, bd) is True
    inst2 = star_instance(0, [1, 1, 0], 2, 0)
    assert solve_mln(inst2, bd) is False
    c4 = ColoredGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [0, 1, 0, 1], 2)
    inst3 = Instance(c4, 2, 0)
    assert solve_mln(inst3, branch_decomposition(c4)) is True
    assert solve_mln(inst3, branch_decomposition(c4)) == \
        solve_cycle(inst3, [0, 1, 2, 3])[0]


def test_mln_rejects_disconnected():
    g = ColoredGraph.from_edges(4, [(0, 1), (2, 3)], [0, 0, 1, 1], 2)
    with pytest.raises(ValueError):
        solve_mln(Instance(g, 2, 1), branch_decomposition(
            ColoredGraph.from_edges(2, [(0, 1)], [0, 0], 1)))


def test_mln_single_vertex():
    g = ColoredGraph.from_edges(1, [], [0], 2)
    bd_dummy = branch_decomposition(ColoredGraph.from_edges(2, [(0, 1)], [0, 0], 1))
    assert solve_mln(Instance(g, 1, 1), bd_dummy) is True
    assert solve_mln(Instance(g, 1, 0), bd_dummy) is False


def test_mln_matches_path_and_cycle_solvers():
    rng = random.Random(89)
    for _ in range(100):
        inst = random_instance(rng, "path", (2, 8))
        bd = branch_decomposition(inst.graph)
        order = classify_graph(inst.graph).spine
        assert solve_mln(inst, bd) == solve_path(inst, order)[0]
    for _ in range(100):
        inst = random_instance(rng, "cycle", (3, 8))
        bd = branch_decomposition(inst.graph)
        order = _cycle_order(inst.graph)
        assert solve_mln(inst, bd) == solve_cycle(inst, order)[0]


def test_mln_matches_oracle_on_small_branchy_graphs():
    rng = random.Random(97)
    checked = 0
    while checked < 150:
        n = rng.randint(2, 9)
        inst = random_instance(rng, "general", (n, n), param=0.33)
        rep = classify_graph(inst.graph)
        if not rep.is_connected:
            continue
        bd = branch_decomposition(inst.graph)
        if len(bd.branches) > 5:
            continue
        checked += 1
        assert solve_mln(inst, bd) == brute_force_solve(inst)[0], inst


def test_mln_guess_count_bound():
    # guesses <= |X| * Bell(|X|) * prod l_B^2
    bell = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203}
    rng = random.Random(101)
    checked = 0
    while checked < 40:
        n = rng.randint(3, 9)
        inst = random_instance(rng, "general", (n, n), param=0.3)
        rep = classify_graph(inst.graph)
        if not rep.is_connected or inst.graph.n < 2:
            continue
        bd = branch_decomposition(inst.graph)
        x = len(bd.endpoints)
        if x > 6:
            continue
        checked += 1
        budget = Budget(10 ** 9)
        solve_mln(inst, bd, budget)
        bound = x * bell[x] * prod(b.length ** 2 for b in bd.branches)
        assert budget.used <= bound, (budget.used, bound)


def test_mln_budget_exceeded_is_distinct():
    inst = random_instance(random.Random(3), "general", (8, 8), param=0.5)
    rep = classify_graph(inst.graph)
    if not rep.is_connected:
        pytest.skip("sample disconnected")
    bd = branch_decomposition(inst.graph)
    with pytest.raises(BudgetExceededError):
        solve_mln(inst, bd, Budget(1))


def _cycle_order(g):
    order = [0, g.adjacency[0][0]]
    while len(order) < g.n:
        order.append([u for u in g.adjacency[order[-1]] if u != order[-2]][0])
    return order
