"""Dynamic program over a nice tree decomposition (states scale with tw and |C|).

Each table entry at a decomposition node describes a way of partitioning the
vertices seen so far into *pieces*: connected chunks that either still touch
the current bag or are already completed fair districts.  A state holds

* ``pb``   - partition of the bag into district traces,
* ``ppb``  - refinement of ``pb``: traces of the connected pieces,
* ``cc``   - per ``pb``-block, the color counts gathered by its district so far,
* ``kp``   - the number of completed (bag-disjoint, fair) districts.

Only reachable TRUE states are stored (tables are sets), which keeps the
state space tied to what the instance actually admits.  The root accepts iff
some state has every trace fully connected (``ppb == pb``), fair color
counts, and ``kp == k - |pb|``.

Tables are filled strictly bottom-up and are write-once; sibling subtrees
could be processed concurrently without sharing mutable state.
"""

from __future__ import annotations

from itertools import product

from .budget import Budget, BudgetExceededError
from .classify import (FORGET, INTRODUCE, INTRODUCE_EDGE, JOIN, LEAF,
                       NiceTreeDecomposition)
from .core import Instance, mov

DEFAULT_STATE_CAP = 10_000_000

# A state is (pb, ppb, cc, kp); pb and ppb are restricted-growth strings over
# the sorted bag, cc is a tuple of color vectors indexed by pb block id.


def _canon(bag: tuple[int, ...], pb_of: dict[int, int], ppb_of: dict[int, int],
           cc_of: dict[int, tuple[int, ...]], kp: int):
    """Canonicalize block labels to first-occurrence order along the sorted bag."""
    pb_map: dict[int, int] = {}
    ppb_map: dict[int, int] = {}
    pb_rgs = []
    ppb_rgs = []
    for v in bag:
        b = pb_of[v]
        if b not in pb_map:
            pb_map[b] = len(pb_map)
        pb_rgs.append(pb_map[b])
        d = ppb_of[v]
        if d not in ppb_map:
            ppb_map[d] = len(ppb_map)
        ppb_rgs.append(ppb_map[d])
    cc = [()] * len(pb_map)
    for old, new in pb_map.items():
        cc[new] = cc_of[old]
    return tuple(pb_rgs), tuple(ppb_rgs), tuple(cc), kp


def _decode(bag: tuple[int, ...], state) -> tuple[dict[int, int], dict[int, int],
                                                  dict[int, tuple[int, ...]], int]:
    pb_rgs, ppb_rgs, cc, kp = state
    pb_of = {v: pb_rgs[i] for i, v in enumerate(bag)}
    ppb_of = {v: ppb_rgs[i] for i, v in enumerate(bag)}
    cc_of = {b: cc[b] for b in range(len(cc))}
    return pb_of, ppb_of, cc_of, kp


def solve_treewidth(instance: Instance, ntd: NiceTreeDecomposition,
                    budget: Budget | None = None) -> bool:
    """Decide the instance with the nice-decomposition dynamic program.

    Raises :class:`BudgetExceededError` once more than the state cap of
    states have been stored: undecidable at this size, distinctly not a NO.
    """
    g = instance.graph
    ntd.validate(g)
    k, ell, C = instance.k, instance.ell, g.num_colors
    if budget is None:
        budget = Budget(DEFAULT_STATE_CAP)

    def unit(v: int) -> tuple[int, ...]:
        vec = [0] * C
        vec[g.colors[v]] = 1
        return tuple(vec)

    tables: dict[int, set] = {}

    def store(table: set, state) -> None:
        if state not in table:
            budget.tick()
            table.add(state)

    for x in range(len(ntd.kinds)):
        kind = ntd.kinds[x]
        bag = ntd.bags[x]
        table: set = set()
        if kind == LEAF:
            v = ntd.data[x]
            store(table, ((0,), (0,), (unit(v),), 0))
        elif kind == INTRODUCE:
            v = ntd.data[x]
            (y,) = ntd.children[x]
            ybag = ntd.bags[y]
            for state in tables[y]:
                pb_of, ppb_of, cc_of, kp = _decode(ybag, state)
                next_pb = max(pb_of.values(), default=-1) + 1
                next_ppb = max(ppb_of.values(), default=-1) + 1
                # v always forms a fresh piece; it may open a fresh district
                pb_of[v] = next_pb
                ppb_of[v] = next_ppb
                cc_of[next_pb] = unit(v)
                if kp + next_pb + 1 <= k:
                    store(table, _canon(bag, pb_of, ppb_of, cc_of, kp))
                del cc_of[next_pb]
                # or v joins an existing district's trace
                for b in range(next_pb):
                    pb_of[v] = b
                    old = cc_of[b]
                    cc_of[b] = tuple(a + u for a, u in zip(old, unit(v)))
                    store(table, _canon(bag, pb_of, ppb_of, cc_of, kp))
                    cc_of[b] = old
        elif kind == INTRODUCE_EDGE:
            u, v = ntd.data[x]
            (y,) = ntd.children[x]
            for state in tables[y]:
                store(table, state)
                pb_of, ppb_of, cc_of, kp = _decode(bag, state)
                if pb_of[u] == pb_of[v] and ppb_of[u] != ppb_of[v]:
                    # the new edge may merge the two pieces
                    dv = ppb_of[v]
                    du = ppb_of[u]
                    merged = {w: (du if d == dv else d) for w, d in ppb_of.items()}
                    store(table, _canon(bag, pb_of, merged, cc_of, kp))
        elif kind == FORGET:
            v = ntd.data[x]
            (y,) = ntd.children[x]
            ybag = ntd.bags[y]
            for state in tables[y]:
                pb_of, ppb_of, cc_of, kp = _decode(ybag, state)
                b = pb_of[v]
                block_size = sum(1 for w in ybag if pb_of[w] == b)
                piece_size = sum(1 for w in ybag if ppb_of[w] == ppb_of[v])
                if block_size == 1:
                    # v's district leaves the bag: it must be complete and fair
                    if mov(cc_of[b]) <= ell and kp + 1 + (len(set(pb_of.values())) - 1) <= k:
                        del pb_of[v]
                        del ppb_of[v]
                        vec = cc_of.pop(b)
                        store(table, _canon(bag, pb_of, ppb_of, cc_of, kp + 1))
                elif piece_size == 1:
                    # v's piece would be orphaned inside a continuing district
                    continue
                else:
                    del pb_of[v]
                    del ppb_of[v]
                    store(table, _canon(bag, pb_of, ppb_of, cc_of, kp))
        elif kind == JOIN:
            y, z = ntd.children[x]
            bag_cv = [0] * C
            for v in bag:
                bag_cv[g.colors[v]] += 1
            by_pb_y: dict[tuple, list] = {}
            for state in tables[y]:
                by_pb_y.setdefault(state[0], []).append(state)
            for zstate in tables[z]:
                for ystate in by_pb_y.get(zstate[0], ()):
                    merged = _join_states(bag, ystate, zstate, g, k)
                    if merged is not None:
                        store(table, merged)
        else:  # pragma: no cover - validate() rejects unknown kinds
            raise AssertionError(kind)
        tables[x] = table
        for c in ntd.children[x]:
            del tables[c]

    root = ntd.root
    root_bag = ntd.bags[root]
    for state in tables[root]:
        pb_rgs, ppb_rgs, cc, kp = state
        if pb_rgs != ppb_rgs:
            continue
        if kp != k - len(cc):
            continue
        if all(mov(vec) <= ell for vec in cc):
            return True
    return False


def _join_states(bag: tuple[int, ...], ystate, zstate, g, k: int):
    """Combine sibling states with equal bag partition pb.

    Pieces merge along shared bag vertices; per district trace, color counts
    add up, with the bag vertices themselves counted once instead of twice.
    """
    pb_rgs, ppb_y, cc_y, kp_y = ystate
    _, ppb_z, cc_z, kp_z = zstate
    kp = kp_y + kp_z
    if kp + len(cc_y) > k:
        return None
    # union-find over bag positions joins the two piece partitions
    parent = list(range(len(bag)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for rgs in (ppb_y, ppb_z):
        first: dict[int, int] = {}
        for i, d in enumerate(rgs):
            if d in first:
                parent[find(i)] = find(first[d])
            else:
                first[d] = i
    ppb_of = {v: find(i) for i, v in enumerate(bag)}
    pb_of = {v: pb_rgs[i] for i, v in enumerate(bag)}
    cc_of = {}
    for b in range(len(cc_y)):
        block_cv = [0] * len(cc_y[b])
        for i, v in enumerate(bag):
            if pb_rgs[i] == b:
                block_cv[g.colors[v]] += 1
        cc_of[b] = tuple(a + c - d for a, c, d in zip(cc_y[b], cc_z[b], block_cv))
    return _canon(bag, pb_of, ppb_of, cc_of, kp)
