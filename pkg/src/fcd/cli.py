"""Command-line surface: parse/write instances, dispatch solvers, verify, bench.

Instance format (v1, ASCII, LF, 0-based ids)::

    # comment lines start with '#'
    p fcd <n> <m> <num_colors> <k> <ell>
    c <vertex> <color>          (n lines)
    e <u> <v>                   (m lines, u < v)
    td <width> <num_nodes>      (optional tree-decomposition block)
    b <id> <parent|-1> <v...>   (num_nodes lines)

Solution format::

    s fcd <k>
    d <id> <v...>               (k lines, district ids in file order)

Exit codes: 0 = YES / valid, 1 = NO / invalid, 2 = usage or input error,
3 = work or time budget exceeded.  The environment variable ``FCD_BUDGET``
overrides the default work budget.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import classify as _classify
from . import generators, oracle, solver_mln, solver_param, solver_tw, solvers_poly
from .budget import DEFAULT_WORK_LIMIT, Budget, BudgetExceededError
from .classify import (TreeDecomposition, branch_decomposition, classify_graph,
                       feedback_edge_set, minimum_vertex_cover,
                       nice_tree_decomposition)
from .core import ColoredGraph, Districting, Instance, verify_districting

ALGORITHMS = ("auto", "path", "cycle", "star", "caterpillar", "mln",
              "treewidth", "fen-k", "vc", "vc-colors", "deg2", "brute")

# dispatch thresholds: the auto ladder only picks a rung it can afford
AUTO_MAX_COLORS_TW = 3
AUTO_MAX_K_FEN = 6
AUTO_MAX_BRANCHES = 6
AUTO_MAX_COVER = 8
AUTO_MAX_DEG2 = 8
AUTO_MAX_BRUTE = 12


class FormatError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_instance(text: str) -> tuple[Instance, TreeDecomposition | None]:
    """Parse the v1 instance format; report the first malformed line."""
    lines = text.splitlines()
    idx = 0

    def next_line() -> tuple[int, list[str]]:
        nonlocal idx
        while idx < len(lines):
            idx += 1
            stripped = lines[idx - 1].strip()
            if stripped and not stripped.startswith("#"):
                return idx, stripped.split()
        return 0, []

    line_no, parts = next_line()
    if not parts or parts[:2] != ["p", "fcd"] or len(parts) != 7:
        raise FormatError(line_no or 1, "expected header 'p fcd n m num_colors k ell'")
    try:
        n, m, num_colors, k, ell = (int(x) for x in parts[2:])
    except ValueError:
        raise FormatError(line_no, "header fields must be integers") from None
    colors = [-1] * n
    for _ in range(n):
        line_no, parts = next_line()
        if len(parts) != 3 or parts[0] != "c":
            raise FormatError(line_no or idx, "expected 'c <vertex> <color>'")
        try:
            v, c = int(parts[1]), int(parts[2])
        except ValueError:
            raise FormatError(line_no, "vertex and color must be integers") from None
        if not 0 <= v < n:
            raise FormatError(line_no, f"vertex {v} out of range")
        if not 0 <= c < num_colors:
            raise FormatError(line_no, f"color {c} out of range [0,{num_colors})")
        if colors[v] != -1:
            raise FormatError(line_no, f"vertex {v} colored twice")
        colors[v] = c
    if any(c == -1 for c in colors):
        raise FormatError(line_no, "not every vertex received a color")
    edges = []
    seen = set()
    for _ in range(m):
        line_no, parts = next_line()
        if len(parts) != 3 or parts[0] != "e":
            raise FormatError(line_no or idx, "expected 'e <u> <v>'")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise FormatError(line_no, "endpoints must be integers") from None
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(line_no, f"edge ({u},{v}) out of range")
        if u >= v:
            raise FormatError(line_no, f"edges must satisfy u < v, got ({u},{v})")
        if (u, v) in seen:
            raise FormatError(line_no, f"duplicate edge ({u},{v})")
        seen.add((u, v))
        edges.append((u, v))
    td = None
    line_no, parts = next_line()
    if parts:
        if parts[0] != "td" or len(parts) != 3:
            raise FormatError(line_no, "expected 'td <width> <num_nodes>' or end of file")
        try:
            width, num_nodes = int(parts[1]), int(parts[2])
        except ValueError:
            raise FormatError(line_no, "td fields must be integers") from None
        bags: list[frozenset[int]] = [frozenset()] * num_nodes
        parents = [-2] * num_nodes
        for _ in range(num_nodes):
            line_no, parts = next_line()
            if len(parts) < 3 or parts[0] != "b":
                raise FormatError(line_no or idx, "expected 'b <id> <parent|-1> <v...>'")
            try:
                node_id, parent = int(parts[1]), int(parts[2])
                verts = [int(x) for x in parts[3:]]
            except ValueError:
                raise FormatError(line_no, "bag fields must be integers") from None
            if not 0 <= node_id < num_nodes or parents[node_id] != -2:
                raise FormatError(line_no, f"bad or repeated node id {node_id}")
            bags[node_id] = frozenset(verts)
            parents[node_id] = parent
        td = TreeDecomposition(bags, parents)
        if td.width != width:
            raise FormatError(line_no, f"declared width {width} but bags give {td.width}")
        line_no, parts = next_line()
    if parts:
        raise FormatError(line_no, f"unexpected trailing line: {' '.join(parts)}")
    try:
        graph = ColoredGraph.from_edges(n, edges, colors, num_colors)
        instance = Instance(graph, k, ell)
    except ValueError as exc:
        raise FormatError(line_no or 1, str(exc)) from None
    return instance, td


def write_instance(instance: Instance, td: TreeDecomposition | None = None) -> str:
    g = instance.graph
    out = [f"p fcd {g.n} {g.m} {g.num_colors} {instance.k} {instance.ell}"]
    for v in range(g.n):
        out.append(f"c {v} {g.colors[v]}")
    for u, v in sorted(g.edges()):
        out.append(f"e {u} {v}")
    if td is not None:
        out.append(f"td {td.width} {len(td.bags)}")
        for i, bag in enumerate(td.bags):
            verts = " ".join(str(v) for v in sorted(bag))
            out.append(f"b {i} {td.parents[i]}" + (f" {verts}" if verts else ""))
    return "\n".join(out) + "\n"


def parse_solution(text: str, n: int) -> Districting:
    lines = [ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise FormatError(1, "empty solution")
    parts = lines[0].split()
    if parts[:2] != ["s", "fcd"] or len(parts) != 3:
        raise FormatError(1, "expected header 's fcd <k>'")
    k = int(parts[2])
    assignment = [-1] * n
    if len(lines) - 1 != k:
        raise FormatError(len(lines), f"expected {k} district lines")
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if parts[0] != "d" or len(parts) < 2:
            raise FormatError(line_no, "expected 'd <id> <v...>'")
        district = int(parts[1])
        if not 0 <= district < k:
            raise FormatError(line_no, f"district id {district} out of range")
        for tok in parts[2:]:
            v = int(tok)
            if not 0 <= v < n:
                raise FormatError(line_no, f"vertex {v} out of range")
            if assignment[v] != -1:
                raise FormatError(line_no, f"vertex {v} assigned twice")
            assignment[v] = district
    if any(a == -1 for a in assignment):
        missing = [v for v, a in enumerate(assignment) if a == -1]
        raise FormatError(len(lines), f"vertices {missing} unassigned")
    return Districting(tuple(assignment), k)


def write_solution(d: Districting) -> str:
    d = d.canonical()
    members: list[list[int]] = [[] for _ in range(d.k)]
    for v, i in enumerate(d.assignment):
        members[i].append(v)
    out = [f"s fcd {d.k}"]
    for i, dist in enumerate(members):
        out.append(f"d {i} " + " ".join(str(v) for v in dist))
    return "\n".join(out) + "\n"


def dispatch_auto(instance: Instance, has_td: bool = False) -> str:
    """Deterministic solver ladder from cheapest applicable to brute force."""
    g = instance.graph
    rep = classify_graph(g)
    if rep.class_tag == "path":
        return "path"
    if rep.class_tag == "cycle":
        return "cycle"
    if rep.class_tag == "star":
        return "star"
    if rep.class_tag == "caterpillar":
        return "caterpillar"
    if rep.class_tag in ("tree", "forest") or has_td:
        if g.num_colors <= AUTO_MAX_COLORS_TW:
            return "treewidth"
        if instance.k + rep.fen <= AUTO_MAX_K_FEN:
            return "fen-k"
    if rep.is_connected:
        bd = branch_decomposition(g)
        if len(bd.branches) <= AUTO_MAX_BRANCHES:
            return "mln"
    try:
        minimum_vertex_cover(g, AUTO_MAX_COVER)
        return "vc"
    except BudgetExceededError:
        pass
    if rep.degree_ge2_count <= AUTO_MAX_DEG2:
        return "deg2"
    if g.n <= AUTO_MAX_BRUTE:
        return "brute"
    return "budget-exceeded"


def _apex_for_treewidth(g: ColoredGraph) -> set[int]:
    return {min(u, v) for u, v in feedback_edge_set(g)}


def run_solver(algo: str, instance: Instance, td: TreeDecomposition | None,
               budget: Budget) -> tuple[bool, Districting | None]:
    """Run one concrete solver; returns (decision, witness-or-None)."""
    g = instance.graph
    rep = classify_graph(g)
    if algo == "path":
        if rep.spine is None or rep.class_tag != "path":
            raise ValueError("not a path instance")
        return solvers_poly.solve_path(instance, rep.spine)
    if algo == "cycle":
        order = _cycle_order(g)
        return solvers_poly.solve_cycle(instance, order)
    if algo == "star":
        return solvers_poly.solve_star(instance)
    if algo == "caterpillar":
        if rep.spine is None:
            raise ValueError("no spine: not a path or caterpillar instance")
        return solvers_poly.solve_caterpillar(instance, rep.spine), None
    if algo == "mln":
        bd = branch_decomposition(g)
        return solver_mln.solve_mln(instance, bd, budget), None
    if algo == "treewidth":
        if td is None:
            if rep.fen == 0:
                ntd = nice_tree_decomposition(g)
            else:
                apex = _apex_for_treewidth(g)
                ntd = nice_tree_decomposition(
                    g, _classify.apex_tree_decomposition(g, apex))
        else:
            ntd = nice_tree_decomposition(g, td)
        return solver_tw.solve_treewidth(instance, ntd, budget), None
    if algo == "fen-k":
        return solver_param.solve_fen_k(instance, feedback_edge_set(g), budget)
    if algo == "vc":
        cover = minimum_vertex_cover(g, AUTO_MAX_COVER)
        return solver_param.solve_vc(instance, cover, budget), None
    if algo == "vc-colors":
        cover = minimum_vertex_cover(g, AUTO_MAX_COVER)
        return solver_param.solve_vc_colors(instance, cover, budget), None
    if algo == "deg2":
        return solver_param.solve_degree_two(instance, budget), None
    if algo == "brute":
        return oracle.brute_force_solve(instance, budget=budget)
    raise ValueError(f"unknown algorithm {algo!r}")


def _cycle_order(g: ColoredGraph) -> list[int]:
    if g.n < 3 or any(g.degree(v) != 2 for v in range(g.n)):
        raise ValueError("not a cycle instance")
    order = [0, g.adjacency[0][0]]
    while len(order) < g.n:
        nxt = [u for u in g.adjacency[order[-1]] if u != order[-2]]
        order.append(nxt[0])
    return order


def _make_budget(args) -> Budget:
    limit = args.budget if args.budget is not None else int(
        os.environ.get("FCD_BUDGET", DEFAULT_WORK_LIMIT))
    return Budget(limit, timeout_s=args.timeout)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="ascii") as handle:
        return handle.read()


def _write(path: str, content: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write(content)


def _cmd_solve(args) -> int:
    instance, td = parse_instance(_read(args.input))
    budget = _make_budget(args)
    algo = args.algo
    if algo == "auto":
        algo = dispatch_auto(instance, has_td=td is not None)
        print(f"auto dispatch: {algo}", file=sys.stderr)
        if algo == "budget-exceeded":
            print("no solver rung applies at this size", file=sys.stderr)
            return 3
    try:
        decision, witness = run_solver(algo, instance, td, budget)
    except BudgetExceededError as exc:
        print(f"UNDECIDED: {exc}", file=sys.stderr)
        return 3
    print("YES" if decision else "NO")
    if decision and args.output:
        if witness is not None:
            _write(args.output, write_solution(witness))
        else:
            print(f"algorithm {algo} is decision-only; no witness written",
                  file=sys.stderr)
    return 0 if decision else 1


def _cmd_verify(args) -> int:
    instance, _ = parse_instance(_read(args.input))
    districting = parse_solution(_read(args.solution), instance.graph.n)
    if districting.k != instance.k:
        print(f"invalid: solution has {districting.k} districts, instance wants {instance.k}")
        return 1
    result = verify_districting(instance, districting)
    if result.ok:
        print("valid")
        return 0
    detail = f" (MOV {result.mov} > {instance.ell})" if result.reason == "unfair" else ""
    print(f"invalid: district {result.district} {result.reason}{detail}")
    return 1


def _parse_grid_params(text: str) -> tuple[generators.GridTilingInstance, list[tuple[int, int]] | None]:
    t = m = n = None
    sets: dict[tuple[int, int], list[tuple[int, int]]] = {}
    solution = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.strip().split()
        if not parts or parts[0] == "#":
            continue
        if parts[0] == "gt":
            t, m, n = int(parts[1]), int(parts[2]), int(parts[3])
        elif parts[0] == "s":
            i, j = int(parts[1]), int(parts[2])
            nums = [int(x) for x in parts[3:]]
            if len(nums) % 2:
                raise FormatError(line_no, "odd number of tile coordinates")
            sets[(i, j)] = list(zip(nums[::2], nums[1::2]))
        elif parts[0] == "sol":
            nums = [int(x) for x in parts[1:]]
            solution = list(zip(nums[::2], nums[1::2]))
        else:
            raise FormatError(line_no, f"unknown directive {parts[0]!r}")
    if t is None:
        raise FormatError(1, "missing 'gt <t> <m> <n>' header")
    tiles = tuple(tuple(tuple(sorted(sets[(i, j)]))
                        for j in range(1, t + 1)) for i in range(1, t + 1))
    return generators.GridTilingInstance(t, m, n, tiles), solution


def _parse_nae_params(text: str) -> tuple[generators.NAE3SatInstance, list[bool] | None]:
    nvars = None
    clauses = []
    solution = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.strip().split()
        if not parts or parts[0] == "#":
            continue
        if parts[0] == "nae":
            nvars = int(parts[1])
        elif parts[0] == "y":
            clauses.append(tuple(int(x) for x in parts[1:]))
        elif parts[0] == "sol":
            solution = [bool(int(x)) for x in parts[1:]]
        else:
            raise FormatError(line_no, f"unknown directive {parts[0]!r}")
    if nvars is None:
        raise FormatError(1, "missing 'nae <num_vars> <num_clauses>' header")
    return generators.NAE3SatInstance(nvars, tuple(clauses)), solution


def _parse_pbcp_params(text: str):
    n = anchors = None
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.strip().split()
        if not parts or parts[0] == "#":
            continue
        if parts[0] == "pbcp":
            n = int(parts[1])
            anchors = (int(parts[3]), int(parts[4]))
        elif parts[0] == "e":
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise FormatError(line_no, f"unknown directive {parts[0]!r}")
    if n is None:
        raise FormatError(1, "missing 'pbcp <n> <m> <v> <v2>' header")
    return n, edges, anchors


def _cmd_generate(args) -> int:
    if args.reduction:
        params = _read(args.params)
        if args.reduction == "grid-tiling":
            gt, sol = _parse_grid_params(params)
            red = generators.reduce_grid_tiling(gt)
            instance = red.instance
            if args.witness_output:
                if sol is None:
                    raise ValueError("params file has no 'sol' line for the witness")
                selection = {}
                idx = 0
                for i in range(1, gt.t + 1):
                    for j in range(1, gt.t + 1):
                        selection[(i, j)] = sol[idx]
                        idx += 1
                _write(args.witness_output, write_solution(red.witness(selection)))
        elif args.reduction == "nae3sat":
            sat, sol = _parse_nae_params(params)
            red = generators.reduce_nae3sat(sat)
            instance = red.instance
            if args.witness_output:
                if sol is None:
                    raise ValueError("params file has no 'sol' line for the witness")
                _write(args.witness_output, write_solution(red.witness(sol)))
        else:
            n, edges, anchors = _parse_pbcp_params(params)
            instance = generators.reduce_pbcp(n, edges, anchors[0], anchors[1])
            if args.witness_output:
                raise ValueError("pbcp has no witness builder")
    else:
        instance = generators.gen_random_instance(
            args.graph_class, args.n, args.colors, args.k, args.ell,
            args.seed, args.param)
    text = write_instance(instance)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_classify(args) -> int:
    instance, _ = parse_instance(_read(args.input))
    rep = classify_graph(instance.graph)
    print(f"class: {rep.class_tag}")
    print(f"connected: {'yes' if rep.is_connected else 'no'}")
    print(f"components: {rep.num_components}")
    print(f"degree_ge2_count: {rep.degree_ge2_count}")
    print(f"fen: {rep.fen}")
    if rep.spine is not None:
        print("spine: " + " ".join(str(v) for v in rep.spine))
    return 0


def _cmd_bench(args) -> int:
    algos = args.algos.split(",")
    for algo in algos:
        if algo not in ALGORITHMS or algo == "auto" and len(algos) > 1:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}")
    rows = ["instance,algorithm,decision,wall_time_s,work"]
    for path in args.inputs:
        instance, td = parse_instance(_read(path))
        for algo in algos:
            budget = _make_budget(args)
            concrete = algo
            if algo == "auto":
                concrete = dispatch_auto(instance, has_td=td is not None)
            start = time.perf_counter()
            try:
                if concrete == "budget-exceeded":
                    decision = "budget"
                else:
                    yes, _w = run_solver(concrete, instance, td, budget)
                    decision = "yes" if yes else "no"
            except BudgetExceededError:
                decision = "budget"
            elapsed = time.perf_counter() - start
            shown = f"{elapsed:.6f}" if args.time_mode == "wall" else "-"
            rows.append(f"{os.path.basename(path)},{algo},{decision},{shown},{budget.used}")
    csv_text = "\n".join(rows) + "\n"
    if args.output:
        _write(args.output, csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fcd", description="fair connected districting toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide an instance")
    solve.add_argument("--input", required=True, help="instance file or '-'")
    solve.add_argument("--algo", choices=ALGORITHMS, default="auto")
    solve.add_argument("--output", help="write a witness solution file on YES")
    solve.add_argument("--budget", type=int, default=None)
    solve.add_argument("--timeout", type=float, default=None)
    solve.add_argument("--threads", type=int, default=1,
                       help="reserved; solvers currently run single-threaded")
    solve.set_defaults(func=_cmd_solve)

    verify = sub.add_parser("verify", help="check a solution file")
    verify.add_argument("--input", required=True)
    verify.add_argument("--solution", required=True)
    verify.set_defaults(func=_cmd_verify)

    gen = sub.add_parser("generate", help="emit an instance file")
    gen.add_argument("--class", dest="graph_class", default="general",
                     choices=("path", "cycle", "star", "caterpillar", "tree",
                              "unicyclic", "bounded_vc", "general"))
    gen.add_argument("--n", type=int, default=8)
    gen.add_argument("--colors", type=int, default=2)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--ell", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--param", type=float, default=None,
                     help="edge probability (general) or cover budget (bounded_vc)")
    gen.add_argument("--reduction", choices=("grid-tiling", "nae3sat", "pbcp"))
    gen.add_argument("--params", help="reduction parameter text block")
    gen.add_argument("--witness-output", help="also build and write the witness")
    gen.add_argument("--output")
    gen.set_defaults(func=_cmd_generate)

    cls = sub.add_parser("classify", help="print the structure report")
    cls.add_argument("--input", required=True)
    cls.set_defaults(func=_cmd_classify)

    bench = sub.add_parser("bench", help="run solver/instance grid, emit CSV")
    bench.add_argument("--inputs", nargs="+", required=True)
    bench.add_argument("--algos", required=True, help="comma-separated tags")
    bench.add_argument("--output")
    bench.add_argument("--budget", type=int, default=None)
    bench.add_argument("--timeout", type=float, default=None)
    bench.add_argument("--threads", type=int, default=1,
                       help="reserved; solvers currently run single-threaded")
    bench.add_argument("--time-mode", choices=("wall", "none"), default="wall",
                       help="'none' blanks the wall-time column for reproducible CSVs")
    bench.set_defaults(func=_cmd_bench)
    return parser


def run_cli(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"UNDECIDED: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
