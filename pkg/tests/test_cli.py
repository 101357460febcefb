import contextlib
import io
import random

import pytest

from fcd.cli import (FormatError, dispatch_auto, parse_instance,
                     parse_solution, run_cli, write_instance, write_solution)
from fcd.classify import TreeDecomposition
from fcd.core import ColoredGraph, Districting, Instance
from fcd.generators import gen_random_instance

from util import random_instance


def run(args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = run_cli(args)
    return code, out.getvalue(), err.getvalue()


def p4_text():
    g = ColoredGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)], [0, 1, 0, 1], 2)
    return write_instance(Instance(g, 2, 0))


# -------------------------------------------------------------------- format

def test_parse_header_example():
    inst, td = parse_instance(p4_text())
    assert inst.graph.n == 4 and inst.graph.m == 3
    assert inst.k == 2 and inst.ell == 0 and td is None


def test_round_trip_stability():
    rng = random.Random(179)
    for _ in range(40):
        inst = random_instance(rng, "general", (1, 9), param=0.4)
        text = write_instance(inst)
        parsed, _ = parse_instance(text)
        assert write_instance(parsed) == text


def test_parse_with_comments_and_blank_lines():
    text = "# hello\n\n" + p4_text() + "\n# trailing\n"
    inst, _ = parse_instance(text)
    assert inst.graph.n == 4


def test_parse_duplicate_edge_reports_line():
    text = ("p fcd 3 2 1 1 0\nc 0 0\nc 1 0\nc 2 0\ne 0 1\ne 0 1\n")
    with pytest.raises(FormatError, match="line 6"):
        parse_instance(text)


def test_parse_color_out_of_range_reports_line():
    text = "p fcd 2 1 2 1 0\nc 0 0\nc 1 5\ne 0 1\n"
    with pytest.raises(FormatError, match="line 3.*color 5"):
        parse_instance(text)


def test_parse_unsorted_edge_rejected():
    text = "p fcd 2 1 2 1 0\nc 0 0\nc 1 1\ne 1 0\n"
    with pytest.raises(FormatError, match="u < v"):
        parse_instance(text)


def test_parse_td_block_round_trip():
    g = ColoredGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], [0, 1, 0], 2)
    td = TreeDecomposition([frozenset({0, 1, 2})], [-1])
    text = write_instance(Instance(g, 1, 1), td)
    inst, parsed_td = parse_instance(text)
    assert parsed_td is not None
    assert parsed_td.bags == [frozenset({0, 1, 2})]
    assert write_instance(inst, parsed_td) == text


def test_parse_td_width_mismatch():
    g = ColoredGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], [0, 1, 0], 2)
    td = TreeDecomposition([frozenset({0, 1, 2})], [-1])
    text = write_instance(Instance(g, 1, 1), td).replace("td 2 1", "td 1 1")
    with pytest.raises(FormatError, match="width"):
        parse_instance(text)


def test_solution_round_trip():
    d = Districting((0, 0, 1, 1), 2)
    text = write_solution(d)
    assert parse_solution(text, 4).assignment == (0, 0, 1, 1)
    with pytest.raises(FormatError):
        parse_solution("s fcd 2\nd 0 0 1\n", 4)  # missing line and vertices


# ------------------------------------------------------------------ dispatch

def test_dispatch_ladder_examples():
    path9 = gen_random_instance("path", 9, 2, 2, 0, 1)
    assert dispatch_auto(path9) == "path"
    tree = gen_random_instance("tree", 9, 2, 2, 1, 5)
    assert dispatch_auto(tree) == "treewidth"
    dense = gen_random_instance("general", 40, 10, 20, 0, 7, 0.6)
    assert dispatch_auto(dense) == "budget-exceeded"


def test_dispatch_tree_many_colors_small_k_uses_fen():
    tree = gen_random_instance("tree", 9, 2, 2, 1, 5)
    many = ColoredGraph.from_edges(tree.graph.n, tree.graph.edges(),
                                   list(range(tree.graph.n)), tree.graph.n)
    inst = Instance(many, 2, 1)
    assert dispatch_auto(inst) == "fen-k"


# ----------------------------------------------------------------- commands

def test_solve_verify_loop(tmp_path):
    ins = tmp_path / "p4.fcd"
    sol = tmp_path / "p4.sol"
    ins.write_text(p4_text())
    code, out, err = run(["solve", "--input", str(ins), "--output", str(sol)])
    assert code == 0 and out.strip() == "YES"
    assert "auto dispatch: path" in err
    code, out, _ = run(["verify", "--input", str(ins), "--solution", str(sol)])
    assert code == 0 and out.strip() == "valid"


def test_solve_no_and_exit_code(tmp_path):
    g = ColoredGraph.from_edges(3, [(0, 1), (1, 2)], [0, 0, 0], 1)
    ins = tmp_path / "p3.fcd"
    ins.write_text(write_instance(Instance(g, 2, 0)))
    code, out, _ = run(["solve", "--input", str(ins)])
    assert code == 1 and out.strip() == "NO"


def test_verify_reports_empty_district(tmp_path):
    ins = tmp_path / "i.fcd"
    sol = tmp_path / "s.sol"
    ins.write_text(p4_text())
    sol.write_text("s fcd 2\nd 0 0 1 2 3\nd 1\n")
    code, out, _ = run(["verify", "--input", str(ins), "--solution", str(sol)])
    assert code == 1 and "empty" in out


def test_unknown_flag_exits_2(tmp_path):
    code, _, _ = run(["solve", "--nonsense"])
    assert code == 2
    code, _, _ = run(["frobnicate"])
    assert code == 2


def test_budget_exceeded_exit_3(tmp_path):
    inst = gen_random_instance("general", 9, 2, 3, 1, 11, 0.5)
    ins = tmp_path / "g.fcd"
    ins.write_text(write_instance(inst))
    code, _, err = run(["solve", "--input", str(ins), "--algo", "mln", "--budget", "1"])
    assert code == 3 and "UNDECIDED" in err


def test_solve_with_td_block(tmp_path):
    g = ColoredGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], [0, 1, 0], 2)
    td = TreeDecomposition([frozenset({0, 1, 2})], [-1])
    ins = tmp_path / "k3.fcd"
    ins.write_text(write_instance(Instance(g, 1, 1), td))
    code, out, _ = run(["solve", "--input", str(ins), "--algo", "treewidth"])
    assert code == 0 and out.strip() == "YES"


def test_generate_reduction_and_witness(tmp_path):
    params = tmp_path / "gt.params"
    params.write_text(
        "gt 1 2 3\n"
        "s 1 1 1 1 1 2 2 1\n"
        "sol 1 1\n")
    ins = tmp_path / "gt.fcd"
    sol = tmp_path / "gt.sol"
    code, _, _ = run(["generate", "--reduction", "grid-tiling",
                      "--params", str(params), "--output", str(ins),
                      "--witness-output", str(sol)])
    assert code == 0
    code, out, _ = run(["verify", "--input", str(ins), "--solution", str(sol)])
    assert code == 0, out

    nae = tmp_path / "nae.params"
    nae.write_text("nae 3 1\ny 1 2 -3\nsol 1 0 0\n")
    ins2 = tmp_path / "nae.fcd"
    sol2 = tmp_path / "nae.sol"
    code, _, _ = run(["generate", "--reduction", "nae3sat",
                      "--params", str(nae), "--output", str(ins2),
                      "--witness-output", str(sol2)])
    assert code == 0
    code, _, _ = run(["verify", "--input", str(ins2), "--solution", str(sol2)])
    assert code == 0

    pb = tmp_path / "pb.params"
    pb.write_text("pbcp 4 3 1 2\ne 0 1\ne 1 2\ne 2 3\n")
    ins3 = tmp_path / "pb.fcd"
    code, _, _ = run(["generate", "--reduction", "pbcp", "--params", str(pb),
                      "--output", str(ins3)])
    assert code == 0
    code, out, _ = run(["solve", "--input", str(ins3), "--algo", "brute"])
    assert code == 0


def test_classify_command(tmp_path):
    ins = tmp_path / "p4.fcd"
    ins.write_text(p4_text())
    code, out, _ = run(["classify", "--input", str(ins)])
    assert code == 0
    assert "class: path" in out and "fen: 0" in out


def test_bench_covers_all_pairs(tmp_path):
    files = []
    for seed in range(3):
        inst = gen_random_instance("path", 6, 2, 2, 1, seed)
        f = tmp_path / f"i{seed}.fcd"
        f.write_text(write_instance(inst))
        files.append(str(f))
    out_csv = tmp_path / "bench.csv"
    code, _, _ = run(["bench", "--inputs", *files, "--algos", "path,brute,deg2",
                      "--output", str(out_csv), "--time-mode", "none"])
    assert code == 0
    rows = out_csv.read_text().strip().splitlines()
    assert rows[0] == "instance,algorithm,decision,wall_time_s,work"
    assert len(rows) == 1 + 3 * 3
    pairs = {(r.split(",")[0], r.split(",")[1]) for r in rows[1:]}
    assert len(pairs) == 9
    for row in rows[1:]:
        cells = row.split(",")
        assert cells[2] in ("yes", "no", "budget")
        assert cells[3] == "-"
        int(cells[4])


def test_auto_equals_brute_fuzz(tmp_path):
    rng = random.Random(181)
    agree = 0
    for trial in range(250):
        inst = random_instance(rng, "general", (2, 8), max_k=4, param=0.35)
        ins = tmp_path / "fuzz.fcd"
        ins.write_text(write_instance(inst))
        code_auto, _, _ = run(["solve", "--input", str(ins), "--algo", "auto"])
        code_brute, _, _ = run(["solve", "--input", str(ins), "--algo", "brute"])
        if code_auto == 3:
            continue
        assert code_auto == code_brute, write_instance(inst)
        agree += 1
    assert agree >= 200
