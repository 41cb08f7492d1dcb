import csv
import io
import json

from apathep.cli import classify_rows, main, run_pipeline
from apathep.lgraph import parse

TRIANGLE = """\
group Z3
vertex a A
vertex x
vertex b A
vertex c A
edge a x 1
edge x b 0
edge x c 2
edge b c 1
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_epc_text_and_json(capsys):
    code, out, _ = run(capsys, "epc", "--group", "Z15", "--lambda", "1,2,4,7,8,11,13,14")
    assert code == 0
    assert "EP2    False  EP2     0 3 5" in out
    code, out, _ = run(capsys, "epc", "--group", "Z6", "--lambda", "4", "--format", "json")
    rep = json.loads(out)
    assert rep["satisfies"] is False and rep["EP1"]["witness"] == ["0", "1", "3"]
    assert rep["EP2"]["satisfies"] is True


def test_json_output_is_byte_identical(capsys):
    outs = {run(capsys, "epc", "--group", "Z2*Z4", "--lambda", "(1,1),(0,2)", "--format", "json", "--seed", str(s))[1] for s in (0, 7)}
    assert len(outs) == 1


def test_validation_errors_exit_1(capsys):
    assert run(capsys, "epc", "--group", "Z0", "--lambda", "1")[0] == 1
    assert run(capsys, "epc", "--group", "Z2*Z2", "--lambda", "1")[0] == 1
    assert run(capsys, "classify", "--max-order", "13")[0] == 1
    code, _, err = run(capsys, "solve", "/nonexistent/file.lg", "--lambda", "0")
    assert code == 1 and err.startswith("error:")


def test_explosion_exit_2(capsys, tmp_path):
    lines = ["group Z2"] + [f"vertex v{i}" + (" A" if i < 2 else "") for i in range(9)]
    lines += [f"edge v{i} v{j} 0" for i in range(9) for j in range(i + 1, 9)]
    f = tmp_path / "k9.lg"
    f.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "solve", str(f), "--lambda", "0", "--method", "enumerate", "--cap", "5")
    assert code == 2 and "more than 5 paths" in err


def test_classify_singletons_order_4():
    rows = {(r["group"], r["lambda"]): r for r in classify_rows(4, singletons=True)}
    assert rows[("Z4", "{0}")]["satisfies"] and rows[("Z4", "{2}")]["satisfies"]
    assert not rows[("Z4", "{1}")]["satisfies"] and not rows[("Z4", "{3}")]["satisfies"]
    assert rows[("Z2", "{0}")]["satisfies"] and rows[("Z2", "{1}")]["satisfies"]
    assert all(r["theorem14"] == "agree" for r in rows.values())
    full = {(r["group"], r["lambda"]): r for r in classify_rows(1)}
    assert full[("Z1", "{}")]["satisfies"] and full[("Z1", "{()}")]["satisfies"]


def test_classify_csv_file(capsys, tmp_path):
    out = tmp_path / "c.csv"
    code, text, _ = run(capsys, "classify", "--max-order", "4", "--singletons", "--out", str(out))
    assert code == 0 and "theorem14_disagree  0" in text
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 14
    assert {r["witness"] for r in rows if r["group"] == "Z4" and r["lambda"] == "{1}"} == {"0 3 2"}


def test_solve_modes(capsys, tmp_path):
    f = tmp_path / "t.lg"
    f.write_text(TRIANGLE)
    code, out, _ = run(capsys, "solve", str(f), "--lambda", "1", "--mode", "duality", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"lambda": "{1}", "nu": 1, "nu_half": "1", "nu_half_exact": True, "tau": 1}
    code, out, _ = run(capsys, "solve", "--graph", str(f), "--lambda", "1", "--mode", "cover", "--format", "json")
    # b lies on both allowable paths a-x-b and b-c, and x misses b-c
    assert json.loads(out)["vertices"] == ["b"]
    code, out, _ = run(capsys, "solve", str(f), "--lambda", "1,2", "--mode", "half")
    assert code == 0 and out.startswith("half_integral packing of size 2")


def test_obstruction_round_trip(capsys, tmp_path):
    f = tmp_path / "fig.lg"
    code, _, _ = run(capsys, "gen-obstruction", "--group", "Z6", "--lambda", "4", "--k", "2", "--fig", "1a", "--out", str(f))
    assert code == 0
    code, out, _ = run(capsys, "verify-obstruction", str(f), "--format", "json")
    flags = json.loads(out)["flags"]
    assert code == 0 and flags["obstruction"] is True
    code, out, _ = run(capsys, "solve", str(f), "--mode", "integral", "--format", "json")
    assert json.loads(out)["size"] == 1
    dot = tmp_path / "fig.dot"
    assert run(capsys, "export-dot", str(f), "--out", str(dot))[0] == 0
    text = dot.read_text()
    assert text.startswith("graph") and "color=blue" in text
    # an EPC-satisfying Lambda has no obstruction
    assert run(capsys, "gen-obstruction", "--group", "Z4", "--lambda", "0", "--out", str(tmp_path / "none.lg"))[0] == 1


def test_encode_cli(capsys, tmp_path):
    src = tmp_path / "src.lg"
    src.write_text(TRIANGLE)
    dst, mp = tmp_path / "dst.lg", tmp_path / "map.json"
    code, _, _ = run(capsys, "encode", "--kind", "ab", "--in", str(src), "--a", "a", "--b", "b,c", "--lambda", "1", "--out", str(dst), "--map", str(mp))
    assert code == 0
    g = parse(dst.read_text())
    assert str(g.spec) == "Z3*Z2*Z2" and g.terminals == {"a", "b", "c"}
    tables = json.loads(mp.read_text())
    assert {"edge_map", "lambda_target"} <= set(tables)
    code, _, _ = run(capsys, "encode", "--kind", "mod", "--in", str(src), "--modulus", "2", "--residues", "0", "--out", str(dst))
    assert code == 0 and str(parse(dst.read_text()).spec) == "Z2"
    assert run(capsys, "encode", "--kind", "edges", "--in", str(src), "--out", str(dst))[0] == 1


def test_pipeline_empty_lambda(capsys):
    rep = run_pipeline("Z6", "", 2)
    assert rep["note"] == "no allowable paths possible" and rep["nu"] == 0 and rep["tau"] == 0
    code, out, _ = run(capsys, "pipeline", "--group", "Z6", "--lambda", "", "--k", "2")
    assert code == 0 and "no allowable paths possible" in out
