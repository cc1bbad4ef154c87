import csv
import io
import json

import numpy as np
import pytest

from catransport.cli import main
from catransport.groups import cyclic, quaternion


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def write_table(path, G):
    np.savetxt(path, G.table, fmt="%d", delimiter=",")
    return str(path)


def test_run_flat_all_pass(capsys):
    code, out, _ = run(capsys, "run", "--scenario", "flat", "--grid", "40x16")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["check", "scenario", "N", "M", "residual", "tolerance", "pass"]
    assert all(r["pass"] == "true" and r["scenario"] == "flat" for r in table)
    assert [r["check"] for r in table] == sorted(r["check"] for r in table)


def test_run_is_deterministic_byte_for_byte(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["run", "--scenario", "so3_conj", "--grid", "60x20", "--checks", "reparam,thin,phi",
                     "--seed", "7", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_from_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scenario": "so2_area", "grid": {"N": 40, "M": 12}, "checks": "backtrack"}))
    code, out, _ = run(capsys, "run", "--config", str(cfg))
    assert code == 0
    table = rows(out)
    assert {r["N"] for r in table} == {"40"} and all(r["check"].startswith("backtrack") for r in table)
    # flags override the file
    code, out, _ = run(capsys, "run", "--config", str(cfg), "--grid", "32x10")
    assert {r["N"] for r in rows(out)} == {"32"}


@pytest.mark.parametrize("argv", [
    ["run", "--scenario", "nowhere"],
    ["run", "--scenario", "flat", "--checks", "bogus"],
    ["run", "--scenario", "flat", "--grid", "4x4"],
    ["run", "--scenario", "flat", "--grid", "abc"],
])
def test_bad_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_bad_config_json_exits_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert run(capsys, "run", "--config", str(cfg))[0] == 2


def test_list_scenarios(capsys):
    code, out, _ = run(capsys, "list-scenarios")
    names = [line.split("\t")[0] for line in out.splitlines()]
    assert code == 0 and {"flat", "so2_area", "so3_conj", "double"} <= set(names)


def test_finite_central_quotient(tmp_path, capsys):
    code, out, _ = run(capsys, "finite", "--cayley", write_table(tmp_path / "z4.csv", cyclic(4)), "--center", "0,2")
    assert code == 0
    table = rows(out)
    assert [r["check"] for r in table] == ["centrality", "categorical_group", "principal_bundle",
                                           "orbit_composition", "round_trip"]
    assert all(r["pass"] == "true" and r["order"] == "4" for r in table)


def test_finite_non_central_reports_witness(tmp_path, capsys):
    code, out, _ = run(capsys, "finite", "--cayley", write_table(tmp_path / "q8.csv", quaternion()),
                       "--center", "0,1,2,3")
    assert code == 1
    (row,) = rows(out)
    assert row["check"] == "centrality" and row["pass"] == "false" and row["witness"]


def test_finite_bad_table_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1\n0,1\n")
    assert run(capsys, "finite", "--cayley", str(bad))[0] == 2
    assert run(capsys, "finite", "--cayley", str(tmp_path / "missing.csv"))[0] == 2


def test_convergence_reports_orders(capsys):
    code, out, _ = run(capsys, "convergence", "--scenario", "so3_conj", "--checks", "reparam,backtrack",
                       "--ladder", "50,100,200")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["check", "h", "residual", "order"]
    orders = [float(r["order"]) for r in table if r["check"] == "reparam" and r["order"] not in ("", "nan")]
    assert orders and all(abs(o - 2.0) < 0.3 for o in orders)
