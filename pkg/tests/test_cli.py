import csv
import io
import json
import subprocess
import sys

import pytest

from hsplab.cli import main
from hsplab.errors import ParseError
from hsplab.harness import CSV_HEADER, InstanceSpec, abelian_moduli, parse_family, parse_hidden, split_elements
from hsplab.groups import parse_group


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_find_collision_z8(capsys):
    code, out, _ = run(capsys, "run", "--group", "Z8", "--hidden", "4", "--alg", "find-collision")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["row"]["outcome"] == "collision"
    assert doc["row"]["queries"] == 6
    assert doc["report"]["collision"] == [0, 4]


def test_run_detect_injective(capsys):
    code, out, _ = run(capsys, "run", "--group", "Z2xZ2", "--hidden", "trivial", "--alg", "detect-abelian")
    assert code == 0 and json.loads(out)["row"]["outcome"] == "injective"


def test_run_find_subgroup_s4(capsys):
    code, out, _ = run(capsys, "run", "--group", "S4", "--hidden", "perm:(1 2 3 4)", "--alg", "find-subgroup",
                       "--assert-bounds", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_HEADER
    assert rows[1][:5] == ["S4", "24", "4", "find-subgroup", "generators"]


def test_csv_header_exact(capsys):
    _, out, _ = run(capsys, "run", "--group", "Z6", "--alg", "detect-abelian", "--format", "csv")
    assert out.splitlines()[0] == "group,n,m,algorithm,outcome,queries,bound,bound_ratio,kappa,seed,wall_ms"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "run", "--group", "Q9", "--alg", "find-collision")[0] == 4
    assert run(capsys, "run", "--group", "Z8", "--alg", "nope")[0] == 4
    assert run(capsys, "run", "--group", "Z8", "--hidden", "(1 2", "--alg", "find-collision")[0] == 4
    assert run(capsys, "run", "--group", "S7", "--alg", "find-collision")[0] == 5
    assert run(capsys, "sweep", "--family", "abelian:300", "--algs", "find-collision")[0] == 5
    assert run(capsys, "run", "--group", "Z8", "--alg", "simon")[0] == 4


def test_wrong_outcome_exit(capsys, monkeypatch):
    from hsplab import harness

    monkeypatch.setattr(harness, "check_outcome", lambda *a: False)
    assert run(capsys, "run", "--group", "Z8", "--hidden", "4", "--alg", "find-collision")[0] == 3


def test_bound_violation_exit(capsys, monkeypatch):
    from hsplab import harness

    monkeypatch.setattr(harness, "theoretical_bound", lambda *a: (1.0, None))
    code, _, _ = run(capsys, "run", "--group", "Z8", "--hidden", "4", "--alg", "find-collision", "--assert-bounds")
    assert code == 2
    code, _, _ = run(capsys, "run", "--group", "Z8", "--hidden", "4", "--alg", "find-collision")
    assert code == 0


def test_sweep_abelian_32(capsys):
    code, out, err = run(capsys, "sweep", "--family", "abelian:32", "--algs", "find-collision", "--assert-bounds")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(float(r["bound_ratio"]) <= 1 for r in rows)
    assert "failures=0" in err


def test_sweep_subgroup_orders_a4(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "A4", "--algs", "subgroup-orders")
    assert code == 0
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert row["outcome"] == "{1 2 3 4 12}"


def test_sweep_comparison_table(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "abelian:16", "--algs", "randomized-baseline,find-collision",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    algs = {r["algorithm"] for r in doc["rows"]}
    assert algs == {"randomized-baseline", "find-collision"}
    assert doc["summary"]["failures"] == 0


def test_verify_pairs(capsys):
    code, out, _ = run(capsys, "verify-pairs", "--family", "abelian:128", "--construction", "abelian-recursive")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == len(parse_family("abelian:128"))
    assert all(r["verified"] == "True" and r["within_limit"] == "True" for r in rows)
    code, out, _ = run(capsys, "verify-pairs", "--family", "nonabelian:60", "--construction", "randomized",
                       "--seeds", "3")
    assert code == 0
    code, out, _ = run(capsys, "verify-pairs", "--family", "")
    assert code == 0 and out.strip() == ",".join(
        ["group", "n", "construction", "seed", "s1", "s2", "limit", "verified", "within_limit"])


def test_plotdata_writes_csv_and_png(capsys, tmp_path):
    sweep_csv = tmp_path / "sweep.csv"
    assert run(capsys, "sweep", "--family", "abelian:16", "--algs", "find-collision",
               "--out", str(sweep_csv))[0] == 0
    series = tmp_path / "series.csv"
    assert run(capsys, "plotdata", str(sweep_csv), "--out", str(series))[0] == 0
    rows = list(csv.DictReader(series.open()))
    assert rows and {"algorithm", "n_over_m", "mean_queries", "mean_bound"} <= set(rows[0])
    png = tmp_path / "series.png"
    assert png.exists() and png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_transcript_export(capsys, tmp_path):
    path = tmp_path / "t.json"
    run(capsys, "run", "--group", "Z8", "--hidden", "4", "--alg", "find-collision", "--transcript", str(path))
    records = json.loads(path.read_text())
    assert [r["element"] for r in records] == [0, 1, 0, 1, 4, 5]
    assert all(set(r) == {"element", "label"} for r in records)


def test_subgroups_command(capsys):
    code, out, _ = run(capsys, "subgroups", "--group", "A4")
    assert code == 0 and json.loads(out)["orders"] == [1, 2, 3, 4, 12]


def test_output_is_byte_deterministic():
    args = [sys.executable, "-m", "hsplab", "run", "--group", "D6", "--hidden", "perm:(1 2 3 4 5 6)",
            "--alg", "find-subgroup", "--seed", "3", "--trace"]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b and a


def test_instance_spec_round_trip(capsys):
    spec = InstanceSpec("Z4xZ2", "(1,0),(0,1)", "find-abelian-subgroup", 2, True, True)
    code, out, _ = run(capsys, "run", *spec.to_args())
    assert code == 0
    inst = json.loads(out)["instance"]
    assert InstanceSpec(**inst) == spec


def test_hidden_parsing():
    G = parse_group("Z4xZ2")
    assert split_elements("(1,0), (0,1)") == ["(1,0)", "(0,1)"]
    assert parse_hidden(G, "(1,0),(0,1)").order == 8
    assert parse_hidden(G, "trivial").order == 1
    S4 = parse_group("S4")
    assert parse_hidden(S4, "perm:(1 2),perm:(3 4)").order == 4


def test_abelian_family_counts():
    # number of abelian groups of order n is the product of partition numbers of the exponents
    assert len(abelian_moduli(16)) == 5
    assert len(abelian_moduli(72)) == 6
    assert len(abelian_moduli(7)) == 1
    assert parse_family("") == []
    with pytest.raises(ParseError):
        parse_family("abelian:x")
