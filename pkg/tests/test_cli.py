import json
import subprocess
import sys

import pytest

from nihcoll.bphp import from_dimacs, generate_bphp
from nihcoll.cli import emit_csv, format_csv, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gadget_verify(capsys):
    code, out, _ = run(capsys, "gadget", "verify", "--k", "6")
    assert code == 0
    report = json.loads(out)
    assert report["pair_count"] == 32 and report["property1_ok"] and report["property2_ok"]


def test_gadget_dump(capsys, tmp_path):
    code, out, _ = run(capsys, "gadget", "dump", "--k", "2", "--which", "f1")
    # columns e1 and e1 (the sum of e1..e_{k-1}), so the last row is zero
    assert code == 0 and out == "2 2\n11\n00\n"
    path = tmp_path / "m1.txt"
    assert run(capsys, "gadget", "dump", "--k", "3", "--which", "m1", "--out", str(path))[0] == 0
    assert path.read_text().splitlines()[0] == "8 3"


def test_coll_run(capsys, tmp_path):
    csv_path, inst_path = tmp_path / "rounds.csv", tmp_path / "inst.json"
    code, out, _ = run(
        capsys, "coll", "run", "--k", "2", "--ell", "4", "--seed", "1",
        "--csv", str(csv_path), "--save-instance", str(inst_path),
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["sizes"] == [17, 5, 2] and summary["total_bits"] == 17 and summary["verified"]
    lines = csv_path.read_bytes().split(b"\r\n")
    assert lines[0] == b"round,player,live_before,live_after,bits"
    assert lines[1] == b"1,0,17,5,13" and lines[2] == b"2,1,5,2,4"
    code, again, _ = run(capsys, "coll", "run", "--instance", str(inst_path))
    assert code == 0 and json.loads(again) == summary


def test_coll_run_not_guaranteed(capsys):
    code, _, err = run(capsys, "coll", "run", "--k", "2", "--ell", "4", "--m", "16")
    assert code == 2 and "does not exceed" in err


def test_reduce_run(capsys, tmp_path):
    csv_path, art = tmp_path / "t.csv", tmp_path / "a.json"
    code, out, _ = run(
        capsys, "reduce", "run", "--trials", "40", "--seed", "3", "--csv", str(csv_path),
        "--dump-artifact", str(art),
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["intersecting_trials"] == 40 and summary["unsound_verdicts"] == 0
    assert summary["tilde_m"] == 20
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "trial,verdict,real_detected,bits_total" and len(rows) == 41
    assert {r.split(",")[1] for r in rows[1:]} <= {"DISJOINT", "NOT-DISJOINT"}
    artifact = json.loads(art.read_text())
    assert len(artifact["matrix"]) == 20


def test_reduce_run_disjoint_inputs(capsys):
    code, out, _ = run(capsys, "reduce", "run", "--trials", "30", "--inputs", "disjoint", "--solver", "adversarial")
    assert code == 0 and json.loads(out)["disjoint_correct_frequency"] == 1.0


def test_reduce_claims(capsys):
    code, out, _ = run(capsys, "reduce", "claims", "--k", "2", "--m", "2")
    assert code == 0 and json.loads(out)["ok"]


def test_bphp_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "bphp", "gen", "--n", "4", "--m", "5")
    assert code == 0
    assert out.splitlines()[0] == "p cnf 10 40"
    assert from_dimacs(out) == generate_bphp(4, 5)
    dimacs, ineq = tmp_path / "f.cnf", tmp_path / "f.json"
    code, out, _ = run(capsys, "bphp", "gen", "--n", "2", "--m", "3", "--dimacs", str(dimacs), "--ineq", str(ineq))
    assert code == 0 and out == ""
    system = json.loads(ineq.read_text())
    assert system["num_vars"] == 3 and len(system["rows"]) == 6
    assert system["rows"][0] == {"a": [-1, -1, 0], "b": -1}


def test_bphp_gen_bad_n(capsys):
    code, _, err = run(capsys, "bphp", "gen", "--n", "6", "--m", "3")
    assert code == 2 and "power of two" in err


def test_proof_pipeline(capsys, tmp_path):
    proof, dt, system, csv_path = (tmp_path / f for f in ("p.json", "dt.json", "s.json", "r.csv"))
    assert run(capsys, "proof", "synth", "--vars", "5", "--leaves", "12", "--seed", "2", "--out", str(proof))[0] == 0
    code, out, _ = run(capsys, "proof", "convert", "--in", str(proof), "--out", str(dt), "--system-out", str(system))
    assert code == 0
    summary = json.loads(out)
    assert summary["size"] == 12 and summary["depth"] <= summary["depth_bound"]
    code, out, _ = run(
        capsys, "proof", "run", "--dt", str(dt), "--system", str(system), "--partition", "even:3",
        "--exhaustive", "--csv", str(csv_path),
    )
    assert code == 0
    result = json.loads(out)
    assert result["assignments"] == 32 and result["failures"] == 0 and result["k"] == 3
    assert len(csv_path.read_text().splitlines()) == 33
    code, out, _ = run(capsys, "proof", "run", "--dt", str(dt), "--system", str(system), "--assignment", "10110")
    assert code == 0 and json.loads(out)["assignment"] == "10110"


def test_proof_run_bad_assignment(capsys, tmp_path):
    proof, dt, system = (tmp_path / f for f in ("p.json", "dt.json", "s.json"))
    run(capsys, "proof", "synth", "--vars", "3", "--leaves", "4", "--out", str(proof))
    run(capsys, "proof", "convert", "--in", str(proof), "--out", str(dt), "--system-out", str(system))
    code, _, err = run(capsys, "proof", "run", "--dt", str(dt), "--system", str(system), "--assignment", "1x1")
    assert code == 2 and "bits" in err


def test_proof_convert_unsound(capsys, tmp_path):
    bad = {
        "system": {"num_vars": 1, "rows": [{"a": [1], "b": 0}, {"a": [-1], "b": 0}]},
        "root": {"a": [0], "b": -1, "children": [{"axiom": 0}, {"axiom": 1}]},
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _, err = run(capsys, "proof", "convert", "--in", str(path), "--out", str(tmp_path / "dt.json"))
    assert code == 1 and "unsound" in err


def test_bounds_table(capsys, tmp_path):
    code, out, _ = run(capsys, "bounds", "table", "--n", "65536", "--k", "4")
    assert code == 0
    lines = out.split("\r\n")
    assert lines[0] == "n,k,t_lb,size_exponent,corollary_exponent,greedy_upper_bits"
    assert lines[1].startswith("65536,4,512.000000,4.000000,0.125000,")
    code, out, _ = run(capsys, "bounds", "table", "--n", "16")
    assert code == 0 and len(out.strip().split("\r\n")) == 4


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "gadget")[0] == 2
    assert run(capsys, "gadget", "verify")[0] == 2
    assert run(capsys, "coll", "run", "--k", "two")[0] == 2
    assert run(capsys, "proof", "run", "--dt", "x", "--system", "y")[0] == 2
    assert run(capsys, "proof", "convert", "--in", "/nonexistent/p.json", "--out", "x")[0] == 2


def test_help_lists_flags(capsys):
    code, out, _ = run(capsys, "reduce", "run", "--help")
    assert code == 0
    for flag in ("--k", "--m", "--seed", "--solver", "--trials", "--csv", "--dump-artifact"):
        assert flag in out
    code, out, _ = run(capsys, "--help")
    for sub in ("gadget", "coll", "reduce", "bphp", "proof", "bounds"):
        assert sub in out


def test_emit_csv(tmp_path):
    path = tmp_path / "x.csv"
    emit_csv([], path, ["a", "b"])
    assert path.read_bytes() == b"a,b\r\n"
    emit_csv([{"a": i, "b": i / 3} for i in range(3)], path, ["a", "b"])
    lines = path.read_bytes().split(b"\r\n")
    assert lines[:4] == [b"a,b", b"0,0.000000", b"1,0.333333", b"2,0.666667"] and lines[4] == b""
    assert format_csv([{"ok": True}], ["ok"]) == "ok\r\ntrue\r\n"
    with pytest.raises(OSError):
        emit_csv([], tmp_path / "missing" / "x.csv", ["a"])


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "nihcoll", "bounds", "table", "--n", "256", "--k", "2"],
        capture_output=True, check=True,
    ).stdout
    assert out.startswith(b"n,k,t_lb")
