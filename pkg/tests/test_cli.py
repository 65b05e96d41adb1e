"""The goodmat command line: outputs, exit codes, sharding, and merging."""

import json

import pytest

from goodmat.cli import run_cli
from goodmat.pipeline import SearchReport
from goodmat.satsearch import parse_dimacs
from goodmat.seqcore import read_quads, write_quads


def run(capsys, *argv):
    code = run_cli([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ── happy paths ──────────────────────────────────────────────────────────────

def test_rowsums(capsys):
    code, out, _ = run(capsys, "rowsums", 15)
    assert code == 0
    assert out.splitlines() == ["-5 -5 3", "-1 3 7"]


def test_candidates_writes_files(tmp_path, capsys):
    code, out, _ = run(capsys, "candidates", 9, "--out", tmp_path)
    assert code == 0
    assert "|s_sk|=4 |s_sy|=6" in out
    assert (tmp_path / "s_sk.txt").exists()
    assert (tmp_path / "s_sy.txt").exists()


def test_match_writes_file(tmp_path, capsys):
    code, out, _ = run(capsys, "match", 9, "--out", tmp_path)
    assert code == 0
    assert "|S_q|=24" in out
    assert (tmp_path / "s_q.txt").exists()


def test_enumerate_full_run(tmp_path, capsys):
    code, out, _ = run(capsys, "enumerate", 9, "--out", tmp_path)
    assert code == 0
    assert "inequivalent=1" in out
    rows = tmp_path / "solutions-n9.rows"
    report = tmp_path / "report-n9.json"
    manifest = tmp_path / "manifest-n9.json"
    assert rows.exists() and report.exists() and manifest.exists()
    with open(rows) as fp:
        assert len(read_quads(fp)) == 1
    loaded = SearchReport.from_json(report.read_text())
    assert loaded.n == 9 and loaded.exhaustive
    assert len(json.loads(manifest.read_text())) == 2


def test_enumerate_dimacs_export(tmp_path, capsys):
    code, _, _ = run(capsys, "enumerate", 9, "--out", tmp_path, "--dimacs")
    assert code == 0
    cnfs = sorted(tmp_path.glob("instance-n9-*.cnf"))
    assert len(cnfs) == 2
    nvars, clauses = parse_dimacs(cnfs[0].read_text())
    assert nvars == 20 and clauses


def test_verify_good_file(tmp_path, capsys, known27):
    path = tmp_path / "q.rows"
    with open(path, "w") as fp:
        write_quads(fp, [known27])
    code, out, _ = run(capsys, "verify", path)
    assert code == 0
    assert "definition=OK" in out and "hadamard=OK" in out
    assert "all 1 quads verified" in out


def test_hadamard_outputs_rows(tmp_path, capsys, known3):
    path = tmp_path / "q.rows"
    with open(path, "w") as fp:
        write_quads(fp, [known3])
    out_path = tmp_path / "h.rows"
    code, out, _ = run(capsys, "hadamard", path, "--out", out_path)
    assert code == 0
    assert "order 12" in out
    lines = [l for l in out_path.read_text().splitlines() if l]
    assert len(lines) == 12 and all(len(l) == 12 for l in lines)


def test_oracle(tmp_path, capsys):
    code, out, _ = run(capsys, "oracle", 9, "--out", tmp_path)
    assert code == 0
    assert "1 inequivalent" in out
    assert (tmp_path / "oracle-n9.rows").exists()


def test_solve_shards_and_report_merge(tmp_path, capsys):
    for i in range(3):
        code, _, _ = run(capsys, "solve", 15, "--shard", f"{i}/3", "--out", tmp_path)
        assert code == 0
    code, out, _ = run(capsys, "report", tmp_path)
    assert code == 0
    assert "inequivalent=11" in out and "coverage complete" in out
    merged = SearchReport.from_json((tmp_path / "report-n15-merged.json").read_text())
    assert merged.exhaustive and merged.inequivalent_count == 11
    with open(tmp_path / "solutions-n15-merged.rows") as fp:
        assert len(read_quads(fp)) == 11


def test_report_flags_missing_shard(tmp_path, capsys):
    for i in (0, 2):
        run(capsys, "solve", 15, "--shard", f"{i}/3", "--out", tmp_path)
    code, out, _ = run(capsys, "report", tmp_path)
    assert code == 0
    assert "INCOMPLETE" in out
    merged = SearchReport.from_json((tmp_path / "report-n15-merged.json").read_text())
    assert not merged.exhaustive


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert out.startswith("goodmat ")


# ── failure paths ────────────────────────────────────────────────────────────

def test_usage_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "rowsums", 14)[0] == 2          # even order
    assert run(capsys, "enumerate", 45)[0] == 2        # needs --allow-large
    assert run(capsys, "verify", tmp_path / "nope")[0] == 2
    assert run(capsys, "solve", 15, "--shard", "3/3")[0] == 2
    assert run(capsys, "solve", 15, "--shard", "x")[0] == 2
    assert run(capsys, "definitely-not-a-command")[0] == 2
    assert run(capsys, "report", tmp_path)[0] == 2     # no reports in dir


def test_verification_failure_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.rows"
    bad.write_text("+++\n+-+\n++-\n+--\n\n")
    code, out, err = run(capsys, "verify", bad)
    assert code == 1
    assert "FAIL" in out
    assert "failed verification" in err


def test_budget_overrun_exits_1_with_partial_outputs(tmp_path, capsys):
    code, out, err = run(capsys, "enumerate", 15, "--max-conflicts", 1,
                         "--out", tmp_path)
    assert code == 1
    assert "not exhaustive" in err
    report = SearchReport.from_json((tmp_path / "report-n15.json").read_text())
    assert report.exhaustive is False


def test_mixed_order_report_dir_exits_2(tmp_path, capsys):
    run(capsys, "enumerate", 9, "--out", tmp_path)
    run(capsys, "enumerate", 15, "--out", tmp_path)
    code, _, err = run(capsys, "report", tmp_path)
    assert code == 2
    assert "mixed orders" in err
