import json
import subprocess
import sys

import pytest

from icbdual.cli import Cache, CorruptCacheEntry, cache_key, main, parse_grid, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_basis_icb_table(capsys, tmp_path):
    code, out, _ = run(capsys, "basis", "icb", "--parity", "even", "--r", "0", "--m", "1",
                       "--L0", "2", "--L1", "1", "--format", "table", "--cache-dir", str(tmp_path))
    assert code == 0
    assert out.splitlines() == [
        "index   expansion",
        "(-1/2)  M(-1/2) + (v^2)*M(1/2)",
        "(1/2)   M(1/2)",
    ]


def test_basis_lbasis_odd(capsys, tmp_path):
    code, out, _ = run(capsys, "basis", "lbasis", "--parity", "odd", "--r", "1", "--m", "1",
                       "--L0", "0", "--L1", "1", "--cache-dir", str(tmp_path))
    assert code == 0
    rec = json.loads(out)
    assert [(e["index"], e["expansion"]) for e in rec["basis"]] == [
        ("(-1)", [["(-1)", "1"]]), ("(0)", [["(0)", "1"]]), ("(1)", [["(1)", "1"]]),
    ]


def test_repeat_is_cached_and_identical(capsys, tmp_path):
    args = ["basis", "icb", "--parity", "odd", "--r", "1", "--m", "2", "--L0", "2",
            "--L1", "1", "--cache-dir", str(tmp_path)]
    _, first, _ = run(capsys, *args)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    stamp = files[0].stat().st_mtime_ns
    _, second, _ = run(capsys, *args)
    assert first == second
    assert files[0].stat().st_mtime_ns == stamp
    # and identical to a fresh computation without cache
    _, third, _ = run(capsys, *args[:-2], "--no-cache")
    assert third == first


def test_tampered_cache_is_recomputed(capsys, tmp_path, caplog):
    args = ["basis", "lbasis", "--parity", "even", "--r", "0", "--m", "1", "--L0", "3",
            "--cache-dir", str(tmp_path)]
    _, first, _ = run(capsys, *args)
    f = next(tmp_path.glob("*.json"))
    rec = json.loads(f.read_text())
    rec["payload"]["basis"][0]["expansion"][0][1] = "v^7"
    f.write_text(json.dumps(rec))
    with caplog.at_level("WARNING"):
        _, second, _ = run(capsys, *args)
    assert second == first
    assert "corrupt cache entry" in caplog.text
    assert json.loads(f.read_text())["payload"] == json.loads(first)


def test_cache_store_load(tmp_path):
    c = Cache(tmp_path)
    key = {"command": "x", "L0": 1}
    c.store(key, {"a": [1, 2]})
    assert c.load(key) == {"a": [1, 2]}
    assert c.load({"command": "x", "L0": 2}) is None
    assert cache_key({"L0": 1, "L1": 1}) != cache_key({"L0": 2, "L1": 1})
    assert cache_key({"L0": 1, "L1": 1}) == cache_key({"L1": 1, "L0": 1})
    path = next(tmp_path.glob("*.json"))
    path.write_text("{not json")
    with pytest.raises(CorruptCacheEntry):
        c.load(key)
    assert not list(tmp_path.glob(".tmp-*"))


def test_env_cache_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ICBDUAL_CACHE_DIR", str(tmp_path / "env"))
    code, _, _ = run(capsys, "basis", "lbasis", "--r", "0")
    assert code == 0
    assert list((tmp_path / "env").glob("*.json"))


def test_verify_h0(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "h0-lemma", "--parity", "odd", "--r", "1", "--L0", "1",
                       "--L1", "1", "--cache-dir", str(tmp_path))
    assert code == 0
    rep = json.loads(out)
    assert rep["check"] == "h0-lemma" and rep["status"] == "pass"


def test_verify_grid(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "equality", "--grid", "default", "--m", "2",
                       "--cache-dir", str(tmp_path))
    assert code == 0
    reps = json.loads(out)
    assert [(r["params"]["L0"], r["params"]["L1"]) for r in reps] == [(1, 1), (0, 1), (2, 1), (-1, 1), (3, 2)]
    assert all(r["status"] == "pass" for r in reps)
    code, out2, _ = run(capsys, "verify", "equality", "--grid", "default", "--m", "2",
                        "--cache-dir", str(tmp_path))
    assert out2 == out


def test_verify_worker_pool_matches_serial(capsys, tmp_path):
    args = ["verify", "commutation", "--grid", "1,1;2,1;3,2", "--m", "2", "--no-cache"]
    _, serial, _ = run(capsys, *args)
    _, pooled, _ = run(capsys, *args, "--jobs", "2")
    assert serial == pooled


def test_verify_centralizer_certify(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "centralizer", "--parity", "odd", "--r", "1", "--m", "2",
                       "--grid", "1,1", "--certify", "--format", "table", "--no-cache")
    assert code == 0
    assert out.split() == ["centralizer", "odd", "r=1", "m=2", "L=(1,1)", "pass"]


def test_verification_failure_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "centralizer", "--m", "2", "--wordcap", "0", "--no-cache")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_usage_errors(capsys):
    code, _, err = run(capsys, "verify", "equality", "--parity", "odd", "--r", "0", "--no-cache")
    assert code == 2
    assert json.loads(err)["error"] == "usage"
    code, _, err = run(capsys, "verify", "equality", "--grid", "1;2", "--no-cache")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["basis", "nonsense"])
    assert exc.value.code == 2
    with pytest.raises(UsageError):
        parse_grid("a,b")


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "icbdual", "basis", "icb", "--r", "0", "--L0", "-1", "--format", "table",
         "--cache-dir", str(tmp_path)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "(-1/2)  M(-1/2) + (-v)*M(1/2)"
