import json

import pytest

from negpell.cli import (
    EXIT_IO,
    EXIT_MISSING,
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_USAGE,
    EXIT_VERIFY,
    main,
)
from negpell.sweep import CSV_HEADER


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_tiny(tmp_path, capsys):
    cache = tmp_path / "c.csv"
    code, out, _ = run(capsys, "analyze", "--max", 5, "--cache", cache)
    assert code == EXIT_OK
    assert cache.read_text() == CSV_HEADER + "\n5,1,0,0,0,1,1\n"
    assert "count_D" in out


def test_analyze_rows_sorted_and_idempotent(tmp_path, capsys):
    cache = tmp_path / "c.csv"
    assert run(capsys, "analyze", "--max", "1e4", "--cache", cache)[0] == EXIT_OK
    first = cache.read_bytes()
    lines = first.decode().splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 1139
    Ds = [int(l.split(",")[0]) for l in lines[1:]]
    assert Ds == sorted(Ds)
    assert run(capsys, "analyze", "--max", "1e4", "--cache", cache)[0] == EXIT_OK
    assert cache.read_bytes() == first


def test_analyze_resume_and_threads_give_same_bytes(tmp_path, capsys):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    run(capsys, "analyze", "--max", 20000, "--cache", a, "--oracle-bound", 0)
    run(capsys, "analyze", "--max", 20000, "--cache", b, "--oracle-bound", 0, "--threads", 2)
    run(capsys, "analyze", "--max", 7000, "--cache", c, "--oracle-bound", 0)
    run(capsys, "analyze", "--max", 20000, "--cache", c, "--oracle-bound", 0)
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_json_summary_has_sorted_keys(tmp_path, capsys):
    code, out, _ = run(capsys, "analyze", "--max", 2000, "--cache", tmp_path / "c.csv", "--format", "json")
    assert code == EXIT_OK
    rec = json.loads(out)[0]
    assert list(rec) == sorted(rec)
    assert rec["count_D"] == 247


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# sweep\nmax = 10**3\ncache = {tmp_path / 'c.csv'}\noracle-bound=500\n")
    code, out, _ = run(capsys, "analyze", "--config", cfg)
    assert code == EXIT_OK and "1000," in out
    code, out, _ = run(capsys, "analyze", "--config", cfg, "--max", 100)
    assert code == EXIT_OK and "100," in out


def test_bad_config_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "analyze", "--config", cfg)[0] == EXIT_USAGE


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_unwritable_cache_is_io_error(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", "--max", 100, "--cache", tmp_path / "missing" / "c.csv")
    assert code == EXIT_IO and err


def test_corrupt_cache_is_io_error(tmp_path, capsys):
    cache = tmp_path / "c.csv"
    cache.write_text("D,x\n")
    assert run(capsys, "analyze", "--max", 100, "--cache", cache)[0] == EXIT_IO


def test_tampered_cache_fails_verification(tmp_path, capsys):
    cache = tmp_path / "c.csv"
    run(capsys, "analyze", "--max", 5, "--cache", cache)
    cache.write_text(CSV_HEADER + "\n5,1,0,0,0,0,1\n")
    assert run(capsys, "analyze", "--max", 5, "--cache", cache)[0] == EXIT_VERIFY


def test_density_needs_cache(tmp_path, capsys):
    cache = tmp_path / "c.csv"
    assert run(capsys, "density", "--max", 10 ** 4, "--cache", cache)[0] == EXIT_MISSING
    code, out, _ = run(capsys, "density", "--max", 10 ** 4, "--cache", cache, "--build")
    assert code == EXIT_OK
    assert "constant,alpha,0.4194224418" in out
    assert "constant,beta,1.2832651213" in out
    line = next(l for l in out.splitlines() if l.startswith('nm,"n=1,m=0"'))
    assert line.split(",")[-2] == "0.1048556104"
    for l in out.splitlines():
        if l.startswith("nm,"):
            assert l.split(",")[-1] != ""


def test_density_resource_bound(tmp_path, capsys):
    assert run(capsys, "density", "--max", 10 ** 9, "--cache", tmp_path / "c.csv")[0] == EXIT_RESOURCE


def test_verify_markov(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "markov")
    assert code == EXIT_OK
    assert all(l.startswith("PASS") for l in out.splitlines())


def test_verify_redei_seeded(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "redei", "--trials", 50, "--seed", 42)
    assert code == EXIT_OK and "FAIL" not in out


def test_verify_needs_suite(capsys):
    assert run(capsys, "verify")[0] == EXIT_USAGE


def test_spacing_table(capsys):
    code, out, _ = run(capsys, "spacing", "--max", 10 ** 5)
    assert code == EXIT_OK
    assert "count,consistent,1" in out
    assert "window,r=1" in out and "window,r=2" in out
    assert out.count("y1_ladder") == 3


def test_spacing_resource_bound(capsys):
    assert run(capsys, "spacing", "--max", 10 ** 9)[0] == EXIT_RESOURCE
