import csv
import io
import json

import pytest

from conftest import FIB7
from slpmatch import cli


@pytest.fixture
def fib7_path(tmp_path):
    path = tmp_path / "fib7.slp"
    path.write_text(FIB7)
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_kv(out):
    return dict(line.split("=", 1) for line in out.splitlines())


def test_match_found(capsys, fib7_path):
    code, out, _ = run(capsys, "match", fib7_path, "--pattern", "ababa")
    kv = parse_kv(out)
    assert code == 0 and kv["found"] == "true"
    assert "counters.concat_queries" in kv and "timings.match_us" in kv


def test_match_not_found(capsys, fib7_path):
    code, out, _ = run(capsys, "match", fib7_path, "--pattern", "bb")
    assert code == 1 and parse_kv(out)["found"] == "false"


def test_match_json_round_trip(capsys, fib7_path):
    code, out, _ = run(capsys, "match", fib7_path, "--pattern", "abaab", "--json")
    report = json.loads(out)
    assert code == 0 and report["found"] is True
    assert set(report["counters"]) == {"wa_queries", "concat_queries", "lcp_calls", "sort_calls"}
    assert all(v >= 0 for v in report["counters"].values())


def test_pattern_file(capsys, fib7_path, tmp_path):
    pf = tmp_path / "p.bin"
    pf.write_bytes(b"baab")
    code, _, _ = run(capsys, "match", fib7_path, "--pattern-file", str(pf))
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["match", "missing.slp", "--pattern", "a"],
    ["match", "FIB", "--pattern", "a", "--pattern-file", "x"],
    ["match", "FIB"],
    ["decompress", "BAD"],
])
def test_errors_exit_2(capsys, fib7_path, tmp_path, argv):
    bad = tmp_path / "bad.slp"
    bad.write_text("2\nN 1 2\nT a\n")
    argv = [fib7_path if a == "FIB" else str(bad) if a == "BAD" else a for a in argv]
    code, out, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_gen_fibonacci_and_determinism(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--seed", "1", "--shape", "fibonacci", "--n", "7")
    assert code == 0 and out.strip() == FIB7.strip()
    a = run(capsys, "gen", "--seed", "1", "--n", "40", "--alphabet", "abc")[1]
    b = run(capsys, "gen", "--seed", "1", "--n", "40", "--alphabet", "abc")[1]
    assert a == b
    out_path = tmp_path / "g.slp"
    run(capsys, "gen", "--seed", "1", "--n", "40", "--alphabet", "abc", "-o", str(out_path))
    assert out_path.read_text() == a


def test_gen_power_k(capsys):
    code, out, _ = run(capsys, "gen", "--shape", "power", "--k", "40")
    assert code == 0 and out.splitlines()[0] == "41"


def test_decompress(capsysbinary, fib7_path):
    assert cli.main(["decompress", fib7_path]) == 0
    assert capsysbinary.readouterr().out == b"abaababaabaab"
    assert cli.main(["decompress", fib7_path, "--limit", "5"]) == 2


def test_verify(capsys, fib7_path, tmp_path, monkeypatch):
    code, out, _ = run(capsys, "verify", fib7_path, "--pattern", "ababa")
    assert code == 0 and parse_kv(out)["agree"] == "true"
    power = tmp_path / "power.slp"
    run(capsys, "gen", "--shape", "power", "--k", "40", "-o", str(power))
    code, _, err = run(capsys, "verify", str(power), "--pattern", "aa", "--limit", "1000")
    assert code == 0 and "warning" in err
    monkeypatch.setattr(cli, "oracle_match", lambda slp, p, config: (False, None))
    code, out, _ = run(capsys, "verify", fib7_path, "--pattern", "ababa")
    assert code == 3 and parse_kv(out)["agree"] == "false"


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--n", "1", "64", "128", "--m", "8", "--seed", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["n", "m", "N_or_cap", "wa_queries", "concat_queries", "micros"]
    assert [r["n"] for r in rows] == ["1", "64", "128"]
    again = list(csv.DictReader(io.StringIO(run(capsys, "bench", "--n", "1", "64", "128", "--m",
                                                    "8", "--seed", "3")[1])))
    strip = lambda rs: [{k: v for k, v in r.items() if k != "micros"} for r in rs]
    assert strip(rows) == strip(again)
