import csv
import io
import json
from collections import Counter

import pytest

from rqlab import cli
from rqlab.verdict import InconsistencyError


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_analyze_15():
    code, text = run("analyze", "15")
    assert code == 0
    assert "X_inf = C2 (proven; Proposition on D=pq, p=5 mod 8, q=3 mod 4)" in text


def test_analyze_invalid(capsys):
    assert run("analyze", "12")[0] == 1
    assert "squarefree" in capsys.readouterr().err
    assert run("analyze", "1")[0] == 1
    assert run("analyze", str(10**7 + 1))[0] == 1
    with pytest.raises(SystemExit) as exc:
        run("analyze", "abc")
    assert exc.value.code == 1


def test_analyze_out_of_scope():
    code, text = run("analyze", "205", "--json")
    assert code == 2
    assert json.loads(text)["record"]["case"] == "OutOfScope"


def test_analyze_json_is_stable():
    assert run("analyze", "221", "--json") == run("analyze", "221", "--json")


def test_analyze_uses_env_cache(tmp_path, monkeypatch):
    path = tmp_path / "env.jsonl"
    monkeypatch.setenv("RQLAB_CACHE", str(path))
    first = run("analyze", "85", "--json")
    assert path.exists()
    assert run("analyze", "85", "--json") == first


def test_unit():
    code, text = run("unit", "442")
    assert code == 0 and "21 + 1*sqrt(442)" in text and "norm = -1" in text and "[21; 42]" in text
    assert run("unit", "49")[0] == 1


def test_scan_empty():
    code, text = run("scan", "--case", "2", "--max-d", "0")
    assert code == 0
    assert text.splitlines() == [",".join(cli.CSV_FIELDS)]


def test_scan_case3_contains_fixtures():
    code, text = run("scan", "--case", "3", "--max-d", "10000")
    rows = {int(r["d"]): r for r in csv.DictReader(io.StringIO(text))}
    assert rows[85]["verdict"] == "A0=C2"
    assert rows[221]["verdict"] == "A1(order 4)" and rows[221]["a1"] == "4"
    assert all(r["case"] == "Case3" for r in rows.values())


def test_scan_parallel_identical(tmp_path):
    outs = []
    for jobs in (1, 4, 8):
        path = tmp_path / f"s{jobs}.csv"
        assert run("scan", "--max-d", "4000", "--jobs", str(jobs), "--out", str(path))[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_csv_and_json_same_fields():
    _, c = run("scan", "--case", "1", "--max-d", "3000")
    _, j = run("scan", "--case", "1", "--max-d", "3000", "--format", "json")
    rows_c = list(csv.DictReader(io.StringIO(c)))
    rows_j = json.loads(j)
    assert len(rows_c) == len(rows_j) > 0
    norm = lambda x: "" if x is None else ("true" if x is True else "false" if x is False else str(x))
    assert Counter(tuple(sorted(r.items())) for r in rows_c) == Counter(
        tuple(sorted((k, norm(v)) for k, v in r.items())) for r in rows_j
    )


def test_scan_filters():
    _, text = run("scan", "--case", "2", "--max-d", "30000", "--legendre", "-1", "--max-prime", "700")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows and all(r["case"] == "Case2" for r in rows)
    assert 9645 in {int(r["d"]) for r in rows}
    assert run("scan", "--max-d", "-5")[0] == 1


def test_scan_cache_reuse(tmp_path):
    cache = tmp_path / "c.jsonl"
    a = run("scan", "--max-d", "3000", "--cache", str(cache))
    b = run("scan", "--max-d", "3000", "--cache", str(cache))
    assert a == b
    assert len(cache.read_text().splitlines()) == len(a[1].splitlines()) - 1


def test_scan_inconsistency_writes_partial(tmp_path, monkeypatch):
    real = cli.evaluate

    def broken(D):
        if D == 85:
            raise InconsistencyError("forced")
        return real(D)

    monkeypatch.setattr(cli, "evaluate", broken)
    out = tmp_path / "partial.csv"
    code, _ = run("scan", "--case", "3", "--max-d", "1000", "--out", str(out))
    assert code == 3
    ds = [int(r["d"]) for r in csv.DictReader(out.open())]
    assert 85 not in ds and 221 in ds


def test_verify_scholz():
    code, text = run("verify", "--suite", "scholz")
    assert code == 0 and "210/210 pairs match" in text


def test_verify_failure_exit(monkeypatch):
    from rqlab import suites

    def bad():
        r = suites.SuiteResult("fake")
        r.check(False, "D=1: forced")
        return r

    monkeypatch.setitem(suites.SUITES, "fixtures", bad)
    code, text = run("verify", "--suite", "fixtures")
    assert code == 3 and "first counterexample: D=1: forced" in text
