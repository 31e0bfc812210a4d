import json
import os
import random

import pytest

from rqlab.arith import is_squarefree
from rqlab.cache import SCHEMA_VERSION, Cache, cache_get, cache_put, make_entry
from rqlab.verdict import InvariantRecord, Verdict, evaluate


def _entry(D):
    rec, v = evaluate(D)
    return make_entry(rec.to_dict(), v.to_dict())


def test_round_trip(tmp_path):
    path = tmp_path / "c.jsonl"
    e = _entry(15)
    cache_put(path, e)
    assert cache_get(path, 15) == e
    assert cache_get(path, 21) is None


def test_empty_cache_misses(tmp_path):
    assert Cache(tmp_path / "nothing.jsonl").get(15) is None
    assert len(Cache(tmp_path / "nothing.jsonl")) == 0


def test_version_bump_is_a_miss(tmp_path):
    path = tmp_path / "c.jsonl"
    cache_put(path, _entry(15))
    assert cache_get(path, 15, schema_version=SCHEMA_VERSION + 1) is None


def test_replace_and_one_line_per_d(tmp_path):
    path = tmp_path / "c.jsonl"
    c = Cache(path)
    c.put(_entry(15))
    c.put(_entry(85))
    c.put(_entry(15))
    lines = path.read_text().splitlines()
    assert [json.loads(x)["d"] for x in lines] == [15, 85]
    assert [f for f in os.listdir(tmp_path) if f.startswith(".rqlab")] == []


def test_corrupt_cache_reports_path(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text("{not json\n")
    with pytest.raises(OSError, match="c.jsonl:1"):
        Cache(path).get(15)


def test_unwritable_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError, match="cannot (read|write) cache"):
        cache_put(blocker / "c.jsonl", _entry(15))


def test_cached_equals_fresh_100_random(tmp_path):
    rng = random.Random(20240)
    pool = [D for D in range(2, 30001) if is_squarefree(D)]
    sample = sorted(rng.sample(pool, 100))
    path = tmp_path / "c.jsonl"
    Cache(path).put_many([_entry(D) for D in sample])
    reloaded = Cache(path)
    for D in sample:
        e = reloaded.get(D)
        rec, v = evaluate(D)
        assert InvariantRecord.from_dict(e["record"]) == rec
        assert Verdict.from_dict(e["verdict"]) == v
