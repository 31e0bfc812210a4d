"""JSON-lines cache of evaluated records, one line per D.

Writes go through a temporary file in the same directory followed by
``os.replace``, so a reader never sees a half-written cache.  Entries with a
different ``schema_version`` count as misses.
"""

from __future__ import annotations

import json
import os
import tempfile
from datetime import datetime, timezone

from . import __version__

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "Cache", "make_entry", "cache_get", "cache_put"]


def make_entry(record: dict, verdict: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "d": record["d"],
        "record": record,
        "verdict": verdict,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


class Cache:
    def __init__(self, path: str, schema_version: int = SCHEMA_VERSION):
        self.path = os.fspath(path)
        self.schema_version = schema_version
        self._entries: dict[int, dict] | None = None

    def _load(self) -> dict[int, dict]:
        if self._entries is not None:
            return self._entries
        try:
            with open(self.path, encoding="utf-8") as fh:
                lines = fh.readlines()
        except FileNotFoundError:
            lines = []
        except OSError as exc:
            raise OSError(f"cannot read cache {self.path}: {exc}") from exc
        entries: dict[int, dict] = {}
        for n, line in enumerate(lines, 1):
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError as exc:
                raise OSError(f"{self.path}:{n}: corrupt cache line ({exc})") from exc
            entries[int(entry["d"])] = entry
        self._entries = entries
        return entries

    def get(self, D: int) -> dict | None:
        entry = self._load().get(D)
        if entry is None or entry.get("schema_version") != self.schema_version:
            return None
        return entry

    def put_many(self, entries) -> None:
        current = self._load()
        for entry in entries:
            current[int(entry["d"])] = entry
        self._write(current)

    def put(self, entry: dict) -> None:
        self.put_many([entry])

    def __len__(self):
        return len(self._load())

    def _write(self, entries: dict[int, dict]) -> None:
        directory = os.path.dirname(os.path.abspath(self.path))
        tmp = None
        try:
            os.makedirs(directory, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=".rqlab-cache-", dir=directory)
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                for D in sorted(entries):
                    fh.write(json.dumps(entries[D], sort_keys=True) + "\n")
            os.replace(tmp, self.path)
        except OSError as exc:
            if tmp and os.path.exists(tmp):
                os.unlink(tmp)
            raise OSError(f"cannot write cache {self.path}: {exc}") from exc


def cache_get(path: str, D: int, schema_version: int = SCHEMA_VERSION) -> dict | None:
    return Cache(path, schema_version).get(D)


def cache_put(path: str, entry: dict) -> None:
    Cache(path).put(entry)
