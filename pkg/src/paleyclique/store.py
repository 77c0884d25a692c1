"""Append-only CSV store of clique-number results.

The first line is a version marker, the second the column header.  Witness
cliques are embedded as JSON in a quoted field.  Writers hold an exclusive
``fcntl`` lock on the file for the duration of an append.
"""

from __future__ import annotations

import csv
import fcntl
import json
import os
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

STORE_VERSION = "# paleyclique-store v1"
COLUMNS = ["q", "p", "r", "omega", "exact", "method", "witness", "timestamp", "version"]


def default_store_path() -> Path:
    env = os.environ.get("PALEY_STORE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "paleyclique" / "results.csv"


@dataclass(frozen=True)
class StoreRow:
    q: int
    p: int
    r: int
    omega: int
    exact: bool
    method: str
    witness: tuple[int, ...]
    timestamp: str
    version: str

    def to_csv(self) -> list[str]:
        return [str(self.q), str(self.p), str(self.r), str(self.omega),
                "true" if self.exact else "false", self.method,
                json.dumps({"q": self.q, "vertices": list(self.witness), "exact": self.exact}),
                self.timestamp, self.version]

    @classmethod
    def from_csv(cls, rec: dict) -> "StoreRow":
        witness = json.loads(rec["witness"]) if rec["witness"] else {"vertices": []}
        return cls(int(rec["q"]), int(rec["p"]), int(rec["r"]), int(rec["omega"]),
                   rec["exact"] == "true", rec["method"], tuple(witness["vertices"]),
                   rec["timestamp"], rec["version"])


class ResultsStore:
    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else default_store_path()

    @contextmanager
    def _locked(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a+", newline="") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.seek(0)
                yield fh
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    @staticmethod
    def _parse(fh) -> list[StoreRow]:
        first = fh.readline()
        if not first:
            return []
        if first.strip() != STORE_VERSION:
            raise ValueError(f"unrecognised store header {first.strip()!r}")
        return [StoreRow.from_csv(rec) for rec in csv.DictReader(fh)]

    def rows(self) -> list[StoreRow]:
        if not self.path.exists():
            return []
        with open(self.path, newline="") as fh:
            return self._parse(fh)

    def lookup(self, q: int) -> StoreRow | None:
        """Exact row for q if present, else the largest inexact one."""
        cands = [row for row in self.rows() if row.q == q]
        if not cands:
            return None
        return max(cands, key=lambda row: (row.exact, row.omega))

    def record(self, q: int, p: int, r: int, omega: int, exact: bool, method: str,
               witness, timestamp: str | None = None) -> bool:
        """Append a row; returns False when an exact row for q already exists."""
        with self._locked() as fh:
            existing = self._parse(fh)
            if any(row.q == q and row.exact for row in existing):
                return False
            if exact is False and any(row.q == q and not row.exact and row.omega >= omega
                                      and row.witness == tuple(witness) for row in existing):
                return False
            ts = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
            row = StoreRow(q, p, r, omega, bool(exact), method, tuple(witness), ts, __version__)
            fh.seek(0, os.SEEK_END)
            w = csv.writer(fh, lineterminator="\n")
            if not existing and fh.tell() == 0:
                fh.write(STORE_VERSION + "\n")
                w.writerow(COLUMNS)
            w.writerow(row.to_csv())
            return True
