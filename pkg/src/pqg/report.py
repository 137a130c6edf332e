"""Verification reports shared by every verifier."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .scalars import Scalar

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped-boundary"
NUMERIC = "certified-numeric"
UNKNOWN = "unknown"

_FAILING = {FAIL, "failed"}
_SKIPPING = {SKIPPED, "boundary-skipped", UNKNOWN, "not-machine-checked"}
_MAX_WITNESSES = 20


def jsonable(obj):
    """Convert scalars, squares, tuples and sets into plain JSON values."""
    if isinstance(obj, Scalar):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        raise TypeError("floating point values are not reported")
    if hasattr(obj, "key") and callable(obj.key) and isinstance(obj, tuple):
        return obj.key()
    if isinstance(obj, dict):
        return {str(jsonable(k)) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(x) for x in obj), key=str)
    return str(obj)


@dataclass
class AxiomResult:
    axiom: str
    counts: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(v for k, v in self.counts.items() if k in _FAILING)

    @property
    def checked(self) -> int:
        return sum(self.counts.values())

    @property
    def status(self) -> str:
        if self.failed:
            return FAIL
        passing = {k: v for k, v in self.counts.items() if k not in _SKIPPING}
        if not passing:
            if not self.counts:
                return PASS
            return sorted(self.counts)[0]
        if NUMERIC in passing:
            return NUMERIC
        return PASS if set(passing) <= {PASS, NUMERIC} else sorted(passing)[0]

    def to_json(self) -> dict:
        out = {"axiom": self.axiom, "status": self.status, "checked": self.checked,
               "failed": self.failed,
               "counts": {k: self.counts[k] for k in sorted(self.counts)}}
        if self.witnesses:
            out["witnesses"] = jsonable(self.witnesses)
        if self.skipped:
            out["skipped"] = jsonable(self.skipped)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


class VerificationReport:
    """Per-axiom tallies with failure witnesses.

    A report with zero failures certifies exactly the axioms it lists.
    """

    def __init__(self, name: str = ""):
        self.name = name
        self._results: dict[str, AxiomResult] = {}
        self.data: dict = {}

    def _get(self, axiom: str) -> AxiomResult:
        res = self._results.get(axiom)
        if res is None:
            res = self._results[axiom] = AxiomResult(axiom)
        return res

    def record(self, axiom: str, ok, witness=None, status: str | None = None):
        """Record one check.  ``ok`` may be a bool or ``None`` with an explicit status."""
        if status is None:
            status = PASS if ok else FAIL
        res = self._get(axiom)
        res.counts[status] = res.counts.get(status, 0) + 1
        if witness is not None:
            # failure witnesses and skip reasons are kept apart so failures stay localized
            if status in _FAILING:
                if len(res.witnesses) < _MAX_WITNESSES:
                    res.witnesses.append(witness)
            elif status not in (PASS, NUMERIC) and len(res.skipped) < _MAX_WITNESSES:
                res.skipped.append({"status": status, **witness} if isinstance(witness, dict)
                                   else {"status": status, "witness": witness})
        return ok

    def note(self, axiom: str, text: str):
        self._get(axiom).notes.append(text)

    def declare(self, axiom: str):
        self._get(axiom)

    def merge(self, other: "VerificationReport", prefix: str = "") -> "VerificationReport":
        for axiom, res in other._results.items():
            mine = self._get(prefix + axiom)
            for k, v in res.counts.items():
                mine.counts[k] = mine.counts.get(k, 0) + v
            room = _MAX_WITNESSES - len(mine.witnesses)
            mine.witnesses.extend(res.witnesses[:max(room, 0)])
            room = _MAX_WITNESSES - len(mine.skipped)
            mine.skipped.extend(res.skipped[:max(room, 0)])
            mine.notes.extend(res.notes)
        for k, v in other.data.items():
            self.data[prefix + k] = v
        return self

    @property
    def axioms(self) -> list[str]:
        return sorted(self._results)

    def result(self, axiom: str) -> AxiomResult:
        return self._results[axiom]

    def status(self, axiom: str) -> str:
        return self._results[axiom].status

    @property
    def failures(self) -> int:
        return sum(r.failed for r in self._results.values())

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def failed_axioms(self) -> list[str]:
        return [a for a in self.axioms if self._results[a].failed]

    def to_json(self) -> dict:
        checks = [self._results[a].to_json() for a in self.axioms]
        out = {"name": self.name, "checks": checks,
               "summary": {"axioms": len(checks), "failures": self.failures,
                           "ok": self.ok}}
        if self.data:
            out["data"] = jsonable({k: self.data[k] for k in sorted(self.data)})
        return out

    def __repr__(self) -> str:
        return f"<VerificationReport {self.name!r} axioms={len(self._results)} failures={self.failures}>"


# --------------------------------------------------------------------------
# parallel helper

def thread_count() -> int:
    raw = os.environ.get("PQG_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def parallel_map(fn: Callable, items: Iterable) -> list:
    """Map ``fn`` over ``items`` honouring ``PQG_THREADS``; results keep input order."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
