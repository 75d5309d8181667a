"""Curated worked examples with expected values, checked on demand."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .jobs import parse_job
from .runner import hilbert, support
from .support import ProjPoint


@dataclass(frozen=True)
class Outcome:
    label: str
    passed: bool
    detail: str = ""

    def __str__(self):
        word = "PASS" if self.passed else "FAIL"
        return f"{word}  {self.label}" + (f"  ({self.detail})" if self.detail else "")


def load_catalog() -> dict:
    text = resources.files("kozhom").joinpath("data/catalog.json").read_text()
    return json.loads(text)


def names() -> list[str]:
    return sorted(load_catalog())


def _support_outcome(label, job, expect):
    rep, hc = support(job)
    got = sorted(rep.points)
    if "points" in expect:
        want = sorted(ProjPoint(tuple(c), rep.q) for c in expect["points"])
        ok = got == want
    elif expect.get("empty"):
        ok = rep.is_empty
    elif expect.get("full"):
        ok = rep.is_full
    else:
        form = ProjPoint(tuple(expect["hyperplane"]), rep.q)
        ok = hc.kind == "contained-in-hyperplane" and hc.exact and hc.forms == (form,)
    return Outcome(label, ok, f"{rep.summary()}; {hc}")


def run_check(check: dict) -> Outcome:
    label, expect = check["label"], check["expect"]
    job = parse_job(check["job"])
    kind = check["kind"]
    if kind == "support":
        return _support_outcome(label, job, expect)
    if kind == "hilbert":
        vals = list(hilbert(job).values(0))
        ok = vals == list(expect)
        detail = "" if ok else f"got {vals}, expected {list(expect)}"
        return Outcome(label, ok, detail)
    if kind == "vanishing":
        lo, hi = expect
        h = hilbert(job, dmax=hi)
        bad = [d for d in range(lo, hi + 1) if h[d]]
        return Outcome(label, not bad, f"nonzero at {bad}" if bad else "")
    if kind == "annihilator":
        rep, _ = support(job)
        got = str(rep.annihilator)
        return Outcome(label, got == expect, got)
    raise ValueError(f"unknown check kind {kind!r}")


def reproduce(name: str) -> list[Outcome]:
    cat = load_catalog()
    if name not in cat:
        raise KeyError(f"unknown catalog entry {name!r}; available: {', '.join(sorted(cat))}")
    return [run_check(c) for c in cat[name]["checks"]]
