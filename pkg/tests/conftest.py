"""
Shared fixtures and the acceptance summary.

`tiny_corpus` builds one session-wide batch of small random instances
with their oracle solutions; the exact, heuristic, and acceptance
tests all reuse it so the oracle runs once.  After the run, a summary
line per acceptance criterion is printed, aggregated from the tests
named test_criterion_<n>_* in test_acceptance.py.
"""

from __future__ import annotations

import re

import pytest

import mothership as m

CORPUS_SHAPES = ((1, 1, 2), (1, 2, 3), (2, 1, 3), (2, 2, 4), (2, 2, 5))
PER_SHAPE = 50


@pytest.fixture(scope="session")
def tiny_corpus():
    """(instance, oracle report) pairs; infeasible seeds are skipped.

    Seeds run consecutively from 0, so the corpus is one fixed,
    reproducible population of at least 200 feasible instances.
    """
    out = []
    seed = 0
    for ns, nr, nc in CORPUS_SHAPES:
        kept = 0
        while kept < PER_SHAPE:
            instance = m.generate(seed, ns, nr, nc, robot_range=200.0)
            seed += 1
            try:
                report = m.solve_oracle(instance)
            except m.InfeasibleInstanceError:
                continue
            out.append((instance, report))
            kept += 1
    return out


_CRITERION = re.compile(r"test_acceptance\.py::.*test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter):
    buckets: dict[int, dict[str, int]] = {}
    for status in ("passed", "failed", "error", "xfailed", "xpassed", "skipped"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            match = _CRITERION.search(nodeid)
            if not match:
                continue
            n = int(match.group(1))
            buckets.setdefault(n, {})
            buckets[n][status] = buckets[n].get(status, 0) + 1
    if not buckets:
        return
    tw = terminalreporter
    tw.section("acceptance criteria")
    for n in sorted(buckets):
        counts = buckets[n]
        bad = counts.get("failed", 0) + counts.get("error", 0) + counts.get("xpassed", 0)
        xfails = counts.get("xfailed", 0)
        if bad:
            verdict = "FAIL"
        elif xfails:
            verdict = f"PASS ({xfails} sub-check expected-fail; reason in its test docstring)"
        else:
            verdict = "PASS"
        tw.write_line(f"criterion {n}: {verdict}")
