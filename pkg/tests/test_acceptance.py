"""Acceptance criteria at desk scale.  Each criterion runs its claim suite,
checks the claims and the wall-clock budget, and records one PASS/FAIL line
(shown in the pytest terminal summary, or on stdout when run as a script)."""

import sys

import pytest

from rainbowlab.harness.suites import run_suite

PROFILE = "desk"
TOTAL_BUDGET = 120.0

# (criterion, suite, budget in seconds; None means no extra budget)
CRITERIA = [
    (1, "em_dnr", 5.0),
    (2, "sem_dnr", 5.0),
    (3, "ts2_dnr", 10.0),
    (4, "jump_lower", 10.0),
    (5, "rrt_ts_fs", 15.0),
    (6, "srt_sfs", 5.0),
    (7, "finite_injury", 10.0),
    (8, "bad_family", 10.0),
    (9, "tree_measure", 20.0),
    (10, "bushy", 30.0),
    (12, "em_sts_coh", 10.0),
    # the lattice check runs over every coloring the earlier suites built
    (11, "classifier", None),
]

RESULTS = []


def _run(num, name, budget):
    rep = run_suite(name, seed=0, profile=PROFILE)
    in_time = budget is None or rep.seconds < budget
    ok = rep.passed and in_time
    limit = "no budget" if budget is None else f"budget {budget:.0f}s"
    line = f"criterion {num:2d} {name:<14} {'PASS' if ok else 'FAIL'}  {rep.seconds:6.2f}s ({limit})"
    if not rep.passed:
        bad = next(c for c in rep.checks if not c.passed)
        line += f"  failed: {bad.claim}; witness {bad.as_dict()['witness']}"
    elif not in_time:
        line += "  over budget"
    RESULTS.append((num, ok, rep.seconds, line))
    print(line)
    return rep, in_time


@pytest.mark.parametrize("num,name,budget", CRITERIA, ids=[f"c{n:02d}_{s}" for n, s, _ in CRITERIA])
def test_criterion(num, name, budget):
    rep, in_time = _run(num, name, budget)
    assert rep.passed, rep.text()
    assert in_time, f"{name} took {rep.seconds:.2f}s against a budget of {budget}s"


def test_full_run_under_budget():
    if len(RESULTS) < len(CRITERIA):
        pytest.skip("needs every criterion in the same session")
    total = sum(r[2] for r in RESULTS)
    print(f"all criteria: {total:.1f}s (budget {TOTAL_BUDGET:.0f}s)")
    assert total < TOTAL_BUDGET


if __name__ == "__main__":
    for num, name, budget in CRITERIA:
        _run(num, name, budget)
    sys.exit(0 if all(r[1] for r in RESULTS) else 1)
