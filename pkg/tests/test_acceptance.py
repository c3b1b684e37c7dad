"""Acceptance criteria 1-14, one pass/fail line each at the stated tolerances.

Run directly (``python3 tests/test_acceptance.py``) for the table alone, or
through pytest, which prints the same lines and fails on any unmet check.
Criterion 14 re-runs criteria 1-13 and compares every CSV artifact byte for
byte, so the whole module takes a few minutes.
"""
import sys

import pytest

from loewnerlab import verify

IDS = list(range(1, 15))


def _run_all():
    ctx = verify.Context()
    results = {cid: verify.CRITERIA[cid](ctx) for cid in IDS if cid != 14}
    results[14] = verify.reproducibility(results)
    return results


@pytest.fixture(scope="module")
def results():
    return _run_all()


@pytest.mark.slow
@pytest.mark.parametrize("cid", IDS)
def test_criterion(results, cid, capsys):
    out = results[cid]
    with capsys.disabled():
        print("\n" + verify.format_table({cid: out}))
    failed = [c for c in out.checks if not c.passed]
    assert not failed, "; ".join(f"{c.name}: {c.measured:.6g} (want {c.tolerance})" for c in failed)


if __name__ == "__main__":
    res = _run_all()
    print(verify.format_table(res))
    sys.exit(0 if all(r.passed for r in res.values()) else 1)
